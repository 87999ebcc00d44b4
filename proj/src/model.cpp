#include "deckit/model.hpp"

#include "deckit/error.hpp"
#include "deckit/parse.hpp"

namespace deckit {

std::string describe(const Counterexample& c, const Theory& theory) {
  auto render = [&](const Value& v, const std::optional<StateVal>& s) {
    if (s) return "(" + to_string(v) + ", " + to_string(*s, theory) + ")";
    return to_outcome_string(v);
  };
  return "input " + render(c.input, c.input_state) + ": lhs gives " + render(c.lhs, c.lhs_state) +
         ", rhs gives " + render(c.rhs, c.rhs_state) + " (tested " + to_string(c.strength) + ")";
}

Model::Model(const Theory& theory, Limits limits) : theory_(&theory) {
  if (theory.is_state_side()) {
    st_ = std::make_unique<state::Environment>(theory, limits);
  } else {
    exc_ = std::make_unique<exc::Environment>(theory, limits);
  }
}

Verdict Model::decide(const Equation& eq) const {
  return exc_ ? exc::decide(eq, *exc_) : state::decide(eq, *st_);
}

Decoration Model::semantic_decoration(const Term& term) const {
  return exc_ ? exc::eval(term, *exc_).min_deco : state::eval(term, *st_).min_deco;
}

bool Model::holds(const TermJudgment& j) const { return semantic_decoration(j.term) <= j.deco; }

bool Model::holds(const Judgment& j) const {
  if (const auto* eq = std::get_if<Equation>(&j)) return decide(*eq).holds;
  return holds(std::get<TermJudgment>(j));
}

std::string Model::eval_point(const Term& term, const Value& input,
                              const std::optional<StateVal>& state) const {
  if (exc_) {
    if (state) throw Error(ErrorKind::unsupported, "exception theories take no state");
    exc::Denotation d = exc::eval(term, *exc_);
    return to_outcome_string(exc_->decode(d.target, d.table.at(exc_->encode(d.source, input))));
  }
  state::Denotation d = state::eval(term, *st_);
  StateVal s0 = state ? *state : StateVal{};
  if (!state && !theory_->effects.empty())
    throw Error(ErrorKind::unsupported, "state theories need an input state");
  const std::uint32_t ns = st_->n_states();
  const std::uint32_t out = d.table.at(st_->index(d.source, input) * ns + st_->state_index(s0));
  return "(" + to_string(st_->element(d.target, d.value_of(out))) + ", " +
         to_string(st_->states()[d.state_of(out)], *theory_) + ")";
}

}  // namespace deckit
