#include "deckit/state_model.hpp"

#include <limits>

#include "deckit/error.hpp"
#include "deckit/parse.hpp"
#include "deckit/pretty.hpp"

namespace deckit::state {

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

Denotation blank(const Type& a, const Type& b, std::uint32_t na, std::uint32_t nb,
                 std::uint32_t ns) {
  Denotation d;
  d.source = a;
  d.target = b;
  d.n_source = na;
  d.n_target = nb;
  d.n_states = ns;
  d.table.assign(na * ns, kUnset);
  return d;
}

[[noreturn]] void not_supported(const Term& t, const char* why) {
  throw Error(ErrorKind::formation, "cannot interpret '" + pretty(t) + "' with states: " + why);
}

std::string state_key(const StateVal& s) {
  std::string k;
  for (const auto& v : s) k += to_string(v) + "\x1f";
  return k;
}

}  // namespace

void settle(Denotation& d) {
  d.min_deco = Decoration::pure;
  const std::uint32_t ns = d.n_states;
  for (std::uint32_t i = 0; i < d.table.size(); ++i)
    if (d.state_of(d.table[i]) != i % ns) {
      d.min_deco = Decoration::modifier;
      return;
    }
  for (std::uint32_t a = 0; a < d.n_source; ++a)
    for (std::uint32_t s = 1; s < ns; ++s)
      if (d.value_of(d.table[a * ns + s]) != d.value_of(d.table[a * ns])) {
        d.min_deco = Decoration::constructor;
        return;
      }
}

Environment::Environment(const Theory& theory, Limits limits) : carriers_(theory, limits) {
  if (!theory.is_state_side())
    throw Error(ErrorKind::unsupported, "theory '" + theory.name + "' is not state-sided");
  std::size_t total = 1;
  for (const auto& loc : theory.effects) {
    total *= carriers_.effect_elements(loc.name).size();
    if (total > limits.max_states)
      throw Error(ErrorKind::carrier_too_large,
                  "the state set exceeds the limit of " + std::to_string(limits.max_states));
  }
  states_.push_back({});
  for (const auto& loc : theory.effects) {
    std::vector<StateVal> next;
    for (const auto& s : states_)
      for (const auto& v : carriers_.effect_elements(loc.name)) {
        StateVal t = s;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    states_ = std::move(next);
  }
  for (std::uint32_t i = 0; i < states_.size(); ++i) state_index_[state_key(states_[i])] = i;

  const std::uint32_t ns = n_states();
  for (const auto& op : theory.ops) {
    Denotation d = blank(op.source, op.target, size(op.source), size(op.target), ns);
    for (const auto& row : op.rows) {
      const std::string where = "operation '" + op.name + "' row '" + to_string(row.input) + "'";
      const std::uint32_t a = index(op.source, row.input);
      const std::uint32_t b = index(op.target, row.output);
      auto fill = [&](std::uint32_t s, std::uint32_t code) {
        if (d.table[a * ns + s] != kUnset)
          throw Error(ErrorKind::duplicate_name, where + " is given twice");
        d.table[a * ns + s] = code;
      };
      if (!row.input_state) {
        // Pure rows, or a theory without locations: one row serves every state.
        for (std::uint32_t s = 0; s < ns; ++s) fill(s, b * ns + s);
      } else {
        const std::uint32_t s = state_index(*row.input_state);
        const std::uint32_t s2 = row.output_state ? state_index(*row.output_state) : s;
        fill(s, b * ns + s2);
      }
    }
    for (std::uint32_t i = 0; i < d.table.size(); ++i)
      if (d.table[i] == kUnset)
        throw Error(ErrorKind::incomplete_const_table,
                    "operation '" + op.name + "' has no row for (" +
                        to_string(element(op.source, i / ns)) + ", " +
                        to_string(states_[i % ns], theory) + ")");
    settle(d);
    consts_.emplace(op.name, std::move(d));
  }
}

std::uint32_t Environment::state_index(const StateVal& s) const {
  auto it = state_index_.find(state_key(s));
  if (it == state_index_.end())
    throw Error(ErrorKind::type_mismatch, "state " + to_string(s, theory()) + " is not in S");
  return it->second;
}

std::uint32_t Environment::size(const Type& t) const {
  return static_cast<std::uint32_t>(carriers_.size(t));
}

std::uint32_t Environment::index(const Type& t, const Value& v) const {
  return static_cast<std::uint32_t>(carriers_.index_of(t, v));
}

Value Environment::element(const Type& t, std::uint32_t i) const {
  return carriers_.elements(t).at(i);
}

const Denotation& Environment::constant(const std::string& name) const {
  auto it = consts_.find(name);
  if (it == consts_.end())
    throw Error(ErrorKind::undeclared_name, "undeclared operation '" + name + "'");
  return it->second;
}

Denotation Environment::from_pure(const Type& a, const Type& b,
                                  const std::vector<std::uint32_t>& f0) const {
  const std::uint32_t ns = n_states();
  Denotation d = blank(a, b, size(a), size(b), ns);
  for (std::uint32_t x = 0; x < d.n_source; ++x)
    for (std::uint32_t s = 0; s < ns; ++s) d.table[x * ns + s] = f0.at(x) * ns + s;
  settle(d);
  return d;
}

Denotation Environment::from_level1(const Type& a, const Type& b,
                                    const std::vector<std::uint32_t>& f1) const {
  const std::uint32_t ns = n_states();
  Denotation d = blank(a, b, size(a), size(b), ns);
  for (std::uint32_t i = 0; i < d.table.size(); ++i) d.table[i] = f1.at(i) * ns + i % ns;
  settle(d);
  return d;
}

Denotation Environment::identity(const Type& a) const {
  std::vector<std::uint32_t> f(size(a));
  for (std::uint32_t i = 0; i < f.size(); ++i) f[i] = i;
  return from_pure(a, a, f);
}

Denotation lift(Decoration from, Decoration to, const Denotation& den) {
  if (from > to)
    throw Error(ErrorKind::illegal_lift, "cannot lift from level " + std::to_string(level(from)) +
                                             " down to level " + std::to_string(level(to)));
  if (den.min_deco > from)
    throw Error(ErrorKind::illegal_lift, "denotation of level " +
                                             std::to_string(level(den.min_deco)) +
                                             " is not a level-" + std::to_string(level(from)) +
                                             " morphism");
  if (from == Decoration::modifier) return den;
  // Rebuild from the level-`from` content: the value part (read at state 0
  // when pure), with the input state passed through.
  Denotation out = blank(den.source, den.target, den.n_source, den.n_target, den.n_states);
  const std::uint32_t ns = den.n_states;
  for (std::uint32_t i = 0; i < out.table.size(); ++i) {
    const std::uint32_t read = from == Decoration::pure ? (i / ns) * ns : i;
    out.table[i] = den.value_of(den.table[read]) * ns + i % ns;
  }
  settle(out);
  return out;
}

Denotation compose(const Denotation& outer, const Denotation& inner) {
  if (inner.target != outer.source)
    throw Error(ErrorKind::type_mismatch, "cannot compose " + to_string(outer.source) +
                                              " with " + to_string(inner.target));
  Denotation d =
      blank(inner.source, outer.target, inner.n_source, outer.n_target, inner.n_states);
  for (std::uint32_t i = 0; i < d.table.size(); ++i) d.table[i] = outer.table[inner.table[i]];
  settle(d);
  return d;
}

Denotation interp_left_pair(const Denotation& f1, const Denotation& f2, const Environment& env) {
  if (f1.min_deco > Decoration::constructor)
    throw Error(ErrorKind::decoration_mismatch, "left pair needs an accessor first component");
  const Type target = Type::prod(f1.target, f2.target);
  const std::uint32_t ns = env.n_states();
  Denotation d = blank(f1.source, target, f1.n_source, env.size(target), ns);
  for (std::uint32_t i = 0; i < d.table.size(); ++i) {
    const std::uint32_t v1 = f1.value_of(f1.table[i]);
    const std::uint32_t out = f2.table[i];
    d.table[i] = (v1 * f2.n_target + f2.value_of(out)) * ns + f2.state_of(out);
  }
  settle(d);
  return d;
}

Denotation interp_right_pair(const Denotation& f1, const Denotation& f2, const Environment& env) {
  if (f2.min_deco > Decoration::constructor)
    throw Error(ErrorKind::decoration_mismatch, "right pair needs an accessor second component");
  const Type target = Type::prod(f1.target, f2.target);
  const std::uint32_t ns = env.n_states();
  Denotation d = blank(f1.source, target, f1.n_source, env.size(target), ns);
  for (std::uint32_t i = 0; i < d.table.size(); ++i) {
    const std::uint32_t out = f1.table[i];
    const std::uint32_t v2 = f2.value_of(f2.table[i]);
    d.table[i] = (f1.value_of(out) * f2.n_target + v2) * ns + f1.state_of(out);
  }
  settle(d);
  return d;
}

namespace {
Denotation eval(const Term& t, const Environment& env, const Overrides* extra) {
  const std::uint32_t ns = env.n_states();
  switch (t.kind()) {
    case TermKind::id: return env.identity(t.type());
    case TermKind::comp: return compose(eval(t.first(), env, extra), eval(t.second(), env, extra));
    case TermKind::pair: {
      Denotation a = eval(t.first(), env, extra);
      Denotation b = eval(t.second(), env, extra);
      if (a.source != b.source) throw Error(ErrorKind::type_mismatch, "pair sources differ");
      switch (t.pair_kind()) {
        case PairKind::left: return interp_left_pair(a, b, env);
        case PairKind::right: return interp_right_pair(a, b, env);
        case PairKind::symmetric: break;
      }
      if (a.min_deco > Decoration::constructor || b.min_deco > Decoration::constructor)
        not_supported(t, "a symmetric pair needs accessors");
      return interp_left_pair(a, b, env);  // b keeps the state, so order is irrelevant
    }
    case TermKind::proj: {
      const Type src = Type::prod(t.type(), t.type2());
      const std::uint32_t nr = env.size(t.type2());
      std::vector<std::uint32_t> f(env.size(src));
      for (std::uint32_t i = 0; i < f.size(); ++i) f[i] = t.index() == 1 ? i / nr : i % nr;
      return env.from_pure(src, t.index() == 1 ? t.type() : t.type2(), f);
    }
    case TermKind::final:
      return env.from_pure(t.type(), Type::unit(),
                           std::vector<std::uint32_t>(env.size(t.type()), 0));
    case TermKind::copr: {
      const Type tgt = Type::sum(t.type(), t.type2());
      const std::uint32_t nl = env.size(t.type());
      const Type& src = t.index() == 1 ? t.type() : t.type2();
      std::vector<std::uint32_t> f(env.size(src));
      for (std::uint32_t i = 0; i < f.size(); ++i) f[i] = t.index() == 1 ? i : nl + i;
      return env.from_pure(src, tgt, f);
    }
    case TermKind::initial: return env.from_pure(Type::empty(), t.type(), {});
    case TermKind::copair: {
      if (t.pair_kind() != PairKind::symmetric)
        not_supported(t, "left and right copairs are exception constructions");
      // (A1 + A2) x S splits as A1 x S + A2 x S; both legs share the state.
      Denotation f = eval(t.first(), env, extra);
      Denotation g = eval(t.second(), env, extra);
      if (f.target != g.target) throw Error(ErrorKind::type_mismatch, "copair targets differ");
      Denotation d = blank(Type::sum(f.source, g.source), f.target, f.n_source + g.n_source,
                           f.n_target, ns);
      std::copy(f.table.begin(), f.table.end(), d.table.begin());
      std::copy(g.table.begin(), g.table.end(), d.table.begin() + f.table.size());
      settle(d);
      return d;
    }
    case TermKind::lookup: {
      const Type tgt = Type::effect(t.name());
      const std::size_t loc = env.theory().effect_index(t.name());
      std::vector<std::uint32_t> f(ns);
      for (std::uint32_t s = 0; s < ns; ++s) f[s] = env.index(tgt, env.states()[s][loc]);
      return env.from_level1(Type::unit(), tgt, f);
    }
    case TermKind::update: {
      const Type src = Type::effect(t.name());
      const std::size_t loc = env.theory().effect_index(t.name());
      Denotation d = blank(src, Type::unit(), env.size(src), 1, ns);
      for (std::uint32_t v = 0; v < d.n_source; ++v)
        for (std::uint32_t s = 0; s < ns; ++s) {
          StateVal next = env.states()[s];
          next[loc] = env.element(src, v);
          d.table[v * ns + s] = env.state_index(next);
        }
      settle(d);
      return d;
    }
    case TermKind::constant: {
      if (extra) {
        auto it = extra->find(t.name());
        if (it != extra->end()) return it->second;
      }
      return env.constant(t.name());
    }
    case TermKind::prop_comp:
      not_supported(t, "propagator composition is an exception construction");
    case TermKind::tag:
    case TermKind::untag:
    case TermKind::untag_all:
      not_supported(t, "exception operations have no state semantics");
    case TermKind::meta: not_supported(t, "metavariables have no semantics");
  }
  not_supported(t, "unknown construction");
}
}  // namespace

Denotation eval(const Term& t, const Environment& env) { return eval(t, env, nullptr); }

Denotation eval(const Term& t, const Environment& env, const Overrides& extra) {
  return eval(t, env, &extra);
}

Verdict decide(const Denotation& lhs, const Denotation& rhs, Strength s, const Environment& env) {
  if (lhs.source != rhs.source || lhs.target != rhs.target)
    throw Error(ErrorKind::type_mismatch, "equation sides have different types");
  if (s == Strength::order)
    throw Error(ErrorKind::unsupported, "'<<' is only defined for exceptions");
  const std::uint32_t ns = lhs.n_states;
  Verdict v;
  for (std::uint32_t i = 0; i < lhs.table.size(); ++i) {
    const std::uint32_t l = lhs.table[i];
    const std::uint32_t r = rhs.table[i];
    const bool differ = s == Strength::strong ? l != r : lhs.value_of(l) != rhs.value_of(r);
    if (!differ) continue;
    Counterexample c;
    c.strength = s;
    c.input = env.element(lhs.source, i / ns);
    c.input_state = env.states()[i % ns];
    c.lhs = env.element(lhs.target, lhs.value_of(l));
    c.lhs_state = env.states()[lhs.state_of(l)];
    c.rhs = env.element(rhs.target, rhs.value_of(r));
    c.rhs_state = env.states()[rhs.state_of(r)];
    v.add(std::move(c));
  }
  return v;
}

Verdict decide(const Equation& eq, const Environment& env) {
  return decide(eval(eq.lhs, env), eval(eq.rhs, env), eq.strength, env);
}

}  // namespace deckit::state
