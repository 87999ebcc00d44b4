#include "doctest.h"

#include "deckit/error.hpp"
#include "deckit/model.hpp"
#include "deckit/state_model.hpp"
#include "support.hpp"

using namespace deckit;
using support::atom;
using support::term;

namespace {

const Type kVX = Type::effect("X");

struct Fixture {
  Theory th = support::theory("states");
  state::Environment env{th};

  StateVal st(const char* x, const char* y) const { return {atom(x), atom(y)}; }

  struct Out {
    Value value;
    StateVal state;
  };
  Out apply(const state::Denotation& d, const Value& a, const StateVal& s) const {
    const std::uint32_t in = env.index(d.source, a) * env.n_states() + env.state_index(s);
    const std::uint32_t out = d.table.at(in);
    return {env.element(d.target, d.value_of(out)), env.states().at(d.state_of(out))};
  }
};

}  // namespace

TEST_CASE("state set: full product, first location major") {
  Fixture fx;
  REQUIRE(fx.env.n_states() == 4);
  CHECK(fx.env.states()[0] == fx.st("0", "u"));
  CHECK(fx.env.states()[1] == fx.st("0", "w"));
  CHECK(fx.env.states()[2] == fx.st("1", "u"));
  CHECK(fx.env.state_index(fx.st("1", "w")) == 3);
}

TEST_CASE("update writes its location, lookup reads it") {
  Fixture fx;
  const auto up = state::eval(Term::update("X"), fx.env);
  const auto r = fx.apply(up, atom("0"), fx.st("1", "u"));
  CHECK(r.value == Value::unit());
  CHECK(r.state == fx.st("0", "u"));
  CHECK(up.min_deco == Decoration::modifier);

  const auto look = state::eval(Term::lookup("X"), fx.env);
  const auto l = fx.apply(look, Value::unit(), fx.st("1", "u"));
  CHECK(l.value == atom("1"));
  CHECK(l.state == fx.st("1", "u"));
  CHECK(look.min_deco == Decoration::constructor);
}

TEST_CASE("lift from levels 0 and 1 never touches the state") {
  Fixture fx;
  const auto look = state::eval(Term::lookup("X"), fx.env);
  const auto lifted = state::lift(Decoration::constructor, Decoration::modifier, look);
  CHECK(lifted == look);
  for (std::uint32_t i = 0; i < lifted.table.size(); ++i)
    CHECK(lifted.state_of(lifted.table[i]) == i % fx.env.n_states());

  // flip : V_X -> V_X, read at state 0 and spread over every state
  const auto flip = fx.env.constant("flip");
  state::Denotation scrambled = flip;
  const std::uint32_t ns = fx.env.n_states();
  for (std::uint32_t i = 0; i < scrambled.table.size(); ++i)
    if (i % ns != 0) scrambled.table[i] = 0;
  scrambled.min_deco = Decoration::pure;
  const auto f2 = state::lift(Decoration::pure, Decoration::modifier, scrambled);
  CHECK(f2 == flip);
  for (const auto& s : fx.env.states()) CHECK(fx.apply(f2, atom("0"), s).state == s);

  CHECK(state::lift(Decoration::modifier, Decoration::modifier, look) == look);
  CHECK_THROWS_AS(state::lift(Decoration::modifier, Decoration::constructor, look), Error);
  CHECK_THROWS_AS(state::lift(Decoration::pure, Decoration::modifier, look), Error);
}

TEST_CASE("lookup after update returns the written value and keeps the write") {
  Fixture fx;
  const auto d = state::eval(term("lookup[X] . update[X]", fx.th), fx.env);
  const auto r = fx.apply(d, atom("0"), fx.st("1", "u"));
  CHECK(r.value == atom("0"));
  CHECK(r.state == fx.st("0", "u"));
}

TEST_CASE("decide: weak lookup/update holds, strong fails on the final state") {
  Fixture fx;
  CHECK(state::decide(support::equation("lookup[X] . update[X] ~ id[V_X]", fx.th), fx.env).holds);
  const Verdict v =
      state::decide(support::equation("lookup[X] . update[X] == id[V_X]", fx.th), fx.env);
  REQUIRE_FALSE(v.holds);
  const Counterexample& c = *v.counterexample;
  CHECK(c.input == atom("0"));
  CHECK(*c.input_state == fx.st("1", "u"));
  CHECK(c.lhs == atom("0"));
  CHECK(c.rhs == atom("0"));
  CHECK(*c.lhs_state == fx.st("0", "u"));
  CHECK(*c.rhs_state == fx.st("1", "u"));
  CHECK(describe(c, fx.th).find("tested strong") != std::string::npos);
  // inputs (a, s) with s.X != a: half of V_X x S
  CHECK(v.failing_inputs == 4);
  CHECK(state::decide(Equation{Term::final(Type::unit()), Term::final(Type::unit()),
                               Strength::strong},
                      fx.env)
            .holds);
}

TEST_CASE("left and right pairs thread the state through the modifier only") {
  Fixture fx;
  const auto lp = state::eval(term("lpair(lookup[X], toggle)", fx.th), fx.env);
  const auto r = fx.apply(lp, Value::unit(), fx.st("0", "w"));
  CHECK(r.value == Value::tuple(atom("0"), Value::unit()));
  CHECK(r.state == fx.st("1", "w"));
  const auto rp = state::eval(term("rpair(toggle, lookup[X])", fx.th), fx.env);
  const auto q = fx.apply(rp, Value::unit(), fx.st("1", "u"));
  CHECK(q.value == Value::tuple(Value::unit(), atom("1")));
  CHECK(q.state == fx.st("0", "u"));
}

TEST_CASE("modifier copair routes by the sum tag and shares the state") {
  const Theory th = support::theory("states_plus");
  const state::Environment env(th);
  const auto d = state::eval(term("copair(toggle | reset)", th), env);
  const auto toggle = env.constant("toggle");
  const auto reset = env.constant("reset");
  const std::uint32_t ns = env.n_states();
  // source 1 + 1: inl () first, then inr ()
  for (std::uint32_t s = 0; s < ns; ++s) {
    CHECK(d.table[s] == toggle.table[s]);
    CHECK(d.table[ns + s] == reset.table[s]);
  }
  const Model m(th);
  CHECK_FALSE(m.exception_side());
  CHECK(m.eval_point(term("if(zero, toggle, reset)", th), Value::unit(),
                     parse_state("{X=0, F=u}", th)) == "((), {X=1, F=u})");
}
