#include "doctest.h"

#include "deckit/calculus.hpp"
#include "deckit/elaborate.hpp"
#include "deckit/error.hpp"
#include "deckit/model.hpp"
#include "deckit/oracle.hpp"
#include "deckit/pretty.hpp"
#include "support.hpp"

using namespace deckit;
using support::atom;
using support::packet;
using support::term;

namespace {

const Type kVal = Type::base("Val");

const Theory& handlers() {
  static const Theory th = support::theory("handlers");
  return th;
}

// untag[T] followed by the injection into V_T + 0
Term opened(const char* name) {
  return Term::comp(Term::copr(1, Type::effect(name), Type::empty()), Term::untag(name));
}

}  // namespace

TEST_CASE("throw: initial after tag, a propagator V_T -> B") {
  const Theory& th = handlers();
  const Type b = Type::base("Bool");
  const Term t = elaborate_throw(b, "T", th);
  CHECK(t == Term::comp(Term::initial(b), Term::tag("T")));
  CHECK(infer_decoration(t, th) == Decoration::constructor);
  CHECK(typecheck(t, th) == Typing{Type::effect("T"), b});
  CHECK(typecheck(elaborate_throw(Type::unit(), "T", th), th) ==
        Typing{Type::effect("T"), Type::unit()});
  CHECK_THROWS_AS(elaborate_throw(b, "Nope", th), Error);
}

TEST_CASE("catch core: one handler, two handlers, catch-all") {
  const Theory& th = handlers();
  const Term g1 = term("g1", th);
  const Term g2 = term("g2", th);
  const Term g0 = term("g0", th);

  const Term one = elaborate_catch_core({{"T", g1}}, kVal, std::nullopt, th);
  const Term k1 = Term::comp(Term::copair(PairKind::symmetric, g1, Term::initial(kVal)), opened("T"));
  CHECK(one == k1);

  const Term two = elaborate_catch_core({{"T", g1}, {"R", g2}}, kVal, std::nullopt, th);
  const Term k2 = Term::comp(Term::copair(PairKind::symmetric, g2, Term::initial(kVal)), opened("R"));
  CHECK(two == Term::comp(Term::copair(PairKind::left, g1, k2), opened("T")));

  const Term all = elaborate_catch_core({{std::nullopt, g0}}, kVal, std::nullopt, th);
  CHECK(all == Term::comp(g0, Term::untag_all()));

  for (const Term& t : {one, two, all}) {
    CHECK(typecheck(t, th) == Typing{Type::empty(), kVal});
    CHECK(infer_decoration(t, th) == Decoration::modifier);
  }
}

TEST_CASE("catch core: clauses after a catch-all are dropped but still typed") {
  const Theory& th = handlers();
  const Term g0 = term("g0", th);
  const Term a = elaborate_catch_core({{std::nullopt, g0}, {"T", term("h", th)}}, kVal,
                                      std::nullopt, th);
  CHECK(a == elaborate_catch_core({{std::nullopt, g0}}, kVal, std::nullopt, th));
  // g2 has source V_R, so it cannot handle T
  CHECK_THROWS_AS(elaborate_catch_core({{std::nullopt, g0}, {"T", term("g2", th)}}, kVal,
                                       std::nullopt, th),
                  Error);
  CHECK_THROWS_AS(elaborate_catch_core({}, kVal, std::nullopt, th), Error);
}

TEST_CASE("try/catch: a propagator built with prop-comp") {
  const Theory& th = handlers();
  const Term body = term("body", th);
  TryCatchSpec spec{body, {{"T", term("g1", th)}}, std::nullopt};
  const Term t = elaborate_try_catch(spec, th);
  const Term core = elaborate_catch_core(spec.handlers, kVal, std::nullopt, th);
  const Term expected =
      Term::prop_comp(Term::copair(PairKind::left, Term::id(kVal), core),
                      Term::comp(Term::copr(1, kVal, Type::empty()), body));
  CHECK(t == expected);
  CHECK(infer_decoration(t, th) == Decoration::constructor);
  CHECK(typecheck(t, th) == Typing{Type::base("Three"), kVal});
  // the parser elaborates the same way
  CHECK(term("try(body) catch(T => g1)", th) == t);
}

TEST_CASE("try/catch: the single-handler list form is the plain form") {
  const Theory& th = handlers();
  CHECK(term("try(body) catch(T => g1)", th) ==
        elaborate_try_catch({term("body", th), {{"T", term("g1", th)}}, std::nullopt}, th));
  CHECK(term("try(body) catch(T => g1) catchall(g0)", th) ==
        term("try(body) catch(T => g1, all => g0)", th));
}

TEST_CASE("try/catch: evaluation on every input matches the direct interpreter") {
  const Theory& th = handlers();
  const Model model(th);
  TryCatchSpec spec{term("body", th), {{"T", term("g1", th)}}, std::nullopt};
  const Term t = elaborate_try_catch(spec, th);
  CHECK(oracle::compare_try_catch(spec, th).empty());
  // a pre-existing R packet passes through untouched
  CHECK(model.eval_point(t, packet("R", "tt"), std::nullopt) == "exn R tt");
  // y raises T b, handled by g1
  CHECK(model.eval_point(t, atom("y"), std::nullopt) == "ok a");
  // z raises R ff, unlisted
  CHECK(model.eval_point(t, atom("z"), std::nullopt) == "exn R ff");
}

TEST_CASE("conditional: copair of the branches after the test") {
  const Theory st = support::theory("states_plus");
  const Term c = term("if(zero, toggle, reset)", st);
  CHECK(c == Term::comp(Term::copair(PairKind::symmetric, term("toggle", st), term("reset", st)),
                        term("zero", st)));
  CHECK(check_formation(c, st.profile(), st).empty());

  const Theory& th = handlers();
  const Type vu = Type::effect("U");
  const Term test = Term::copr(1, vu, vu);
  const Term prop = elaborate_conditional(test, term("g0 . final[V_U]", th),
                                          term("initial[Val] . tag[U]", th));
  CHECK(check_formation(prop, profile(Logic::exc), th).empty());
  const Term catcher = elaborate_conditional(test, term("g0 . untagall . tag[U]", th),
                                             term("g0 . final[V_U]", th));
  CHECK(typecheck(catcher, th) == Typing{vu, kVal});
  const auto v = check_formation(catcher, profile(Logic::exc), th);
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].rule == "copair");
}

TEST_CASE("seqpair: pure components give the plain pair") {
  const Theory& th = handlers();
  const Model model(th);
  const Term a1 = term("g1", th);
  const Term a2 = term("g1 . id[V_T]", th);
  const Term s = elaborate_seq_pair(a1, a2, th);
  CHECK(model.decide(Equation{s, Term::pair(PairKind::symmetric, a1, a2), Strength::strong}).holds);
}

TEST_CASE("seqpair: the first raise wins") {
  const Theory& th = handlers();
  const Model model(th);
  // body raises T on y and R on z; body_u raises U on y and T on z
  const Term s = elaborate_seq_pair(term("body", th), term("body_u", th), th);
  CHECK(model.eval_point(s, atom("y"), std::nullopt) == "exn T b");
  CHECK(model.eval_point(s, atom("z"), std::nullopt) == "exn R ff");
  CHECK(model.eval_point(s, atom("x"), std::nullopt) == "ok (a, b)");
  const Term r = elaborate_seq_pair(term("body_u", th), term("body", th), th);
  CHECK(model.eval_point(r, atom("y"), std::nullopt) == "exn U u");
  CHECK(model.eval_point(r, atom("z"), std::nullopt) == "exn T a");
}

TEST_CASE("seqpair: the second component reads the state the first one left") {
  const Theory st = support::theory("states");
  const Model model(st);
  const auto& env = model.states();
  const Term s = term("pr2[1, V_X] . seqpair(toggle, lookup[X])", st);
  const Term r = term("pr1[V_X, 1] . seqpair(lookup[X], toggle)", st);
  const auto ds = state::eval(s, env);
  const auto dr = state::eval(r, env);
  // read X after toggling vs before it
  for (std::uint32_t si = 0; si < env.n_states(); ++si) {
    const std::string x = env.states()[si][0].name();
    const std::string flipped = x == "0" ? "1" : "0";
    CHECK(env.element(Type::effect("X"), ds.value_of(ds.table[si])).name() == flipped);
    CHECK(env.element(Type::effect("X"), dr.value_of(dr.table[si])).name() == x);
    // both run toggle exactly once
    CHECK(env.states()[ds.state_of(ds.table[si])][0].name() == flipped);
    CHECK(env.states()[dr.state_of(dr.table[si])][0].name() == flipped);
  }
}
