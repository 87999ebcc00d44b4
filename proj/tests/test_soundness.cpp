#include "doctest.h"

#include "deckit/calculus.hpp"
#include "deckit/error.hpp"
#include "deckit/model.hpp"
#include "deckit/soundness.hpp"
#include "support.hpp"

using namespace deckit;

namespace {

soundness::Budget samples(std::size_t n) {
  soundness::Budget b;
  b.samples = n;
  return b;
}

}  // namespace

TEST_CASE("w-subs and effect are sound on Demo") {
  const Theory th = support::theory("demo");
  for (const char* rule : {"w-subs", "effect"}) {
    const auto r = soundness::check_rule_sound(rule, th, samples(500));
    INFO(soundness::to_text(r));
    CHECK(r.sound());
    CHECK(r.tried > 0);
    CHECK(r.premises_true > 0);
    CHECK_FALSE(r.budget_exhausted);
  }
}

TEST_CASE("copair-u is sound on a state theory with modifier copairs") {
  const Theory th = support::theory("states_plus");
  const auto r = soundness::check_rule_sound("copair-u", th, samples(200));
  INFO(soundness::to_text(r));
  CHECK(r.sound());
  CHECK(r.premises_true > 0);
}

TEST_CASE("unknown rules are refused") {
  const Theory th = support::theory("demo");
  CHECK_THROWS_AS(soundness::check_rule_sound("w-subst", th), Error);
  CHECK_THROWS_AS(soundness::find_side_condition_witness("no-such-variant", th), Error);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  const Theory th = support::theory("pairs");
  const auto a = soundness::check_rules(th, samples(60));
  const auto b = soundness::check_rules(th, samples(60));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(soundness::to_json(a[i]).dump() == soundness::to_json(b[i]).dump());
  soundness::Budget other = samples(60);
  other.seed = 7;
  const auto c = soundness::check_rules(th, other);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].premises_true != c[i].premises_true;
  CHECK(differs);
}

TEST_CASE("generated terms are well formed and respect the bound") {
  const Theory th = support::theory("handlers");
  soundness::TermSource src(th, 3);
  std::size_t got = 0;
  for (int i = 0; i < 300; ++i) {
    const Type a = src.type();
    const Type b = src.type();
    const auto t = src.term(a, b, Decoration::constructor);
    if (!t) continue;
    ++got;
    CHECK(typecheck(*t, th) == Typing{a, b});
    CHECK(infer_decoration(*t, th) <= Decoration::constructor);
    CHECK(check_formation(*t, th.profile(), th).empty());
  }
  CHECK(got > 100);
}

TEST_CASE("side-condition witnesses on Demo are found and re-verified") {
  const Theory th = support::theory("demo");
  const Model model(th);
  for (const auto& variant : soundness::witness_variants()) {
    const auto w = soundness::find_side_condition_witness(variant, th);
    INFO(soundness::to_text(w));
    CHECK(w.found);
    CHECK(w.verified);
    CHECK_FALSE(w.counterexample.empty());
  }
}

TEST_CASE("dropping the purity condition of w-subs breaks it: a throw after the axiom") {
  // independent of the harness: g1 = id, g2 = untag.tag, f = throw[V_T, T]
  const Theory th = support::theory("demo");
  const Model model(th);
  CHECK(model.decide(support::equation("id[V_T] ~ untag[T] . tag[T]", th)).holds);
  const Verdict v =
      model.decide(support::equation("id[V_T] . throw[V_T, T] ~ untag[T] . tag[T] . throw[V_T, T]", th));
  REQUIRE_FALSE(v.holds);
  CHECK(v.counterexample->lhs.is(ValueKind::packet));
  CHECK_FALSE(v.counterexample->rhs.is(ValueKind::packet));
}
