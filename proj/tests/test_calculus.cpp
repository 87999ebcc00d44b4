#include "doctest.h"

#include "deckit/calculus.hpp"
#include "deckit/elaborate.hpp"
#include "deckit/error.hpp"
#include "deckit/pretty.hpp"
#include "support.hpp"

using namespace deckit;
using support::term;

namespace {

const Type kBool = Type::base("Bool");
const Type kVT = Type::effect("T");
const Type kVR = Type::effect("R");

const Theory& demo() {
  static const Theory th = support::theory("demo");
  return th;
}

}  // namespace

TEST_CASE("typecheck: identity, tag and untag after tag") {
  const Theory& th = demo();
  CHECK(typecheck(Term::id(kBool), th) == Typing{kBool, kBool});
  CHECK(typecheck(Term::tag("T"), th) == Typing{kVT, Type::empty()});
  CHECK(typecheck(Term::comp(Term::untag("T"), Term::tag("T")), th) == Typing{kVT, kVT});
  CHECK(typecheck(Term::untag_all(), th) == Typing{Type::empty(), Type::unit()});
}

TEST_CASE("typecheck: structural constants") {
  const Theory& th = demo();
  const Type val = Type::base("Val");
  CHECK(typecheck(Term::proj(1, kBool, val), th) == Typing{Type::prod(kBool, val), kBool});
  CHECK(typecheck(Term::proj(2, kBool, val), th) == Typing{Type::prod(kBool, val), val});
  CHECK(typecheck(Term::copr(2, kBool, val), th) == Typing{val, Type::sum(kBool, val)});
  CHECK(typecheck(Term::final(kBool), th) == Typing{kBool, Type::unit()});
  CHECK(typecheck(Term::initial(kBool), th) == Typing{Type::empty(), kBool});
  CHECK(typecheck(term("f", th), th) == Typing{kBool, val});
}

TEST_CASE("typecheck: errors name the offending types and names") {
  const Theory& th = demo();
  try {
    typecheck(Term::comp(Term::tag("T"), Term::tag("T")), th);
    FAIL("expected a type mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::type_mismatch);
    CHECK(std::string(e.what()).find("V_T") != std::string::npos);
  }
  try {
    typecheck(Term::tag("Q"), th);
    FAIL("expected an undeclared name");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undeclared_name);
    CHECK(std::string(e.what()).find("Q") != std::string::npos);
  }
}

TEST_CASE("infer_decoration: constants and composites") {
  const Theory& th = demo();
  CHECK(infer_decoration(Term::id(kBool), th) == Decoration::pure);
  CHECK(infer_decoration(Term::tag("T"), th) == Decoration::constructor);
  CHECK(infer_decoration(Term::untag("T"), th) == Decoration::modifier);
  CHECK(infer_decoration(Term::untag_all(), th) == Decoration::modifier);
  CHECK(infer_decoration(Term::comp(Term::untag("T"), Term::tag("T")), th) ==
        Decoration::modifier);
  CHECK(infer_decoration(term("f", th), th) == Decoration::constructor);
  CHECK(infer_decoration(term("pair(id[Bool], id[Bool])", th), th) == Decoration::pure);
}

TEST_CASE("infer_decoration: a handler composed with a raising body is a propagator") {
  const Theory& th = demo();
  const Term core = elaborate_catch_core({Handler{"T", Term::id(kVT)}}, kVT, std::nullopt, th);
  const Term in1 = Term::copr(1, kVT, Type::empty());
  const Term body = Term::comp(in1, elaborate_throw(kVT, "T", th));
  const Term k = Term::copair(PairKind::left, Term::id(kVT), core);
  REQUIRE(infer_decoration(k, th) == Decoration::modifier);
  CHECK(infer_decoration(Term::prop_comp(k, body), th) == Decoration::constructor);
  // max(level(f), min(level(k), 1)) with a pure inner term
  CHECK(infer_decoration(Term::prop_comp(k, in1), th) == Decoration::constructor);
  CHECK(infer_decoration(Term::prop_comp(Term::id(kVT), Term::id(kVT)), th) == Decoration::pure);
}

TEST_CASE("formation: two catchers in a copair break the exception bound") {
  const Theory& th = demo();
  const Term bad = Term::copair(PairKind::symmetric, Term::untag("T"), Term::untag("R"));
  const auto v = check_formation(bad, profile(Logic::exc), th);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == "copair");
  CHECK(v[0].path.empty());
  CHECK(v[0].first == Decoration::modifier);
  CHECK(v[0].second == Decoration::modifier);
  CHECK(v[0].message.find("copair requires d<=1") != std::string::npos);
}

TEST_CASE("formation: modifier copairs are fine in ST_PLUS, pure pairs in MON") {
  const Theory st = support::theory("states_plus");
  CHECK(check_formation(term("copair(toggle | reset)", st), profile(Logic::st_plus), st).empty());
  CHECK(!check_formation(term("copair(toggle | reset)", st), profile(Logic::st), st).empty());
  const Theory mon = support::theory("mon");
  CHECK(check_formation(Term::pair(PairKind::symmetric, Term::id(kBool), Term::id(kBool)),
                        profile(Logic::mon), mon)
            .empty());
}

TEST_CASE("formation: violations are reported at their subterm path") {
  const Theory& th = demo();
  const Term bad = Term::copair(PairKind::symmetric, Term::untag("T"), Term::untag("R"));
  const Term wrapped = Term::comp(Term::id(kVT), bad);
  const auto v = check_formation(wrapped, profile(Logic::exc), th);
  REQUIRE(v.size() == 1);
  CHECK(to_string(v[0].path) == "1");
  CHECK_THROWS_AS(require_well_formed(Term::comp(Term::final(kVT), bad), th), Error);
}

TEST_CASE("formation: EQ has no effects at all") {
  const Theory eq = support::theory("eq");
  CHECK_THROWS_AS(require_well_formed(Term::tag("T"), eq), Error);
}

TEST_CASE("pretty: surface syntax for composites") {
  const Theory& th = demo();
  CHECK(pretty(Term::comp(Term::untag("T"), Term::tag("T"))) == "untag[T] . tag[T]");
  const Term k = term("f", th);
  CHECK(pretty(Term::prop_comp(Term::id(Type::base("Val")), k)) == "id[Val] (.) f");
  CHECK(pretty(Term::copair(PairKind::left, k, k)) == "lcopair(f | f)");
  CHECK(pretty(Equation{Term::id(kVT), Term::id(kVT), Strength::weak}) == "id[V_T] ~ id[V_T]");
}
