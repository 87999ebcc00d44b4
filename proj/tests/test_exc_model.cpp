#include "doctest.h"

#include <algorithm>

#include "deckit/error.hpp"
#include "deckit/exc_model.hpp"
#include "deckit/model.hpp"
#include "deckit/oracle.hpp"
#include "support.hpp"

using namespace deckit;
using support::atom;
using support::packet;
using support::term;

namespace {

const Type kBool = Type::base("Bool");
const Type kVal = Type::base("Val");
const Type kVT = Type::effect("T");

struct Fixture {
  Theory th = support::theory("demo");
  exc::Environment env{th};

  std::uint32_t packet_index(const Value& p) const {
    const auto& ps = env.packets();
    return static_cast<std::uint32_t>(std::find(ps.begin(), ps.end(), p) - ps.begin());
  }
  // level-2 code of an input or output over `t`
  std::uint32_t code(const Type& t, const Value& v) const {
    if (v.is(ValueKind::packet)) return env.size(t) + packet_index(v);
    return env.encode(t, v);
  }
  Value apply(const exc::Denotation& d, const Value& in) const {
    const std::uint32_t out = d.table.at(code(d.source, in));
    if (out >= d.n_target) return env.packets().at(out - d.n_target);
    return env.decode(d.target, out);
  }
};

}  // namespace

TEST_CASE("exception set: packets in declaration order, then payload order") {
  Fixture fx;
  REQUIRE(fx.env.n_exc() == 4);
  CHECK(fx.env.packets()[0] == packet("T", "a"));
  CHECK(fx.env.packets()[1] == packet("T", "b"));
  CHECK(fx.env.packets()[2] == packet("R", "a"));
  CHECK(fx.env.packets()[3] == packet("R", "b"));
  CHECK(fx.env.packet_offset("R") == 2);
}

TEST_CASE("untag opens its own packets and passes the others on") {
  Fixture fx;
  const auto u = exc::eval(Term::untag("T"), fx.env);
  CHECK(u.min_deco == Decoration::modifier);
  CHECK(fx.apply(u, packet("T", "b")) == atom("b"));
  CHECK(fx.apply(u, packet("T", "a")) == atom("a"));
  CHECK(fx.apply(u, packet("R", "a")) == packet("R", "a"));
  const auto all = exc::eval(Term::untag_all(), fx.env);
  CHECK(fx.apply(all, packet("T", "a")) == Value::unit());
  CHECK(fx.apply(all, packet("R", "b")) == Value::unit());
}

TEST_CASE("lift keeps the part below the source level and rebuilds the rest") {
  Fixture fx;
  const Theory tags = support::theory("tags");
  const exc::Environment env(tags);
  // swap : V_T -> V_T, with a scrambled packet part
  exc::Denotation swap = env.constant("swap");
  const std::uint32_t n = swap.n_source;
  exc::Denotation scrambled = swap;
  for (std::uint32_t i = n; i < scrambled.table.size(); ++i) scrambled.table[i] = 0;
  scrambled.min_deco = Decoration::pure;
  const auto lifted = exc::lift(Decoration::pure, Decoration::modifier, scrambled);
  CHECK(lifted == swap);
  for (std::uint32_t i = n; i < lifted.table.size(); ++i) CHECK(lifted.table[i] == i);

  // f raises T on ff; a lift from level 1 sends every packet to itself
  exc::Denotation f = fx.env.constant("f");
  exc::Denotation f1 = f;
  for (std::uint32_t i = f1.n_source; i < f1.table.size(); ++i) f1.table[i] = 0;
  f1.min_deco = Decoration::constructor;
  const auto g = exc::lift(Decoration::constructor, Decoration::modifier, f1);
  CHECK(fx.apply(g, packet("R", "b")) == packet("R", "b"));
  CHECK(fx.apply(g, atom("ff")) == packet("T", "b"));

  CHECK(exc::lift(Decoration::pure, Decoration::pure, swap) == swap);
  CHECK_THROWS_AS(exc::lift(Decoration::modifier, Decoration::pure, swap), Error);
  CHECK_THROWS_AS(exc::lift(Decoration::pure, Decoration::modifier, f), Error);
}

TEST_CASE("untag after tag: ordinary on values, opens incoming packets") {
  Fixture fx;
  const auto d = exc::eval(term("untag[T] . tag[T]", fx.th), fx.env);
  CHECK(fx.apply(d, atom("a")) == atom("a"));
  CHECK(fx.apply(d, packet("T", "b")) == atom("b"));
  CHECK(fx.apply(d, packet("R", "b")) == packet("R", "b"));
}

TEST_CASE("decide: weak holds, strong fails at a T packet") {
  Fixture fx;
  const Verdict weak = exc::decide(support::equation("untag[T] . tag[T] ~ id[V_T]", fx.th), fx.env);
  CHECK(weak.holds);
  const Verdict strong =
      exc::decide(support::equation("untag[T] . tag[T] == id[V_T]", fx.th), fx.env);
  REQUIRE_FALSE(strong.holds);
  CHECK(strong.failing_inputs == 2);
  REQUIRE(strong.failures.size() == 2);
  CHECK(strong.failures[1].input == packet("T", "b"));
  CHECK(strong.failures[1].lhs == atom("b"));
  CHECK(strong.failures[1].rhs == packet("T", "b"));
  CHECK(strong.counterexample->strength == Strength::strong);
  CHECK(describe(strong.failures[1], fx.th) ==
        "input exn T b: lhs gives ok b, rhs gives exn T b (tested strong)");
  CHECK(exc::decide(Equation{Term::id(kVT), Term::id(kVT), Strength::strong}, fx.env).holds);
}

TEST_CASE("decide agrees with the direct interpreter on every input") {
  Fixture fx;
  const char* terms[] = {"untag[T] . tag[T]", "untag[T] . tag[R] . initial[V_R] . tag[T]",
                         "untag[R] . tag[T]", "untagall . tag[R] . id[V_R] . untag[R] . tag[T]"};
  for (const char* text : terms) {
    const Term t = term(text, fx.th);
    const auto d = exc::eval(t, fx.env);
    std::vector<Value> inputs;
    for (std::uint32_t i = 0; i < d.n_source; ++i) inputs.push_back(fx.env.decode(d.source, i));
    for (const auto& p : fx.env.packets()) inputs.push_back(p);
    for (const auto& in : inputs) CHECK(fx.apply(d, in) == oracle::run(t, in, fx.th));
  }
}

TEST_CASE("decompose and the order relation") {
  Fixture fx;
  const auto f = fx.env.constant("f");
  const auto d = exc::decompose(f);
  const std::uint32_t tt = fx.env.encode(kBool, atom("tt"));
  const std::uint32_t ff = fx.env.encode(kBool, atom("ff"));
  CHECK(d.defined == std::vector<std::uint32_t>{tt});
  CHECK(d.exceptional == std::vector<std::uint32_t>{ff});
  CHECK(d.normal.at(tt) == fx.env.encode(kVal, atom("a")));
  CHECK(fx.env.packets()[d.abrupt.at(ff)] == packet("T", "b"));

  const auto ab = fx.env.from_pure(kBool, kVal, {fx.env.encode(kVal, atom("a")),
                                                 fx.env.encode(kVal, atom("b"))});
  const auto ba = fx.env.from_pure(kBool, kVal, {fx.env.encode(kVal, atom("b")),
                                                 fx.env.encode(kVal, atom("a"))});
  CHECK(exc::decompose(ab).exceptional.empty());
  CHECK(exc::geq(ab, f));
  CHECK_FALSE(exc::geq(ba, f));
  CHECK(exc::geq(ab, ab));

  // raising everywhere: nothing is defined and any v is above it
  const std::uint32_t nv = fx.env.size(kVal);
  const auto raise = fx.env.from_level1(kBool, kVal, {nv + 1, nv + 3});
  CHECK(exc::decompose(raise).defined.empty());
  CHECK(exc::geq(ba, raise));
  CHECK_THROWS_AS(exc::decompose(exc::eval(Term::untag("T"), fx.env)), Error);
}

TEST_CASE("left pair of a pure map and a propagator") {
  Fixture fx;
  const auto f = fx.env.constant("f");
  const auto v = fx.env.from_pure(kBool, kVal, {fx.env.encode(kVal, atom("a")),
                                                fx.env.encode(kVal, atom("b"))});
  const auto h = exc::interp_left_pair(v, f, fx.env);
  CHECK(h.min_deco == Decoration::constructor);
  CHECK(fx.apply(h, atom("tt")) == Value::tuple(atom("a"), atom("a")));
  CHECK(fx.apply(h, atom("ff")) == packet("T", "b"));
  CHECK(fx.apply(h, packet("R", "a")) == packet("R", "a"));

  // pure second component: the plain pair
  const auto p = exc::interp_left_pair(v, v, fx.env);
  for (const char* in : {"tt", "ff"})
    CHECK(fx.apply(p, atom(in)) == Value::tuple(fx.apply(v, atom(in)), fx.apply(v, atom(in))));
  CHECK_THROWS_AS(exc::interp_left_pair(f, v, fx.env), Error);
}

TEST_CASE("Model picks the exception side and renders points") {
  Fixture fx;
  const Model m(fx.th);
  CHECK(m.exception_side());
  CHECK(m.eval_point(term("f", fx.th), atom("ff"), std::nullopt) == "exn T b");
  CHECK(m.semantic_decoration(term("initial[V_T] . tag[R]", fx.th)) == Decoration::constructor);
  // opens incoming R packets
  CHECK(m.semantic_decoration(term("untag[R] . tag[R] . initial[V_R] . tag[T]", fx.th)) ==
        Decoration::modifier);
}
