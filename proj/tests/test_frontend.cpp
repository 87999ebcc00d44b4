#include "doctest.h"

#include <filesystem>
#include <functional>
#include <map>

#include "deckit/calculus.hpp"
#include "deckit/error.hpp"
#include "deckit/parse.hpp"
#include "deckit/pretty.hpp"
#include "deckit/soundness.hpp"
#include "support.hpp"

using namespace deckit;
namespace fs = std::filesystem;

namespace {

std::string error_text(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("the demo theory: two exceptions, one operation, two checks") {
  const Theory th = support::theory("demo");
  CHECK(th.name == "Demo");
  CHECK(th.kind == TheoryKind::exceptions);
  CHECK(th.logic == Logic::exc);
  CHECK(th.effects.size() == 2);
  REQUIRE(th.ops.size() == 1);
  CHECK(th.ops[0].name == "f");
  CHECK(th.ops[0].deco == Decoration::constructor);
  CHECK(th.ops[0].rows.size() == 2);
  REQUIRE(th.checks.size() == 2);
  CHECK(th.checks[0].expect_holds);
  CHECK_FALSE(th.checks[1].expect_holds);
  CHECK(th.checks[1].eq.strength == Strength::strong);
}

TEST_CASE("a minimal MON theory without effects is valid") {
  const Theory th = parse_theory("theory Tiny none logic MON\ntype B = {x}\n");
  CHECK(th.effects.empty());
  CHECK(th.logic == Logic::mon);
  CHECK(typecheck(parse_term("id[B]", ParseContext{&th, nullptr}), th) ==
        Typing{Type::base("B"), Type::base("B")});
}

TEST_CASE("an undeclared V_Q is reported by name") {
  const std::string msg = error_text([] {
    parse_theory("theory Bad exceptions logic EXC\nexception T of {a}\nop f : V_Q -> V_T deco 0 {}\n");
  });
  REQUIRE_FALSE(msg.empty());
  CHECK(msg.find("Q") != std::string::npos);
  CHECK(msg.find("line 3") != std::string::npos);
}

TEST_CASE("syntax errors carry a line and column") {
  const std::string msg = error_text([] { parse_term("pair(id[A], id[B]"); });
  CHECK(msg.find("line 1, column") != std::string::npos);
  const std::string dpf = error_text([] { parse_derivation("(rule s-refl (concl id[Bool] == id[Bool])"); });
  CHECK(dpf.find("line 1, column") != std::string::npos);
  const std::string th = error_text([] { parse_theory("theory X none logic MON\ntype = {a}\n"); });
  CHECK(th.find("line 2") != std::string::npos);
  CHECK(error_text([] { parse_theory("theory X none logic BOGUS\n"); }).find("BOGUS") !=
        std::string::npos);
}

TEST_CASE("derivations: one node, and a nested tree over two axioms") {
  const Derivation d = parse_derivation("(rule s-refl (concl strong id[Bool] id[Bool]))");
  CHECK(d.rule == "s-refl");
  CHECK(d.node_count() == 1);
  CHECK(std::get<Equation>(d.conclusion) ==
        Equation{Term::id(Type::base("Bool")), Term::id(Type::base("Bool")), Strength::strong});

  const Theory tags = support::theory("tags");
  const auto nds =
      parse_derivations(support::slurp(support::corpus("proofs/tags_two_axioms.dpf")), &tags);
  REQUIRE(nds.size() == 1);
  CHECK(nds[0].tree.rule == "w-trans");
  CHECK(nds[0].tree.node_count() == 3);
}

TEST_CASE("values and states") {
  CHECK(parse_value("exn T b") == support::packet("T", "b"));
  CHECK(parse_value("ok a") == support::atom("a"));
  CHECK(parse_value("(a, inl ())") == Value::tuple(support::atom("a"), Value::inl(Value::unit())));
  const Theory st = support::theory("states");
  const StateVal s = parse_state("{Y=w, X=1}", st);
  CHECK(to_string(s, st) == "{X=1, Y=w}");
  CHECK_THROWS_AS(parse_state("{X=1}", st), Error);
}

TEST_CASE("every corpus file parses") {
  std::size_t theories = 0, proofs = 0;
  for (const auto& entry : fs::recursive_directory_iterator(support::corpus(""))) {
    if (entry.path().extension() != ".dth") continue;
    INFO(entry.path().string());
    std::vector<TryCatchSpec> tries;
    Theory th;
    CHECK_NOTHROW(th = parse_theory(support::slurp(entry.path().string()), &tries));
    for (const auto& c : th.checks) CHECK_NOTHROW(require_well_formed(c.eq, th));
    ++theories;
  }
  std::map<std::string, Theory> by_name;
  for (const auto& n : support::theory_names()) by_name.emplace(n, support::theory(n));
  std::istringstream manifest(support::slurp(support::corpus("proofs/manifest.txt")));
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string status, theory, file;
    ls >> status >> theory >> file;
    INFO(file);
    CHECK_NOTHROW(parse_derivations(support::slurp(support::corpus("proofs/" + file)),
                                    &by_name.at(theory)));
    ++proofs;
  }
  CHECK(theories >= 12);
  CHECK(proofs >= 20);
}

TEST_CASE("pretty then parse gives the term back, on generated terms of every profile") {
  for (const char* name : {"eq", "mon", "comon", "demo", "handlers", "states", "states_plus"}) {
    const Theory th = support::theory(name);
    soundness::TermSource src(th, 42);
    std::size_t done = 0, attempts = 0;
    while (done < 1000 && attempts < 20000) {
      ++attempts;
      const Type a = src.type();
      const Type b = src.type();
      const auto t = src.term(a, b);
      if (!t) continue;
      ++done;
      const std::string text = pretty(*t);
      const Term back = parse_term(text, ParseContext{&th, nullptr});
      if (back != *t) FAIL_CHECK(name << ": " << text);
    }
    CHECK_MESSAGE(done == 1000, name);
  }
}
