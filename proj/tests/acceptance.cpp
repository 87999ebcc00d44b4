// One PASS/FAIL line per acceptance criterion. Exit status 1 when any fails.
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>

#include "deckit/calculus.hpp"
#include "deckit/enumerate.hpp"
#include "deckit/kernel.hpp"
#include "deckit/model.hpp"
#include "deckit/oracle.hpp"
#include "deckit/parse.hpp"
#include "deckit/pretty.hpp"
#include "deckit/soundness.hpp"
#include "support.hpp"

using namespace deckit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string count(std::size_t n, const char* what) { return std::to_string(n) + " " + what; }

std::map<std::string, Theory> corpus_theories() {
  std::map<std::string, Theory> out;
  for (const auto& n : support::theory_names()) out.emplace(n, support::theory(n));
  return out;
}

Equation eq(Term l, Term r, Strength s) { return Equation{std::move(l), std::move(r), s}; }

// 1. untag.tag axioms on every exception theory
Outcome exception_axioms() {
  std::size_t theories = 0, equations = 0;
  std::string bad;
  for (const auto& [name, th] : corpus_theories()) {
    if (th.kind != TheoryKind::exceptions || th.effects.empty()) continue;
    ++theories;
    const Model m(th);
    for (const auto& t : th.effects) {
      const Type vt = Type::effect(t.name);
      const Term ut = Term::comp(Term::untag(t.name), Term::tag(t.name));
      ++equations;
      if (!m.decide(eq(ut, Term::id(vt), Strength::weak)).holds) bad += name + ": weak " + t.name + "; ";
      ++equations;
      const Verdict strong = m.decide(eq(ut, Term::id(vt), Strength::strong));
      if (strong.holds || !strong.counterexample->input.is(ValueKind::packet))
        bad += name + ": strong " + t.name + " has no packet counterexample; ";
      for (const auto& r : th.effects) {
        if (r.name == t.name) continue;
        ++equations;
        const Term lhs = Term::comp(Term::untag(t.name), Term::tag(r.name));
        const Term rhs = Term::comp(Term::initial(vt), Term::tag(r.name));
        if (!m.decide(eq(lhs, rhs, Strength::weak)).holds)
          bad += name + ": other " + t.name + "/" + r.name + "; ";
      }
    }
  }
  if (theories == 0) return {false, "no exception theory in the corpus"};
  return {bad.empty(), bad.empty() ? count(equations, "equations decided over ") +
                                         count(theories, "theories")
                                   : bad};
}

// 2. lookup/update axioms on every state theory
Outcome state_axioms() {
  std::size_t theories = 0, equations = 0;
  std::string bad, shown;
  for (const auto& [name, th] : corpus_theories()) {
    if (th.kind != TheoryKind::states || th.effects.empty()) continue;
    ++theories;
    const Model m(th);
    for (const auto& t : th.effects) {
      const Type vt = Type::effect(t.name);
      const Term lu = Term::comp(Term::lookup(t.name), Term::update(t.name));
      ++equations;
      if (!m.decide(eq(lu, Term::id(vt), Strength::weak)).holds) bad += name + ": weak " + t.name + "; ";
      ++equations;
      const Verdict strong = m.decide(eq(lu, Term::id(vt), Strength::strong));
      const bool big = m.states().carriers().effect_elements(t.name).size() >= 2;
      if (big) {
        if (strong.holds || !strong.counterexample->input_state)
          bad += name + ": strong " + t.name + " has no state counterexample; ";
        else if (shown.empty())
          shown = name + " " + t.name + ": " + describe(*strong.counterexample, th);
      } else if (!strong.holds) {
        bad += name + ": strong " + t.name + " fails with one value; ";
      }
      for (const auto& r : th.effects) {
        if (r.name == t.name) continue;
        ++equations;
        const Term lhs = Term::comp(Term::lookup(r.name), Term::update(t.name));
        const Term rhs = Term::comp(Term::lookup(r.name), Term::final(vt));
        if (!m.decide(eq(lhs, rhs, Strength::weak)).holds)
          bad += name + ": other " + r.name + "/" + t.name + "; ";
      }
    }
  }
  if (theories == 0) return {false, "no state theory in the corpus"};
  if (shown.empty()) bad += "no location with two values; ";
  return {bad.empty(), bad.empty() ? count(equations, "equations over ") +
                                         count(theories, "theories") + "; " + shown
                                   : bad};
}

// 3. elaborated try/catch against the direct interpreter
Outcome oracle_equivalence() {
  std::size_t theories = 0, terms = 0, mismatches = 0;
  std::string first;
  for (const auto& name : support::theory_names()) {
    std::vector<TryCatchSpec> tries;
    const Theory th = support::theory(name, &tries);
    if (tries.empty()) continue;
    ++theories;
    for (const auto& spec : tries) {
      ++terms;
      const auto ms = oracle::compare_try_catch(spec, th);
      mismatches += ms.size();
      if (!ms.empty() && first.empty())
        first = name + ": input " + to_outcome_string(ms[0].input) + " elaborated " +
                to_outcome_string(ms[0].elaborated) + ", direct " + to_outcome_string(ms[0].direct);
    }
  }
  const bool pass = theories >= 5 && mismatches == 0;
  std::string detail = count(terms, "try/catch terms in ") + count(theories, "theories") + ", " +
                       count(mismatches, "mismatches");
  if (!first.empty()) detail += "; " + first;
  return {pass, detail};
}

std::string summary(const enumerate::Report& r) {
  return r.name + " " + std::to_string(r.instances) + " (" +
         std::to_string(r.exhaustive_instances) + " enumerated)";
}

// 4. state copair and pairs
Outcome state_uniqueness() {
  bool pass = true;
  std::string detail;
  for (const auto& r : {enumerate::state_copair(), enumerate::state_left_pair(),
                        enumerate::state_right_pair()}) {
    pass &= r.ok();
    if (!detail.empty()) detail += ", ";
    detail += summary(r);
    if (!r.ok()) detail += " [" + enumerate::to_text(r) + "]";
  }
  return {pass, detail};
}

// 5. exception pairs and copairs of propagators, every table enumerated
Outcome exception_uniqueness() {
  bool pass = true;
  std::string detail;
  for (const auto& r : {enumerate::exc_left_pair(), enumerate::exc_right_pair(),
                        enumerate::exc_copair()}) {
    pass &= r.ok() && r.instances == r.exhaustive_instances;
    if (!detail.empty()) detail += ", ";
    detail += summary(r);
    if (!r.ok()) detail += " [" + enumerate::to_text(r) + "]";
  }
  return {pass, detail};
}

// 6. every rule of every catalog at 500 samples, seed 42
Outcome rule_soundness() {
  const std::map<Logic, std::vector<std::string>> plan = {
      {Logic::eq, {"eq"}},
      {Logic::mon, {"mon"}},
      {Logic::comon, {"comon"}},
      {Logic::exc, {"demo", "tags", "copairs"}},
      {Logic::exc_plus, {"handlers", "pairs", "nested", "catchall", "recovery"}},
      {Logic::st, {"states"}},
      {Logic::st_plus, {"states_plus"}}};
  soundness::Budget budget;
  budget.samples = 500;
  budget.seed = 42;
  std::size_t rules = 0, failures = 0, reports = 0;
  std::string bad;
  for (const auto& [logic, names] : plan) {
    std::set<std::string> exercised;
    for (const auto& name : names) {
      const Theory th = support::theory(name);
      if (th.logic != logic) return {false, name + " is not a " + std::string(to_string(logic)) + " theory"};
      for (const auto& r : soundness::check_rules(th, budget)) {
        ++reports;
        failures += r.failures.size();
        if (!r.sound() && bad.size() < 400)
          bad += r.rule + " on " + name + ": " + r.failures[0].conclusion + "; ";
        if (r.premises_true > 0) exercised.insert(r.rule);
      }
    }
    for (const auto& rule : kernel::rule_catalog(logic)) {
      ++rules;
      if (!exercised.count(rule.name))
        bad += rule.name + " in " + std::string(to_string(logic)) + " never had true premises; ";
    }
  }
  return {bad.empty() && failures == 0,
          count(rules, "catalog rules, ") + count(reports, "reports, ") +
              count(failures, "failures") + (bad.empty() ? "" : "; " + bad)};
}

// 7. weakened rules have counterexamples, reproduced by re-evaluation
Outcome side_condition_witnesses() {
  bool pass = true;
  std::string detail;
  const Theory th = support::theory("demo");
  for (const auto& variant : soundness::witness_variants()) {
    const auto w = soundness::find_side_condition_witness(variant, th);
    pass &= w.found && w.verified;
    if (!detail.empty()) detail += "; ";
    detail += variant + (w.found ? (w.verified ? " verified" : " NOT verified") : " not found");
    if (w.found) detail += " (" + w.counterexample + ")";
  }
  return {pass, detail};
}

// 8. bundled proofs and their mutations
Outcome kernel_library() {
  std::map<std::string, Theory> theories = corpus_theories();
  std::istringstream in(support::slurp(support::corpus("proofs/manifest.txt")));
  std::string line, bad;
  std::size_t accepted = 0, rejected = 0;
  bool value_proof = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string status, theory, file, path, rule;
    ls >> status >> theory >> file >> path >> rule;
    const Theory& th = theories.at(theory);
    const auto d = parse_derivation(support::slurp(support::corpus("proofs/" + file)), &th);
    const auto v = kernel::check_derivation(d, th);
    if (status == "valid") {
      if (!v.accepted) {
        bad += file + " rejected: " + v.reason + "; ";
        continue;
      }
      ++accepted;
      if (const auto* c = std::get_if<Equation>(&d.conclusion))
        value_proof |= pretty(*c) == "untag[T] . tag[T] . va ~ va" && d.node_count() > 1;
    } else if (v.accepted) {
      bad += file + " accepted; ";
    } else if (kernel::path_string(v.path) != path || v.rule != rule) {
      bad += file + " rejected at " + kernel::path_string(v.path) + " (" + v.rule + "), expected " +
             path + " (" + rule + "); ";
    } else {
      ++rejected;
    }
  }
  if (!value_proof) bad += "no accepted proof of untag.tag.v ~ v; ";
  const bool pass = bad.empty() && accepted >= 10 && rejected >= 10;
  return {pass, count(accepted, "accepted, ") + count(rejected, "rejected at the expected node") +
                    (bad.empty() ? "" : "; " + bad)};
}

// 9. handler lists, unlisted names, dead clauses after a catch-all
Outcome handler_behaviour() {
  const Theory th = support::theory("handlers");
  const Model m(th);
  const ParseContext ctx{&th, nullptr};
  std::string bad;
  // body raises R ff on z; g2 maps ff to b
  const Term multi = parse_term("try(body) catch(T => g1, R => g2)", ctx);
  const std::string handled = m.eval_point(multi, Value::atom("z"), std::nullopt);
  if (handled != "ok b") bad += "R not handled by g2 (" + handled + "); ";
  // body_u raises U u on y, which no clause names
  const Term unlisted = parse_term("try(body_u) catch(T => g1, R => g2)", ctx);
  const std::string passed = m.eval_point(unlisted, Value::atom("y"), std::nullopt);
  if (passed != "exn U u") bad += "U did not propagate (" + passed + "); ";
  std::size_t dead = 0;
  for (const char* body : {"body", "body_u"}) {
    const std::string b = body;
    const Equation e = parse_equation(
        "try(" + b + ") catch(all => g0, T => h) == try(" + b + ") catch(all => g0)", ctx);
    ++dead;
    if (!m.decide(e).holds) bad += "dead clause changes " + b + "; ";
  }
  return {bad.empty(), bad.empty() ? "z -> " + handled + ", y -> " + passed + ", " +
                                         count(dead, "dead-clause equations hold")
                                   : bad};
}

// 10. parse/pretty round trip per profile, and the whole corpus parses
Outcome frontend() {
  const std::map<Logic, std::string> per_profile = {
      {Logic::eq, "eq"},         {Logic::mon, "mon"},        {Logic::comon, "comon"},
      {Logic::exc, "demo"},      {Logic::exc_plus, "handlers"}, {Logic::st, "states"},
      {Logic::st_plus, "states_plus"}};
  std::string bad;
  std::size_t terms = 0, files = 0;
  for (const auto& [logic, name] : per_profile) {
    const Theory th = support::theory(name);
    soundness::TermSource src(th, 42);
    std::size_t done = 0, attempts = 0;
    while (done < 1000 && attempts < 50000) {
      ++attempts;
      const Type a = src.type();
      const Type b = src.type();
      const auto t = src.term(a, b);
      if (!t) continue;
      ++done;
      const std::string text = pretty(*t);
      try {
        if (parse_term(text, ParseContext{&th, nullptr}) != *t) bad += "changed: " + text + "; ";
      } catch (const std::exception& e) {
        bad += text + ": " + e.what() + "; ";
      }
    }
    terms += done;
    if (done < 1000) bad += name + " produced only " + std::to_string(done) + " terms; ";
  }
  const auto theories = corpus_theories();
  std::map<std::string, std::string> proof_theory;  // proof file -> theory
  std::istringstream manifest(support::slurp(support::corpus("proofs/manifest.txt")));
  for (std::string line; std::getline(manifest, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string status, theory, file;
    ls >> status >> theory >> file;
    proof_theory[file] = theory;
  }
  for (const auto& entry : fs::recursive_directory_iterator(support::corpus(""))) {
    const auto ext = entry.path().extension();
    if (ext != ".dth" && ext != ".dpf") continue;
    ++files;
    try {
      const std::string text = support::slurp(entry.path().string());
      if (ext == ".dth") {
        const Theory th = parse_theory(text);
        for (const auto& c : th.checks) require_well_formed(c.eq, th);
      } else {
        const std::string rel = fs::relative(entry.path(), support::corpus("proofs")).string();
        const auto it = proof_theory.find(rel);
        if (it == proof_theory.end())
          bad += rel + " is not in the manifest; ";
        else
          parse_derivations(text, &theories.at(it->second));
      }
    } catch (const std::exception& e) {
      bad += entry.path().filename().string() + ": " + e.what() + "; ";
    }
  }
  return {bad.empty(), count(terms, "terms round-tripped over 7 profiles, ") +
                          count(files, "corpus files parsed") + (bad.empty() ? "" : "; " + bad)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exception axioms", exception_axioms},
      {"state axioms", state_axioms},
      {"try/catch oracle", oracle_equivalence},
      {"state copair and pairs unique", state_uniqueness},
      {"exception pairs and copairs unique", exception_uniqueness},
      {"rule soundness", rule_soundness},
      {"side-condition witnesses", side_condition_witnesses},
      {"proof kernel library", kernel_library},
      {"handler lists", handler_behaviour},
      {"frontend round trip and corpus", frontend},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": "
              << o.detail << " [" << static_cast<int>(secs * 1000) << " ms]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
