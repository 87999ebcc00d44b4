#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "deckit/calculus.hpp"
#include "deckit/enumerate.hpp"
#include "deckit/error.hpp"
#include "deckit/kernel.hpp"
#include "deckit/model.hpp"
#include "deckit/oracle.hpp"
#include "deckit/parse.hpp"
#include "deckit/pretty.hpp"
#include "deckit/soundness.hpp"

using namespace deckit;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kUserError = 2;
constexpr int kResource = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::syntax_error, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  Theory theory;
  std::vector<TryCatchSpec> tries;
};

Loaded load(const std::string& path) {
  Loaded l;
  l.theory = parse_theory(slurp(path), &l.tries);
  return l;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string state_text(const std::optional<StateVal>& s, const Theory& th) {
  return s ? " " + to_string(*s, th) : "";
}

json counterexample_json(const Counterexample& c, const Theory& th) {
  return {{"input", to_outcome_string(c.input) + state_text(c.input_state, th)},
          {"lhs", to_outcome_string(c.lhs) + state_text(c.lhs_state, th)},
          {"rhs", to_outcome_string(c.rhs) + state_text(c.rhs_state, th)},
          {"strength", to_string(c.strength)},
          {"text", describe(c, th)}};
}

// ---- subcommands -------------------------------------------------------------

int cmd_check(const std::string& file, bool as_json) {
  Loaded l = load(file);
  const Theory& th = l.theory;
  for (const auto& op : th.ops) require_well_formed(Term::constant(op.name), th);
  for (const auto& a : th.axioms) require_well_formed(a.eq, th);
  for (const auto& c : th.checks) require_well_formed(c.eq, th);
  for (const auto& e : th.evals) require_well_formed(e.term, th);
  const Model model(th);  // builds every declared table
  if (as_json) {
    emit({{"command", "check"},
          {"theory", th.name},
          {"logic", to_string(th.logic)},
          {"ok", true},
          {"ops", th.ops.size()},
          {"axioms", th.axioms.size()},
          {"checks", th.checks.size()},
          {"evals", th.evals.size()},
          {"try_catch", l.tries.size()}});
  } else {
    std::cout << th.name << " (" << to_string(th.logic) << "): ok, " << th.ops.size() << " ops, "
              << th.axioms.size() << " axioms, " << th.checks.size() << " checks, "
              << th.evals.size() << " evals\n";
  }
  return kPass;
}

int cmd_verify(const std::string& file, const std::string& only, bool as_json) {
  Loaded l = load(file);
  const Theory& th = l.theory;
  const Model model(th);
  json checks = json::array(), axioms = json::array();
  std::size_t run = 0, unexpected = 0;
  // Proofs may cite the theory's axioms, so they have to hold in the model.
  if (only.empty())
    for (const auto& a : th.axioms) {
      const Verdict v = model.decide(a.eq);
      if (!v.holds) ++unexpected;
      if (as_json) {
        json cex = json::array();
        for (const auto& f : v.failures) cex.push_back(counterexample_json(f, th));
        axioms.push_back({{"name", a.name},
                          {"equation", pretty(a.eq)},
                          {"result", v.holds ? "holds" : "fails"},
                          {"counterexamples", cex}});
        continue;
      }
      std::cout << (v.holds ? "PASS axiom " : "FAIL axiom ") << a.name << ": " << pretty(a.eq)
                << (v.holds ? " holds\n" : " fails in the model\n");
      for (const auto& f : v.failures) std::cout << "  " << describe(f, th) << "\n";
    }
  for (const auto& c : th.checks) {
    if (!only.empty() && c.name != only) continue;
    ++run;
    const Verdict v = model.decide(c.eq);
    const bool as_expected = v.holds == c.expect_holds;
    if (!as_expected) ++unexpected;
    if (as_json) {
      json cex = json::array();
      for (const auto& f : v.failures) cex.push_back(counterexample_json(f, th));
      checks.push_back({{"name", c.name},
                        {"equation", pretty(c.eq)},
                        {"strength", to_string(c.eq.strength)},
                        {"expected", c.expect_holds ? "holds" : "fails"},
                        {"result", v.holds ? "holds" : "fails"},
                        {"as_expected", as_expected},
                        {"failing_inputs", v.failing_inputs},
                        {"counterexamples", cex}});
      continue;
    }
    std::cout << (as_expected ? "PASS " : "FAIL ") << c.name << ": " << pretty(c.eq) << " "
              << (v.holds ? "holds" : "fails") << " (expected "
              << (c.expect_holds ? "holds" : "fails") << ")\n";
    for (const auto& f : v.failures) std::cout << "  " << describe(f, th) << "\n";
    if (v.failing_inputs > v.failures.size())
      std::cout << "  ... " << v.failing_inputs - v.failures.size() << " more failing inputs\n";
  }
  if (!only.empty() && run == 0) throw Error(ErrorKind::undeclared_name, "no check named " + only);
  if (as_json)
    emit({{"command", "verify"},
          {"theory", th.name},
          {"logic", to_string(th.logic)},
          {"axioms", axioms},
          {"checks", checks},
          {"unexpected", unexpected}});
  else
    std::cout << run - unexpected << "/" << run << " checks as expected\n";
  return unexpected == 0 ? kPass : kCheckFailed;
}

int cmd_eval(const std::string& file, const std::string& term_text, const std::string& input_text,
             const std::string& state_text_arg, bool as_json) {
  Loaded l = load(file);
  const Theory& th = l.theory;
  const Term t = parse_term(term_text, ParseContext{&th, nullptr});
  const Typing ty = require_well_formed(t, th);
  const Value input = parse_value(input_text);
  std::optional<StateVal> state;
  if (!state_text_arg.empty()) state = parse_state(state_text_arg, th);
  const Model model(th);
  const std::string out = model.eval_point(t, input, state);
  if (as_json)
    emit({{"command", "eval"},
          {"term", pretty(t)},
          {"source", to_string(ty.source)},
          {"target", to_string(ty.target)},
          {"decoration", level(infer_decoration(t, th))},
          {"input", input_text},
          {"state", state_text_arg},
          {"output", out}});
  else
    std::cout << out << "\n";
  return kPass;
}

int cmd_prove(const std::string& file, const std::string& proof, bool as_json) {
  Loaded l = load(file);
  const Theory& th = l.theory;
  const auto derivations = parse_derivations(slurp(proof), &th);
  json results = json::array();
  std::size_t rejected = 0;
  for (const auto& nd : derivations) {
    const auto v = kernel::check_derivation(nd.tree, th);
    if (!v.accepted) ++rejected;
    const std::string label = nd.name.empty() ? "(unnamed)" : nd.name;
    if (as_json) {
      json r = {{"name", label},
                {"accepted", v.accepted},
                {"nodes", nd.tree.node_count()},
                {"conclusion", to_string(nd.tree.conclusion)}};
      if (!v.accepted) {
        r["path"] = kernel::path_string(v.path);
        r["rule"] = v.rule;
        r["reason"] = v.reason;
      }
      results.push_back(r);
      continue;
    }
    if (v.accepted)
      std::cout << "accepted " << label << ": " << to_string(nd.tree.conclusion) << " ("
                << nd.tree.node_count() << " nodes)\n";
    else
      std::cout << "rejected " << label << " at " << kernel::path_string(v.path) << " (" << v.rule
                << "): " << v.reason << "\n";
  }
  if (as_json)
    emit({{"command", "prove"}, {"theory", th.name}, {"derivations", results}, {"rejected", rejected}});
  return rejected == 0 ? kPass : kCheckFailed;
}

int cmd_soundness(const std::string& file, const std::string& rules, const soundness::Budget& budget,
                  bool witnesses, bool as_json) {
  Loaded l = load(file);
  const Theory& th = l.theory;
  const auto reports = soundness::check_rules(th, budget, rules);
  std::vector<soundness::Witness> found;
  if (witnesses)
    for (const auto& v : soundness::witness_variants())
      found.push_back(soundness::find_side_condition_witness(v, th, budget));

  std::size_t unsound = 0;
  for (const auto& r : reports)
    if (!r.sound()) ++unsound;
  std::size_t missing = 0;
  for (const auto& w : found)
    if (!w.found || !w.verified) ++missing;

  if (as_json) {
    json rs = json::array(), ws = json::array();
    for (const auto& r : reports) rs.push_back(soundness::to_json(r));
    for (const auto& w : found) ws.push_back(soundness::to_json(w));
    emit({{"command", "soundness"},
          {"theory", th.name},
          {"logic", to_string(th.logic)},
          {"samples", budget.samples},
          {"seed", budget.seed},
          {"depth", budget.depth},
          {"reports", rs},
          {"witnesses", ws},
          {"unsound", unsound}});
  } else {
    for (const auto& r : reports) std::cout << soundness::to_text(r) << "\n";
    for (const auto& w : found) std::cout << soundness::to_text(w) << "\n";
    std::cout << reports.size() - unsound << "/" << reports.size() << " rules without failures\n";
  }
  return unsound == 0 && missing == 0 ? kPass : kCheckFailed;
}

int cmd_rules(const std::string& logic_name, bool as_json) {
  const auto logic = parse_logic(logic_name);
  if (!logic) throw Error(ErrorKind::unknown_profile, "unknown logic " + logic_name);
  const auto& catalog = kernel::rule_catalog(*logic);
  if (as_json) {
    json rs = json::array();
    for (const auto& r : catalog) rs.push_back({{"name", r.name}, {"forms", kernel::describe(r)}});
    emit({{"command", "rules"}, {"logic", to_string(*logic)}, {"rules", rs}});
  } else {
    for (const auto& r : catalog)
      for (const auto& line : kernel::describe(r)) std::cout << line << "\n";
  }
  return kPass;
}

int cmd_oracle(const std::string& file, bool as_json) {
  Loaded l = load(file);
  const Theory& th = l.theory;
  json rs = json::array();
  std::size_t bad = 0;
  for (const auto& spec : l.tries) {
    const Term t = elaborate_try_catch(spec, th);
    const auto mismatches = oracle::compare_try_catch(spec, th);
    if (!mismatches.empty()) ++bad;
    if (as_json) {
      json ms = json::array();
      for (const auto& m : mismatches)
        ms.push_back({{"input", to_outcome_string(m.input)},
                      {"elaborated", to_outcome_string(m.elaborated)},
                      {"direct", to_outcome_string(m.direct)}});
      rs.push_back({{"term", pretty(t)}, {"mismatches", ms}});
      continue;
    }
    std::cout << (mismatches.empty() ? "agree " : "DIFFER ") << pretty(t) << "\n";
    for (const auto& m : mismatches)
      std::cout << "  input " << to_outcome_string(m.input) << ": elaborated gives "
                << to_outcome_string(m.elaborated) << ", direct gives "
                << to_outcome_string(m.direct) << "\n";
  }
  if (as_json)
    emit({{"command", "oracle"}, {"theory", th.name}, {"try_catch", rs}, {"differing", bad}});
  else
    std::cout << l.tries.size() - bad << "/" << l.tries.size() << " try/catch terms agree\n";
  return bad == 0 ? kPass : kCheckFailed;
}

int cmd_uniqueness(const enumerate::Budget& budget, bool as_json) {
  const std::vector<enumerate::Report> reports = {
      enumerate::state_copair(budget),   enumerate::state_left_pair(budget),
      enumerate::state_right_pair(budget), enumerate::exc_left_pair(budget),
      enumerate::exc_right_pair(budget), enumerate::exc_copair(budget)};
  bool ok = true;
  json rs = json::array();
  for (const auto& r : reports) {
    ok = ok && r.ok();
    if (as_json)
      rs.push_back({{"construction", r.name},
                    {"configurations", r.configurations},
                    {"instances", r.instances},
                    {"exhaustive_instances", r.exhaustive_instances},
                    {"law_failures", r.law_failures},
                    {"uniqueness_failures", r.uniqueness_failures},
                    {"problems", r.problems}});
    else
      std::cout << enumerate::to_text(r) << "\n";
  }
  if (as_json) emit({{"command", "uniqueness"}, {"seed", budget.seed}, {"reports", rs}, {"ok", ok}});
  return ok ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deckit: decorated equational logics for exceptions and state"};
  app.require_subcommand(1);
  bool as_json = false, timing = false;
  app.add_flag("--json", as_json, "Structured output");
  app.add_flag("--timing", timing, "Print the elapsed time on stderr");

  std::string file, only, term, input, state, proof, rules = "all", logic;
  soundness::Budget sb;
  enumerate::Budget eb;
  bool witnesses = false;

  auto* check = app.add_subcommand("check", "Parse, typecheck and formation-check a theory");
  check->add_option("file", file, "Theory file")->required();
  check->add_flag("--json", as_json);

  auto* verify = app.add_subcommand("verify", "Run the check statements of a theory");
  verify->add_option("file", file, "Theory file")->required();
  verify->add_option("--only", only, "Run one check");
  verify->add_flag("--json", as_json);

  auto* eval = app.add_subcommand("eval", "Evaluate a term on one input");
  eval->add_option("file", file, "Theory file")->required();
  eval->add_option("--term", term, "Term")->required();
  eval->add_option("--input", input, "Input value, e.g. `tt`, `()` or `exn T a`")->required();
  eval->add_option("--state", state, "Initial state, e.g. `{X=0}`");
  eval->add_flag("--json", as_json);

  auto* prove = app.add_subcommand("prove", "Check the derivations of a proof file");
  prove->add_option("file", file, "Theory file")->required();
  prove->add_option("--proof", proof, "Proof file")->required();
  prove->add_flag("--json", as_json);

  auto* sound = app.add_subcommand("soundness", "Sample rule instances against the finite model");
  sound->add_option("file", file, "Theory file")->required();
  sound->add_option("--rules", rules, "`all` or one rule name");
  sound->add_option("--samples", sb.samples, "Instances per rule")->check(CLI::PositiveNumber);
  sound->add_option("--seed", sb.seed, "Random seed");
  sound->add_option("--depth", sb.depth, "Maximal term depth")->check(CLI::Range(1, 8));
  sound->add_flag("--witnesses", witnesses, "Also search side-condition witnesses");
  sound->add_flag("--json", as_json);

  auto* list = app.add_subcommand("rules", "Print the rule catalog of a logic");
  list->add_option("--logic", logic, "EQ, MON, COMON, EXC, EXC_PLUS, ST or ST_PLUS")->required();
  list->add_flag("--json", as_json);

  auto* orc = app.add_subcommand("oracle", "Compare elaborated try/catch with the direct interpreter");
  orc->add_option("file", file, "Theory file")->required();
  orc->add_flag("--json", as_json);

  auto* uniq = app.add_subcommand("uniqueness", "Enumerate pair and copair uniqueness on small carriers");
  uniq->add_option("--seed", eb.seed, "Random seed for drawn components");
  uniq->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUserError;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kPass;
  try {
    if (*check) code = cmd_check(file, as_json);
    else if (*verify) code = cmd_verify(file, only, as_json);
    else if (*eval) code = cmd_eval(file, term, input, state, as_json);
    else if (*prove) code = cmd_prove(file, proof, as_json);
    else if (*sound) code = cmd_soundness(file, rules, sb, witnesses, as_json);
    else if (*list) code = cmd_rules(logic, as_json);
    else if (*orc) code = cmd_oracle(file, as_json);
    else if (*uniq) code = cmd_uniqueness(eb, as_json);
  } catch (const Error& e) {
    code = e.kind() == ErrorKind::carrier_too_large ? kResource : kUserError;
    if (as_json)
      emit({{"command", "error"}, {"kind", to_string(e.kind())}, {"message", e.what()}, {"exit", code}});
    else
      std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
  }
  if (timing)
    std::cerr << "elapsed "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
              << " s\n";
  return code;
}
