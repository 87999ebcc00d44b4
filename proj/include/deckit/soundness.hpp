#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "deckit/term.hpp"
#include "deckit/theory.hpp"

namespace deckit::soundness {

struct Budget {
  std::size_t samples = 500;
  std::uint64_t seed = 42;
  /// Maximal AST depth of generated terms.
  int depth = 5;
};

/// Seeded random well-formed terms over a theory's signature, the same
/// generator the harness instantiates rules with.
class TermSource {
 public:
  TermSource(const Theory& theory, std::uint64_t seed, int depth = 5);
  ~TermSource();
  /// Mostly declared base types, 1 and V_T; sometimes 0 or a small product or sum.
  Type type();
  /// Typechecks at A -> B, is formation-valid in the theory's logic and has
  /// inferred decoration at most `bound`; empty when no attempt succeeded.
  std::optional<Term> term(const Type& a, const Type& b, Decoration bound = Decoration::modifier);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct Failure {
  std::string form;           // the rule form, as listed by `rules`
  std::string instantiation;  // `?f := ..., ?A := ...`
  std::string conclusion;
  std::string counterexample;
};

struct Report {
  std::string rule;
  std::string logic;
  std::string theory;
  std::size_t tried = 0;          // well-formed instances drawn
  std::size_t premises_true = 0;  // of those, instances whose premises hold
  std::vector<Failure> failures;
  /// No instance with true premises was found within the budget.
  bool budget_exhausted = false;
  bool sound() const { return failures.empty(); }
};

/// Samples instances of every form of `rule` in the theory's logic, keeps the
/// ones whose premises hold in the finite model and checks the conclusion.
/// Throws UnknownRule when the logic has no such rule.
Report check_rule_sound(const std::string& rule, const Theory& theory, const Budget& budget = {});

/// Every rule of the theory's catalog (or just `only`), in catalog order.
/// Rules run in parallel; the result does not depend on scheduling.
std::vector<Report> check_rules(const Theory& theory, const Budget& budget,
                                const std::string& only = "all");

/// Concrete instance of a weakened rule whose premises hold and whose
/// conclusion fails.
struct Witness {
  std::string variant;
  bool found = false;
  /// The failure was reproduced on a fresh model by pointwise evaluation.
  bool verified = false;
  std::string instantiation;
  std::vector<std::string> premises;
  std::string conclusion;
  std::string counterexample;
  std::size_t attempts = 0;
};

/// `w-subs-unrestricted`, `weak-strong-at-2` or `copair-of-catchers`.
const std::vector<std::string>& witness_variants();

/// Needs an exception theory with at least one exception name. Throws
/// UnknownRule for other variant names; reports found = false when the
/// budget runs out.
Witness find_side_condition_witness(const std::string& variant, const Theory& theory,
                                    const Budget& budget = {});

std::string to_text(const Report& r);
std::string to_text(const Witness& w);
nlohmann::json to_json(const Report& r);
nlohmann::json to_json(const Witness& w);

}  // namespace deckit::soundness
