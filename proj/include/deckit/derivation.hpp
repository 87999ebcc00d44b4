#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "deckit/term.hpp"
#include "deckit/types.hpp"

namespace deckit {

/// `term : source -> target` holds at decoration `deco`.
struct TermJudgment {
  Term term;
  Type source;
  Type target;
  Decoration deco = Decoration::pure;

  friend bool operator==(const TermJudgment& a, const TermJudgment& b) {
    return a.term == b.term && a.source == b.source && a.target == b.target && a.deco == b.deco;
  }
};

using Judgment = std::variant<Equation, TermJudgment>;

std::string to_string(const Judgment& j);

/// Explicit values for rule metavariables, keyed by their `?name`.
struct Instantiation {
  std::map<std::string, Term> terms;
  std::map<std::string, Type> types;
  std::map<std::string, std::string> names;

  bool empty() const { return terms.empty() && types.empty() && names.empty(); }
};

struct Derivation {
  std::string rule;
  Judgment conclusion;
  std::vector<Derivation> premises;
  Instantiation inst;
  int line = 0;

  std::size_t node_count() const;
};

/// A derivation as it appears in a proof file, with its optional label.
struct NamedDerivation {
  std::string name;
  Derivation tree;
};

}  // namespace deckit
