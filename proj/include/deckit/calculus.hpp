#pragma once

#include <string>
#include <vector>

#include "deckit/profile.hpp"
#include "deckit/term.hpp"
#include "deckit/theory.hpp"
#include "deckit/types.hpp"

namespace deckit {

/// Child indices from the root of a term (0 = first/outer, 1 = second/inner).
using TermPath = std::vector<int>;

std::string to_string(const TermPath& path);

struct Typing {
  Type source;
  Type target;

  friend bool operator==(const Typing& a, const Typing& b) {
    return a.source == b.source && a.target == b.target;
  }
};

/// Throws UndeclaredName for unknown base types or effect names.
void check_type(const Type& t, const Theory& theory);

/// Unique source and target of a term. Throws UndeclaredName or
/// TypeMismatch; the latter names both types and the subterm path.
Typing typecheck(const Term& term, const Theory& theory);

/// Both sides must share source and target.
Typing typecheck(const Equation& eq, const Theory& theory);

/// Minimal decoration of a well-typed term.
Decoration infer_decoration(const Term& term, const Theory& theory);

struct Violation {
  TermPath path;
  std::string rule;
  std::string message;
  Decoration first = Decoration::pure;
  Decoration second = Decoration::pure;
};

/// One violation per node that breaks the profile's formation table.
std::vector<Violation> check_formation(const Term& term, const LogicProfile& profile,
                                       const Theory& theory);

/// Typecheck plus formation check; throws a formation Error on the first
/// violation. Convenience for callers that only accept valid terms.
Typing require_well_formed(const Term& term, const Theory& theory);
Typing require_well_formed(const Equation& eq, const Theory& theory);

}  // namespace deckit
