#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deckit/term.hpp"
#include "deckit/theory.hpp"
#include "deckit/types.hpp"

namespace deckit {

/// One clause of a catch block. A missing name is a catch-all clause whose
/// body has type 1 -> B; a named clause has a body V_name -> B.
struct Handler {
  std::optional<std::string> name;
  Term body;
};

struct TryCatchSpec {
  Term body;
  std::vector<Handler> handlers;
  /// `catchall(h)` suffix; behaves like a trailing catch-all clause.
  std::optional<Term> catch_all;
};

Term elaborate_throw(const Type& target, const std::string& name, const Theory& theory);

/// Catcher 0 -> B trying each clause in order. Clauses after the first
/// catch-all can never run and are dropped (their bodies are still checked).
Term elaborate_catch_core(const std::vector<Handler>& handlers, const Type& target,
                          const std::optional<Term>& catch_all, const Theory& theory);

Term elaborate_try_catch(const TryCatchSpec& spec, const Theory& theory);

Term elaborate_conditional(const Term& b, const Term& f, const Term& g);

/// `a1` runs before `a2`; both share the source of `a1`.
Term elaborate_seq_pair(const Term& a1, const Term& a2, const Theory& theory);

}  // namespace deckit
