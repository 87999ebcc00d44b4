#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "deckit/derivation.hpp"
#include "deckit/elaborate.hpp"
#include "deckit/term.hpp"
#include "deckit/theory.hpp"
#include "deckit/types.hpp"
#include "deckit/value.hpp"

namespace deckit {

/// Sugar forms (throw, try/catch, if, seqpair) need a theory to type their
/// parts. Without one they are syntax errors. When `try_specs` is set,
/// every try/catch met while parsing is appended to it before elaboration.
struct ParseContext {
  const Theory* theory = nullptr;
  std::vector<TryCatchSpec>* try_specs = nullptr;
};

// All parsers throw deckit::Error; syntax errors carry `line L, column C`.

Type parse_type(std::string_view text);
Term parse_term(std::string_view text, const ParseContext& ctx = {});
Equation parse_equation(std::string_view text, const ParseContext& ctx = {});

/// Accepts `ok v` (same as `v`) and `exn T v` for level-2 inputs.
Value parse_value(std::string_view text);

/// `{X=0, Y=u}` with every declared location exactly once.
StateVal parse_state(std::string_view text, const Theory& theory);

std::string to_string(const StateVal& state, const Theory& theory);

Theory parse_theory(std::string_view text, std::vector<TryCatchSpec>* try_specs = nullptr);

/// Every top-level node of a proof file, in order.
std::vector<NamedDerivation> parse_derivations(std::string_view text,
                                               const Theory* theory = nullptr);

/// Exactly one top-level node.
Derivation parse_derivation(std::string_view text, const Theory* theory = nullptr);

/// Words that cannot name an operation.
bool is_reserved_word(std::string_view word);

}  // namespace deckit
