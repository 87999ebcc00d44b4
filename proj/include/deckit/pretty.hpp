#pragma once

#include <string>

#include "deckit/term.hpp"

namespace deckit {

/// Surface syntax of a core term; parse_term(pretty(t)) == t.
std::string pretty(const Term& term);

/// `lhs ~ rhs`, `lhs == rhs` or `lhs << rhs`.
std::string pretty(const Equation& eq);

const char* relation_symbol(Strength s);

}  // namespace deckit
