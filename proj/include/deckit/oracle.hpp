#pragma once

#include <vector>

#include "deckit/elaborate.hpp"
#include "deckit/term.hpp"
#include "deckit/theory.hpp"
#include "deckit/value.hpp"

namespace deckit::oracle {

/// Direct-style interpreter for exception-side terms, one value at a time.
/// Packets travel as `Value::packet`. Shares no code with the tabled model;
/// declared operations are read straight from their rows.
Value run(const Term& term, const Value& input, const Theory& theory);

/// try/catch by control flow: an incoming packet is returned untouched; the
/// body runs; an ordinary result is returned; a raised `exn T v` is matched
/// against the clauses in order (catch-all first-class, payload dropped) and
/// propagates when nothing matches.
Value run_try_catch(const TryCatchSpec& spec, const Value& input, const Theory& theory);

struct Mismatch {
  Value input;
  Value elaborated;
  Value direct;
};

/// Every input of A+E on which the elaborated term and the direct
/// interpreter disagree.
std::vector<Mismatch> compare_try_catch(const TryCatchSpec& spec, const Theory& theory);

}  // namespace deckit::oracle
