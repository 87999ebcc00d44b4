#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deckit/term.hpp"
#include "deckit/theory.hpp"
#include "deckit/value.hpp"

namespace deckit {

/// First input (in enumeration order) on which the two sides differ. On the
/// exception side values may be packets and states are absent.
struct Counterexample {
  Strength strength = Strength::strong;
  Value input = Value::unit();
  std::optional<StateVal> input_state;
  Value lhs = Value::unit();
  std::optional<StateVal> lhs_state;
  Value rhs = Value::unit();
  std::optional<StateVal> rhs_state;
};

struct Verdict {
  bool holds = true;
  /// First failing input.
  std::optional<Counterexample> counterexample;
  /// Failing inputs in enumeration order, at most kMaxReported of them.
  std::vector<Counterexample> failures;
  std::size_t failing_inputs = 0;

  static constexpr std::size_t kMaxReported = 8;
  void add(Counterexample c) {
    if (!counterexample) counterexample = c;
    holds = false;
    ++failing_inputs;
    if (failures.size() < kMaxReported) failures.push_back(std::move(c));
  }
};

/// `input X: lhs gives A, rhs gives B (tested strong)`.
std::string describe(const Counterexample& c, const Theory& theory);

}  // namespace deckit
