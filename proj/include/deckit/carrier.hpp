#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "deckit/theory.hpp"
#include "deckit/types.hpp"
#include "deckit/value.hpp"

namespace deckit {

/// Resource bounds for the finite models. Exceeding one is a CarrierTooLarge
/// error, never a silent truncation.
struct Limits {
  std::size_t max_carrier = 16;
  std::size_t max_states = 256;
  std::size_t max_candidates = 1'000'000;

  /// Defaults, with DECKIT_MAX_CARRIER overriding `max_carrier`.
  static Limits from_environment();
};

/// Canonical enumeration of every carrier of a theory: atoms in declaration
/// order, tuples lexicographic (first component major), sums left then right.
class Carriers {
 public:
  Carriers(const Theory& theory, Limits limits);

  const Theory& theory() const { return *theory_; }
  const Limits& limits() const { return limits_; }

  /// Cardinality without enumerating; throws CarrierTooLarge above the cap.
  std::size_t size(const Type& t) const;
  const std::vector<Value>& elements(const Type& t) const;
  /// Throws TypeMismatch when `v` does not inhabit `t`.
  std::size_t index_of(const Type& t, const Value& v) const;
  bool contains(const Type& t, const Value& v) const;

  /// Parameter type V_T of an effect name, as a concrete carrier type.
  const std::vector<Value>& effect_elements(const std::string& name) const;

 private:
  struct Entry {
    std::vector<Value> values;
    std::unordered_map<std::string, std::size_t> index;
  };
  const Entry& entry(const Type& t) const;
  std::size_t raw_size(const Type& t, int depth) const;

  const Theory* theory_;
  Limits limits_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::unique_ptr<Entry>> cache_;
};

}  // namespace deckit
