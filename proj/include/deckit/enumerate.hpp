#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "deckit/exc_model.hpp"
#include "deckit/state_model.hpp"

namespace deckit::enumerate {

/// Result of counting the candidate tables that satisfy a pair of laws.
struct Count {
  /// Exact number of satisfying candidates; saturates at UINT64_MAX.
  std::uint64_t satisfying = 0;
  /// True when every candidate table was built and checked; otherwise the
  /// count is the product of per-cell counts around a satisfying reference.
  bool exhaustive = false;
};

/// Tables agreeing with `base` outside `free_cells`, each free cell ranging
/// over [0, n_outputs). `laws` decides a candidate. Above `limit` candidates
/// the count is factored cell by cell, which is exact when the laws only
/// relate each input cell to itself (true for laws built by pre-composing
/// with coprojections or post-composing with projections). `reference` must
/// satisfy the laws for the factored count; without one it reports zero.
template <class Den>
Count count_candidates(const Den& base, const std::vector<std::uint32_t>& free_cells,
                       std::uint32_t n_outputs, const std::function<bool(const Den&)>& laws,
                       std::uint64_t limit, const Den* reference);

struct Budget {
  std::uint64_t seed = 42;
  /// Component pairs per size configuration; smaller pair spaces are
  /// enumerated completely.
  std::size_t max_pairs = 48;
  /// Candidate spaces up to this size are enumerated table by table.
  std::uint64_t exhaustive_limit = 20'000;
};

struct Report {
  std::string name;
  std::size_t configurations = 0;
  std::size_t instances = 0;
  std::size_t exhaustive_instances = 0;
  std::size_t law_failures = 0;
  std::size_t uniqueness_failures = 0;
  std::vector<std::string> problems;  // first few
  bool ok() const { return instances > 0 && law_failures == 0 && uniqueness_failures == 0; }
};

// State side: A1, A2, B, B1, B2 range over sizes 1..3 and |S| over 1..4.
Report state_copair(const Budget& b = {});
Report state_left_pair(const Budget& b = {});
Report state_right_pair(const Budget& b = {});

// Exception side: carriers of size 1..2, one exception name of size 1..2.
Report exc_left_pair(const Budget& b = {});
Report exc_right_pair(const Budget& b = {});
Report exc_copair(const Budget& b = {});

/// Level-2 tables h : (A1 + A2) + E -> B + E with h . in1 == f1 and
/// h . in2 == f2, for arbitrary level-2 f1, f2 sharing target B.
struct CopairSearch {
  std::uint64_t candidates = 0;
  std::uint64_t solutions = 0;
  /// Input of A1 + A2 (+ packets) on which the two laws demand different
  /// outputs, with those outputs, when such an input exists.
  bool conflict = false;
  std::uint32_t conflict_input = 0;
  std::uint32_t first_demand = 0;
  std::uint32_t second_demand = 0;
};

/// Enumerates every candidate; throws CarrierTooLarge above `limit`.
CopairSearch exc_copair_solutions(const exc::Denotation& f1, const exc::Denotation& f2,
                                  const exc::Environment& env, std::uint64_t limit);

std::string to_text(const Report& r);

}  // namespace deckit::enumerate
