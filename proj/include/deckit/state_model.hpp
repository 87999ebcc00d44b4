#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "deckit/carrier.hpp"
#include "deckit/term.hpp"
#include "deckit/theory.hpp"
#include "deckit/verdict.hpp"

namespace deckit::state {

/// Level-2 table A x S -> B x S. Input (a, s) sits at index a * |S| + s and
/// outputs are coded the same way over B.
struct Denotation {
  Type source = Type::unit();
  Type target = Type::unit();
  std::uint32_t n_source = 0;
  std::uint32_t n_target = 0;
  std::uint32_t n_states = 1;
  std::vector<std::uint32_t> table;
  Decoration min_deco = Decoration::pure;

  std::uint32_t value_of(std::uint32_t code) const { return code / n_states; }
  std::uint32_t state_of(std::uint32_t code) const { return code % n_states; }

  friend bool operator==(const Denotation& a, const Denotation& b) {
    return a.source == b.source && a.target == b.target && a.table == b.table;
  }
};

/// Recomputes `min_deco` from the table contents.
void settle(Denotation& d);

/// State set, carriers and declared operations of a state theory. S is the
/// full product of the location carriers, first location major.
class Environment {
 public:
  explicit Environment(const Theory& theory, Limits limits = Limits::from_environment());

  const Theory& theory() const { return carriers_.theory(); }
  const Carriers& carriers() const { return carriers_; }
  const std::vector<StateVal>& states() const { return states_; }
  std::uint32_t n_states() const { return static_cast<std::uint32_t>(states_.size()); }
  std::uint32_t state_index(const StateVal& s) const;

  std::uint32_t size(const Type& t) const;
  std::uint32_t index(const Type& t, const Value& v) const;
  Value element(const Type& t, std::uint32_t i) const;
  const Denotation& constant(const std::string& name) const;

  /// Pure map on values, state untouched.
  Denotation from_pure(const Type& a, const Type& b, const std::vector<std::uint32_t>& f0) const;
  /// Accessor table indexed by a * |S| + s giving a value of B.
  Denotation from_level1(const Type& a, const Type& b,
                         const std::vector<std::uint32_t>& f1) const;
  Denotation identity(const Type& a) const;

 private:
  Carriers carriers_;
  std::vector<StateVal> states_;
  std::map<std::string, std::uint32_t> state_index_;
  std::map<std::string, Denotation> consts_;
};

Denotation lift(Decoration from, Decoration to, const Denotation& den);
Denotation compose(const Denotation& outer, const Denotation& inner);

/// Level-2 denotation of a well-typed term formation-valid in ST_PLUS.
Denotation eval(const Term& term, const Environment& env);
/// Same, with constants looked up in `extra` before the declared tables.
using Overrides = std::map<std::string, Denotation>;
Denotation eval(const Term& term, const Environment& env, const Overrides& extra);

Verdict decide(const Equation& eq, const Environment& env);
Verdict decide(const Denotation& lhs, const Denotation& rhs, Strength s, const Environment& env);

/// Left pair: accessor f1 reads the initial state, modifier f2 runs.
Denotation interp_left_pair(const Denotation& f1, const Denotation& f2, const Environment& env);
/// Right pair: modifier f1 runs, accessor f2 reads the initial state.
Denotation interp_right_pair(const Denotation& f1, const Denotation& f2, const Environment& env);

}  // namespace deckit::state
