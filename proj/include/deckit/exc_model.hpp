#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "deckit/carrier.hpp"
#include "deckit/term.hpp"
#include "deckit/theory.hpp"
#include "deckit/verdict.hpp"

namespace deckit::exc {

/// Level-2 table A+E -> B+E. Input index i < |A| is the i-th element of A,
/// i >= |A| the (i-|A|)-th packet of E; outputs are coded the same way over B.
struct Denotation {
  Type source = Type::unit();
  Type target = Type::unit();
  std::uint32_t n_source = 0;
  std::uint32_t n_target = 0;
  std::uint32_t n_exc = 0;
  std::vector<std::uint32_t> table;
  Decoration min_deco = Decoration::pure;

  bool is_packet_out(std::uint32_t code) const { return code >= n_target; }

  friend bool operator==(const Denotation& a, const Denotation& b) {
    return a.source == b.source && a.target == b.target && a.table == b.table;
  }
};

/// Recomputes `min_deco` from the table contents.
void settle(Denotation& d);

/// Exception set, carriers and declared operations of an exception theory.
class Environment {
 public:
  explicit Environment(const Theory& theory, Limits limits = Limits::from_environment());

  const Theory& theory() const { return carriers_.theory(); }
  const Carriers& carriers() const { return carriers_; }
  const std::vector<Value>& packets() const { return packets_; }
  std::uint32_t n_exc() const { return static_cast<std::uint32_t>(packets_.size()); }
  /// Index in E of the first packet of exception `name`.
  std::uint32_t packet_offset(const std::string& name) const;

  std::uint32_t size(const Type& t) const;
  std::uint32_t encode(const Type& t, const Value& v) const;
  Value decode(const Type& t, std::uint32_t code) const;
  const Denotation& constant(const std::string& name) const;

  /// Pure map given on ordinary elements, lifted to level 2.
  Denotation from_pure(const Type& a, const Type& b, const std::vector<std::uint32_t>& f0) const;
  /// Level-1 table (ordinary inputs to B+E codes), lifted to level 2.
  Denotation from_level1(const Type& a, const Type& b,
                         const std::vector<std::uint32_t>& f1) const;
  Denotation identity(const Type& a) const;

 private:
  Carriers carriers_;
  std::vector<Value> packets_;
  std::map<std::string, std::uint32_t> offsets_;
  std::map<std::string, Denotation> consts_;
};

/// Extends a level-`from` denotation to level `to`. The content below level
/// `from` is kept, everything else is rebuilt (packets propagate below 2).
Denotation lift(Decoration from, Decoration to, const Denotation& den);

Denotation compose(const Denotation& outer, const Denotation& inner);

/// Level-2 denotation of a well-typed term formation-valid in EXC_PLUS.
Denotation eval(const Term& term, const Environment& env);
/// Same, with constants looked up in `extra` before the declared tables.
using Overrides = std::map<std::string, Denotation>;
Denotation eval(const Term& term, const Environment& env, const Overrides& extra);

Verdict decide(const Equation& eq, const Environment& env);
/// Same check on already evaluated sides.
Verdict decide(const Denotation& lhs, const Denotation& rhs, Strength s, const Environment& env);

struct Decomposition {
  std::vector<std::uint32_t> defined;      // D_f, indices into the source
  std::vector<std::uint32_t> exceptional;  // E_f
  std::map<std::uint32_t, std::uint32_t> normal;  // D_f -> target index
  std::map<std::uint32_t, std::uint32_t> abrupt;  // E_f -> packet index
};

Decomposition decompose(const Denotation& f);

/// v agrees with f on the domain of definition of f.
bool geq(const Denotation& v, const Denotation& f);

/// Propagator h with pr1 . h << v and pr2 . h == f; `right` builds the
/// mirror (f first, v second).
Denotation interp_left_pair(const Denotation& v, const Denotation& f, const Environment& env);
Denotation interp_right_pair(const Denotation& f, const Denotation& v, const Environment& env);

}  // namespace deckit::exc
