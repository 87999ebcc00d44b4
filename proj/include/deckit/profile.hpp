#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deckit/term.hpp"

namespace deckit {

enum class Logic { eq, mon, comon, exc, st, exc_plus, st_plus };

enum class Side { none, monad, comonad };

/// Maximal decorations allowed for the two components of a binary node.
/// An absent bound means the construction does not exist in the logic.
struct ComponentBounds {
  Decoration first;
  Decoration second;
};

struct FormationTable {
  std::optional<ComponentBounds> pair_symmetric;
  std::optional<ComponentBounds> pair_left;
  std::optional<ComponentBounds> pair_right;
  std::optional<ComponentBounds> copair_symmetric;
  std::optional<ComponentBounds> copair_left;
  std::optional<ComponentBounds> copair_right;
  /// Bound on the inner factor of a propagator composition.
  std::optional<Decoration> prop_comp_inner;
  /// Every node of every term must stay below this level.
  Decoration max_any = Decoration::modifier;
  bool exception_ops = false;
  bool state_ops = false;

  const std::optional<ComponentBounds>& pair(PairKind k) const;
  const std::optional<ComponentBounds>& copair(PairKind k) const;
};

struct LogicProfile {
  Logic logic;
  std::string_view name;
  Side side;
  FormationTable formation;
};

const LogicProfile& profile(Logic logic);
const std::vector<Logic>& all_logics();
std::optional<Logic> parse_logic(std::string_view name);
std::string_view to_string(Logic logic);

/// True when every term and derivation valid in `smaller` stays valid in
/// `larger` (MON <= EXC <= EXC_PLUS and COMON <= ST <= ST_PLUS).
bool extends(Logic larger, Logic smaller);

}  // namespace deckit
