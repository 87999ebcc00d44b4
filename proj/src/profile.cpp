#include "deckit/profile.hpp"

namespace deckit {

namespace {

constexpr auto P = Decoration::pure;
constexpr auto C = Decoration::constructor;
constexpr auto M = Decoration::modifier;

LogicProfile make_eq() {
  FormationTable t;
  t.pair_symmetric = ComponentBounds{P, P};
  t.copair_symmetric = ComponentBounds{P, P};
  t.max_any = P;
  return {Logic::eq, "EQ", Side::none, t};
}

FormationTable monad_table() {
  FormationTable t;
  t.pair_symmetric = ComponentBounds{P, P};
  t.copair_symmetric = ComponentBounds{C, C};
  return t;
}

FormationTable comonad_table() {
  FormationTable t;
  t.pair_symmetric = ComponentBounds{C, C};
  t.copair_symmetric = ComponentBounds{P, P};
  return t;
}

LogicProfile make_exc(bool plus) {
  FormationTable t = monad_table();
  t.exception_ops = true;
  t.copair_left = ComponentBounds{C, M};
  t.copair_right = ComponentBounds{M, C};
  if (plus) {
    t.prop_comp_inner = C;
    t.pair_left = ComponentBounds{P, C};
    t.pair_right = ComponentBounds{C, P};
  }
  return {plus ? Logic::exc_plus : Logic::exc, plus ? "EXC_PLUS" : "EXC", Side::monad, t};
}

LogicProfile make_st(bool plus) {
  FormationTable t = comonad_table();
  t.state_ops = true;
  t.pair_left = ComponentBounds{C, M};
  t.pair_right = ComponentBounds{M, C};
  if (plus) t.copair_symmetric = ComponentBounds{M, M};
  return {plus ? Logic::st_plus : Logic::st, plus ? "ST_PLUS" : "ST", Side::comonad, t};
}

const std::vector<LogicProfile>& profiles() {
  static const std::vector<LogicProfile> all = {
      make_eq(),
      {Logic::mon, "MON", Side::monad, monad_table()},
      {Logic::comon, "COMON", Side::comonad, comonad_table()},
      make_exc(false),
      make_st(false),
      make_exc(true),
      make_st(true),
  };
  return all;
}

}  // namespace

const std::optional<ComponentBounds>& FormationTable::pair(PairKind k) const {
  switch (k) {
    case PairKind::left: return pair_left;
    case PairKind::right: return pair_right;
    default: return pair_symmetric;
  }
}

const std::optional<ComponentBounds>& FormationTable::copair(PairKind k) const {
  switch (k) {
    case PairKind::left: return copair_left;
    case PairKind::right: return copair_right;
    default: return copair_symmetric;
  }
}

const LogicProfile& profile(Logic logic) {
  return profiles()[static_cast<std::size_t>(logic)];
}

const std::vector<Logic>& all_logics() {
  static const std::vector<Logic> all = {Logic::eq,  Logic::mon,      Logic::comon,  Logic::exc,
                                         Logic::st, Logic::exc_plus, Logic::st_plus};
  return all;
}

std::optional<Logic> parse_logic(std::string_view name) {
  for (const auto& p : profiles())
    if (p.name == name) return p.logic;
  if (name == "EXC+") return Logic::exc_plus;
  if (name == "ST+") return Logic::st_plus;
  return std::nullopt;
}

std::string_view to_string(Logic logic) { return profile(logic).name; }

bool extends(Logic larger, Logic smaller) {
  if (larger == smaller) return true;
  switch (smaller) {
    case Logic::mon: return larger == Logic::exc || larger == Logic::exc_plus;
    case Logic::exc: return larger == Logic::exc_plus;
    case Logic::comon: return larger == Logic::st || larger == Logic::st_plus;
    case Logic::st: return larger == Logic::st_plus;
    default: return false;
  }
}

}  // namespace deckit
