#include "deckit/calculus.hpp"

#include "deckit/error.hpp"
#include "deckit/pretty.hpp"

namespace deckit {

std::string to_string(const TermPath& path) {
  if (path.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(path[i]);
  }
  return out;
}

void check_type(const Type& t, const Theory& theory) {
  switch (t.kind()) {
    case TypeKind::unit:
    case TypeKind::empty: return;
    case TypeKind::base:
      if (!theory.find_base(t.name()))
        throw Error(ErrorKind::undeclared_name, "undeclared type '" + t.name() + "'");
      return;
    case TypeKind::effect:
      if (!theory.find_effect(t.name()))
        throw Error(ErrorKind::undeclared_name,
                    "undeclared effect name '" + t.name() + "' in type V_" + t.name());
      return;
    case TypeKind::prod:
    case TypeKind::sum:
      check_type(t.left(), theory);
      check_type(t.right(), theory);
      return;
    case TypeKind::meta:
      throw Error(ErrorKind::undeclared_name, "unbound type metavariable '" + t.name() + "'");
  }
}

namespace {

[[noreturn]] void mismatch(const TermPath& path, const Term& sub, const Type& expected,
                           const Type& actual) {
  throw Error(ErrorKind::type_mismatch, "type mismatch at " + to_string(path) + " in '" +
                                            pretty(sub) + "': " + to_string(expected) +
                                            " vs " + to_string(actual));
}

void require_effect(const Theory& theory, const std::string& name, TheoryKind needed,
                    const char* what) {
  if (name.empty() || name[0] == '?')
    throw Error(ErrorKind::undeclared_name, "unbound name metavariable '" + name + "'");
  if (!theory.find_effect(name) || theory.kind != needed)
    throw Error(ErrorKind::undeclared_name,
                std::string("undeclared ") + what + " name '" + name + "'");
}

Typing check(const Term& t, const Theory& theory, TermPath& path) {
  auto child = [&](const Term& c, int idx) {
    path.push_back(idx);
    Typing r = check(c, theory, path);
    path.pop_back();
    return r;
  };
  switch (t.kind()) {
    case TermKind::id:
      check_type(t.type(), theory);
      return {t.type(), t.type()};
    case TermKind::comp:
    case TermKind::prop_comp: {
      Typing outer = child(t.first(), 0);
      Typing inner = child(t.second(), 1);
      if (inner.target != outer.source) mismatch(path, t, inner.target, outer.source);
      return {inner.source, outer.target};
    }
    case TermKind::pair: {
      Typing a = child(t.first(), 0);
      Typing b = child(t.second(), 1);
      if (a.source != b.source) mismatch(path, t, a.source, b.source);
      return {a.source, Type::prod(a.target, b.target)};
    }
    case TermKind::proj:
      check_type(t.type(), theory);
      check_type(t.type2(), theory);
      return {Type::prod(t.type(), t.type2()), t.index() == 1 ? t.type() : t.type2()};
    case TermKind::final:
      check_type(t.type(), theory);
      return {t.type(), Type::unit()};
    case TermKind::copair: {
      Typing a = child(t.first(), 0);
      Typing b = child(t.second(), 1);
      if (a.target != b.target) mismatch(path, t, a.target, b.target);
      return {Type::sum(a.source, b.source), a.target};
    }
    case TermKind::copr:
      check_type(t.type(), theory);
      check_type(t.type2(), theory);
      return {t.index() == 1 ? t.type() : t.type2(), Type::sum(t.type(), t.type2())};
    case TermKind::initial:
      check_type(t.type(), theory);
      return {Type::empty(), t.type()};
    case TermKind::tag:
      require_effect(theory, t.name(), TheoryKind::exceptions, "exception");
      return {Type::effect(t.name()), Type::empty()};
    case TermKind::untag:
      require_effect(theory, t.name(), TheoryKind::exceptions, "exception");
      return {Type::empty(), Type::effect(t.name())};
    case TermKind::untag_all: return {Type::empty(), Type::unit()};
    case TermKind::lookup:
      require_effect(theory, t.name(), TheoryKind::states, "location");
      return {Type::unit(), Type::effect(t.name())};
    case TermKind::update:
      require_effect(theory, t.name(), TheoryKind::states, "location");
      return {Type::effect(t.name()), Type::unit()};
    case TermKind::constant: {
      const OpDecl* op = theory.find_op(t.name());
      if (!op) throw Error(ErrorKind::undeclared_name, "undeclared operation '" + t.name() + "'");
      return {op->source, op->target};
    }
    case TermKind::meta:
      throw Error(ErrorKind::undeclared_name, "unbound term metavariable '" + t.name() + "'");
  }
  throw Error(ErrorKind::unsupported, "unknown term kind");
}

Decoration deco(const Term& t, const Theory& theory) {
  switch (t.kind()) {
    case TermKind::id:
    case TermKind::proj:
    case TermKind::final:
    case TermKind::copr:
    case TermKind::initial: return Decoration::pure;
    case TermKind::tag:
    case TermKind::lookup: return Decoration::constructor;
    case TermKind::untag:
    case TermKind::untag_all:
    case TermKind::update: return Decoration::modifier;
    case TermKind::constant: return theory.find_op(t.name())->deco;
    case TermKind::comp:
    case TermKind::pair:
    case TermKind::copair: return max(deco(t.first(), theory), deco(t.second(), theory));
    case TermKind::prop_comp:
      return max(deco(t.second(), theory), min(deco(t.first(), theory), Decoration::constructor));
    case TermKind::meta: break;
  }
  throw Error(ErrorKind::undeclared_name, "metavariable has no decoration");
}

const char* pair_rule(TermKind k, PairKind p) {
  const bool pair = k == TermKind::pair;
  switch (p) {
    case PairKind::left: return pair ? "l-pair" : "l-copair";
    case PairKind::right: return pair ? "r-pair" : "r-copair";
    default: return pair ? "pair" : "copair";
  }
}

std::string bound_text(Decoration a, Decoration b) {
  if (a == b) return "d<=" + std::to_string(level(a));
  return "d1<=" + std::to_string(level(a)) + ", d2<=" + std::to_string(level(b));
}

// Returns the decoration of `t`, collecting violations along the way.
Decoration formation(const Term& t, const LogicProfile& prof, const Theory& theory,
                     TermPath& path, std::vector<Violation>& out) {
  const FormationTable& table = prof.formation;
  auto child = [&](const Term& c, int idx) {
    path.push_back(idx);
    Decoration d = formation(c, prof, theory, path, out);
    path.pop_back();
    return d;
  };
  auto report = [&](std::string rule, std::string message, Decoration a, Decoration b) {
    out.push_back({path, std::move(rule), std::move(message), a, b});
  };

  switch (t.kind()) {
    case TermKind::tag:
    case TermKind::untag:
    case TermKind::untag_all:
      if (!table.exception_ops)
        report("effect-op", pretty(t) + " is not available in " + std::string(prof.name),
               deco(t, theory), deco(t, theory));
      break;
    case TermKind::lookup:
    case TermKind::update:
      if (!table.state_ops)
        report("effect-op", pretty(t) + " is not available in " + std::string(prof.name),
               deco(t, theory), deco(t, theory));
      break;
    case TermKind::pair:
    case TermKind::copair: {
      Decoration a = child(t.first(), 0);
      Decoration b = child(t.second(), 1);
      const auto& bounds = t.is(TermKind::pair) ? table.pair(t.pair_kind())
                                                : table.copair(t.pair_kind());
      const std::string rule = pair_rule(t.kind(), t.pair_kind());
      if (!bounds) {
        report(rule, rule + " is not available in " + std::string(prof.name), a, b);
      } else if (a > bounds->first || b > bounds->second) {
        report(rule, rule + " requires " + bound_text(bounds->first, bounds->second) +
                         " (got " + std::to_string(level(a)) + ", " +
                         std::to_string(level(b)) + ")",
               a, b);
      }
      return max(a, b);
    }
    case TermKind::comp: {
      Decoration a = child(t.first(), 0);
      Decoration b = child(t.second(), 1);
      return max(a, b);
    }
    case TermKind::prop_comp: {
      Decoration k = child(t.first(), 0);
      Decoration f = child(t.second(), 1);
      if (!table.prop_comp_inner) {
        report("prop-comp", "prop-comp is not available in " + std::string(prof.name), k, f);
      } else if (f > *table.prop_comp_inner) {
        report("prop-comp",
               "prop-comp requires inner d<=" + std::to_string(level(*table.prop_comp_inner)) +
                   " (got " + std::to_string(level(f)) + ")",
               k, f);
      }
      return max(f, min(k, Decoration::constructor));
    }
    default: break;
  }
  Decoration d = deco(t, theory);
  if (d > table.max_any)
    report("pure-only", std::string(prof.name) + " permits pure terms only", d, d);
  return d;
}

}  // namespace

Typing typecheck(const Term& term, const Theory& theory) {
  TermPath path;
  return check(term, theory, path);
}

Typing typecheck(const Equation& eq, const Theory& theory) {
  Typing l = typecheck(eq.lhs, theory);
  Typing r = typecheck(eq.rhs, theory);
  if (l.source != r.source)
    throw Error(ErrorKind::type_mismatch, "equation sides have different sources: " +
                                              to_string(l.source) + " vs " + to_string(r.source));
  if (l.target != r.target)
    throw Error(ErrorKind::type_mismatch, "equation sides have different targets: " +
                                              to_string(l.target) + " vs " + to_string(r.target));
  return l;
}

Decoration infer_decoration(const Term& term, const Theory& theory) {
  typecheck(term, theory);
  return deco(term, theory);
}

std::vector<Violation> check_formation(const Term& term, const LogicProfile& profile,
                                       const Theory& theory) {
  std::vector<Violation> out;
  TermPath path;
  formation(term, profile, theory, path, out);
  return out;
}

Typing require_well_formed(const Term& term, const Theory& theory) {
  Typing ty = typecheck(term, theory);
  auto violations = check_formation(term, theory.profile(), theory);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(ErrorKind::formation, "formation violation at " + to_string(v.path) + " in '" +
                                          pretty(term) + "': " + v.message);
  }
  return ty;
}

Typing require_well_formed(const Equation& eq, const Theory& theory) {
  require_well_formed(eq.lhs, theory);
  require_well_formed(eq.rhs, theory);
  Typing ty = typecheck(eq, theory);
  if (eq.strength == Strength::order) {
    if (deco(eq.rhs, theory) != Decoration::pure)
      throw Error(ErrorKind::decoration_mismatch,
                  "the right side of '<<' must be pure: " + pretty(eq.rhs));
    if (deco(eq.lhs, theory) > Decoration::constructor)
      throw Error(ErrorKind::decoration_mismatch,
                  "the left side of '<<' must be a propagator: " + pretty(eq.lhs));
  }
  return ty;
}

}  // namespace deckit
