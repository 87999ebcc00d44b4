#include "deckit/kernel.hpp"

#include <algorithm>
#include <mutex>

#include "deckit/calculus.hpp"
#include "deckit/error.hpp"
#include "deckit/parse.hpp"
#include "deckit/pretty.hpp"

namespace deckit::kernel {

namespace {

// ---- schema text -------------------------------------------------------

DecoExpr parse_deco(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  DecoExpr d;
  if (s == "0" || s == "1" || s == "2") {
    d.lit = decoration_of(s[0] - '0');
    return d;
  }
  if (s.rfind("max(", 0) == 0 && s.back() == ')') {
    auto comma = s.find(',');
    d.kind = DecoExpr::Kind::max;
    d.a = s.substr(4, comma - 4);
    d.b = s.substr(comma + 1, s.size() - comma - 2);
    return d;
  }
  d.kind = DecoExpr::Kind::var;
  d.a = s;
  return d;
}

Schema parse_schema(const std::string& text) {
  auto colon = text.find(" : ");
  if (colon == std::string::npos) return parse_equation(text);
  auto arrow = text.find("->", colon);
  auto deco = text.find(" deco ", arrow);
  return TermSchema{parse_term(text.substr(0, colon)),
                    parse_type(text.substr(colon + 3, arrow - colon - 3)),
                    parse_type(text.substr(arrow + 2, deco - arrow - 2)),
                    parse_deco(text.substr(deco + 6))};
}

SideCondition pure(std::string meta) {
  return {SideCondition::Kind::term_deco_at_most, std::move(meta), {}, Decoration::pure};
}
SideCondition below2(std::string meta) {
  return {SideCondition::Kind::term_deco_at_most, std::move(meta), {}, Decoration::constructor};
}
SideCondition var_pure(std::string var) {
  return {SideCondition::Kind::deco_var_at_most, std::move(var), {}, Decoration::pure};
}
SideCondition var_below2(std::string var) {
  return {SideCondition::Kind::deco_var_at_most, std::move(var), {}, Decoration::constructor};
}
SideCondition distinct(std::string a, std::string b) {
  return {SideCondition::Kind::names_distinct, std::move(a), std::move(b), Decoration::pure};
}

class Catalog {
 public:
  Catalog& rule(const std::string& name) {
    rules_.push_back({name, {}});
    return *this;
  }
  Catalog& form(std::vector<std::string> premises, const std::string& conclusion,
                std::vector<SideCondition> conditions = {}) {
    RuleForm f{{}, parse_schema(conclusion), std::move(conditions), std::nullopt, {}};
    for (const auto& p : premises) f.premises.push_back(parse_schema(p));
    rules_.back().forms.push_back(std::move(f));
    return *this;
  }
  Catalog& family(const std::string& var, const std::string& premise) {
    rules_.back().forms.back().family = parse_schema(premise);
    rules_.back().forms.back().family_var = var;
    return *this;
  }
  std::vector<RuleDescriptor> take() { return std::move(rules_); }

 private:
  std::vector<RuleDescriptor> rules_;
};

// Rules shared by every logic: identities, composition, projections and
// coprojections, final and initial arrows, declared operations.
void structure(Catalog& c) {
  c.rule("id").form({}, "id[?A] : ?A -> ?A deco 0");
  c.rule("comp").form({"?f : ?A -> ?B deco ?d", "?g : ?B -> ?C deco ?e"},
                      "?g . ?f : ?A -> ?C deco max(?d, ?e)");
  c.rule("id-source").form({}, "?f . id[?A] == ?f");
  c.rule("id-target").form({}, "id[?B] . ?f == ?f");
  c.rule("assoc").form({}, "?h . (?g . ?f) == (?h . ?g) . ?f");
  c.rule("prod")
      .form({}, "pr1[?B1, ?B2] : ?B1 * ?B2 -> ?B1 deco 0")
      .form({}, "pr2[?B1, ?B2] : ?B1 * ?B2 -> ?B2 deco 0");
  c.rule("final").form({}, "final[?A] : ?A -> 1 deco 0");
  c.rule("coprod")
      .form({}, "in1[?A1, ?A2] : ?A1 -> ?A1 + ?A2 deco 0")
      .form({}, "in2[?A1, ?A2] : ?A2 -> ?A1 + ?A2 deco 0");
  c.rule("initial").form({}, "initial[?B] : 0 -> ?B deco 0");
  c.rule("const").form({}, "?f : ?A -> ?B deco ?d",
                       {{SideCondition::Kind::declared_const, "?f", "?d", Decoration::pure}});
}

// Symmetric pair rules with both components bounded by `bound`.
void pairs(Catalog& c, Decoration bound) {
  auto pre = bound == Decoration::pure ? pure : below2;
  auto var = bound == Decoration::pure ? var_pure : var_below2;
  c.rule("pair")
      .form({"?f1 : ?A -> ?B1 deco ?d1", "?f2 : ?A -> ?B2 deco ?d2"},
            "pair(?f1, ?f2) : ?A -> ?B1 * ?B2 deco max(?d1, ?d2)", {var("?d1"), var("?d2")})
      .form({}, "pr1[?B1, ?B2] . pair(?f1, ?f2) == ?f1", {pre("?f1"), pre("?f2")})
      .form({}, "pr2[?B1, ?B2] . pair(?f1, ?f2) == ?f2", {pre("?f1"), pre("?f2")});
  c.rule("pair-u").form({"pr1[?B1, ?B2] . ?g == ?f1", "pr2[?B1, ?B2] . ?g == ?f2"},
                        "?g == pair(?f1, ?f2)", {pre("?f1"), pre("?f2"), pre("?g")});
}

// Symmetric copair rules; no bound at all when `bound` is empty.
void copairs(Catalog& c, std::optional<Decoration> bound) {
  std::vector<SideCondition> vars, terms, with_g;
  if (bound) {
    auto pre = *bound == Decoration::pure ? pure : below2;
    auto var = *bound == Decoration::pure ? var_pure : var_below2;
    vars = {var("?d1"), var("?d2")};
    terms = {pre("?f1"), pre("?f2")};
    with_g = {pre("?f1"), pre("?f2"), pre("?g")};
  }
  c.rule("copair")
      .form({"?f1 : ?A1 -> ?B deco ?d1", "?f2 : ?A2 -> ?B deco ?d2"},
            "copair(?f1 | ?f2) : ?A1 + ?A2 -> ?B deco max(?d1, ?d2)", vars)
      .form({}, "copair(?f1 | ?f2) . in1[?A1, ?A2] == ?f1", terms)
      .form({}, "copair(?f1 | ?f2) . in2[?A1, ?A2] == ?f2", terms);
  c.rule("copair-u").form({"?g . in1[?A1, ?A2] == ?f1", "?g . in2[?A1, ?A2] == ?f2"},
                          "?g == copair(?f1 | ?f2)", with_g);
}

std::vector<RuleDescriptor> build_eq() {
  Catalog c;
  c.rule("refl").form({}, "?f == ?f");
  c.rule("sym").form({"?f == ?g"}, "?g == ?f");
  c.rule("trans").form({"?f == ?g", "?g == ?h"}, "?f == ?h");
  c.rule("repl").form({"?f1 == ?f2"}, "?g . ?f1 == ?g . ?f2");
  c.rule("subs").form({"?g1 == ?g2"}, "?g1 . ?f == ?g2 . ?f");
  structure(c);
  pairs(c, Decoration::pure);
  copairs(c, Decoration::pure);
  c.rule("final-u").form({}, "?f == final[?A]");
  c.rule("initial-u").form({}, "?f == initial[?B]");
  return c.take();
}

// Rules common to the decorated logics on both sides.
void decorated_core(Catalog& c) {
  c.rule("pure-acc").form({"?f : ?A -> ?B deco 0"}, "?f : ?A -> ?B deco 1");
  c.rule("acc-mod").form({"?f : ?A -> ?B deco 1"}, "?f : ?A -> ?B deco 2");
  c.rule("strong-weak").form({"?f == ?g"}, "?f ~ ?g");
  c.rule("weak-strong").form({"?f ~ ?g"}, "?f == ?g", {below2("?f"), below2("?g")});
  c.rule("s-refl").form({}, "?f == ?f");
  c.rule("s-sym").form({"?f == ?g"}, "?g == ?f");
  c.rule("s-trans").form({"?f == ?g", "?g == ?h"}, "?f == ?h");
  c.rule("w-refl").form({}, "?f ~ ?f");
  c.rule("w-sym").form({"?f ~ ?g"}, "?g ~ ?f");
  c.rule("w-trans").form({"?f ~ ?g", "?g ~ ?h"}, "?f ~ ?h");
  c.rule("s-repl").form({"?f1 == ?f2"}, "?g . ?f1 == ?g . ?f2");
  c.rule("s-subs").form({"?g1 == ?g2"}, "?g1 . ?f == ?g2 . ?f");
  structure(c);
}

void monad_core(Catalog& c) {
  decorated_core(c);
  c.rule("w-repl").form({"?f1 ~ ?f2"}, "?g . ?f1 ~ ?g . ?f2");
  c.rule("w-subs").form({"?g1 ~ ?g2"}, "?g1 . ?f ~ ?g2 . ?f", {pure("?f")});
  pairs(c, Decoration::pure);
  copairs(c, Decoration::constructor);
  c.rule("final-u").form({}, "?f == final[?A]", {pure("?f")});
  c.rule("initial-u").form({}, "?f ~ initial[?B]");
}

void comonad_core(Catalog& c) {
  decorated_core(c);
  c.rule("w-repl").form({"?f1 ~ ?f2"}, "?g . ?f1 ~ ?g . ?f2", {pure("?g")});
  c.rule("w-subs").form({"?g1 ~ ?g2"}, "?g1 . ?f ~ ?g2 . ?f");
  pairs(c, Decoration::constructor);
  copairs(c, Decoration::pure);
  c.rule("final-u").form({}, "?f ~ final[?A]");
  c.rule("initial-u").form({}, "?f == initial[?B]", {pure("?f")});
}

std::vector<RuleDescriptor> build_mon() {
  Catalog c;
  monad_core(c);
  return c.take();
}

std::vector<RuleDescriptor> build_comon() {
  Catalog c;
  comonad_core(c);
  return c.take();
}

std::vector<RuleDescriptor> build_exc() {
  Catalog e;
  monad_core(e);
  e.rule("l-copair")
      .form({"?f1 : ?A1 -> ?B deco 1", "?f2 : ?A2 -> ?B deco 2"},
            "lcopair(?f1 | ?f2) : ?A1 + ?A2 -> ?B deco 2")
      .form({}, "lcopair(?f1 | ?f2) . in1[?A1, ?A2] ~ ?f1", {below2("?f1")})
      .form({}, "lcopair(?f1 | ?f2) . in2[?A1, ?A2] == ?f2", {below2("?f1")});
  e.rule("l-copair-u")
      .form({"?g . in1[?A1, ?A2] ~ ?f1", "?g . in2[?A1, ?A2] == ?f2"},
            "?g == lcopair(?f1 | ?f2)", {below2("?f1")});
  e.rule("r-copair")
      .form({"?f1 : ?A1 -> ?B deco 2", "?f2 : ?A2 -> ?B deco 1"},
            "rcopair(?f1 | ?f2) : ?A1 + ?A2 -> ?B deco 2")
      .form({}, "rcopair(?f1 | ?f2) . in1[?A1, ?A2] == ?f1", {below2("?f2")})
      .form({}, "rcopair(?f1 | ?f2) . in2[?A1, ?A2] ~ ?f2", {below2("?f2")});
  e.rule("r-copair-u")
      .form({"?g . in1[?A1, ?A2] == ?f1", "?g . in2[?A1, ?A2] ~ ?f2"},
            "?g == rcopair(?f1 | ?f2)", {below2("?f2")});
  e.rule("effect").form({"?f ~ ?g", "?f . initial[?A] == ?g . initial[?A]"}, "?f == ?g");
  e.rule("tag").form({}, "tag[?T] : V_?T -> 0 deco 1");
  e.rule("untag").form({}, "untag[?T] : 0 -> V_?T deco 2");
  e.rule("untag-all").form({}, "untagall : 0 -> 1 deco 2");
  e.rule("ax-untag-tag").form({}, "untag[?T] . tag[?T] ~ id[V_?T]");
  e.rule("ax-untag-tag-other")
      .form({}, "untag[?T] . tag[?R] ~ initial[V_?T] . tag[?R]", {distinct("?T", "?R")});
  e.rule("ax-untag-all-tag").form({}, "untagall . tag[?T] ~ final[V_?T]");
  e.rule("exc-coprod-u").form({}, "?f == ?g").family("?X", "?f . tag[?X] ~ ?g . tag[?X]");
  return e.take();
}

std::vector<RuleDescriptor> build_exc_plus() {
  auto rules = build_exc();
  Catalog c;
  c.rule("prop-comp")
      .form({"?f : ?A -> ?B deco 1", "?g : ?B -> ?C deco 2"}, "?g (.) ?f : ?A -> ?C deco 1")
      .form({}, "?g (.) ?f ~ ?g . ?f", {below2("?f")});
  c.rule("l-pair")
      .form({"?f1 : ?A -> ?B1 deco 0", "?f2 : ?A -> ?B2 deco 1"},
            "lpair(?f1, ?f2) : ?A -> ?B1 * ?B2 deco 1")
      .form({}, "pr1[?B1, ?B2] . lpair(?f1, ?f2) << ?f1", {pure("?f1"), below2("?f2")})
      .form({}, "pr2[?B1, ?B2] . lpair(?f1, ?f2) ~ ?f2", {pure("?f1"), below2("?f2")});
  c.rule("l-pair-u")
      .form({"pr1[?B1, ?B2] . ?g << ?f1", "pr2[?B1, ?B2] . ?g == ?f2"},
            "?g == lpair(?f1, ?f2)", {pure("?f1"), below2("?f2"), below2("?g")});
  c.rule("r-pair")
      .form({"?f1 : ?A -> ?B1 deco 1", "?f2 : ?A -> ?B2 deco 0"},
            "rpair(?f1, ?f2) : ?A -> ?B1 * ?B2 deco 1")
      .form({}, "pr1[?B1, ?B2] . rpair(?f1, ?f2) ~ ?f1", {below2("?f1"), pure("?f2")})
      .form({}, "pr2[?B1, ?B2] . rpair(?f1, ?f2) << ?f2", {below2("?f1"), pure("?f2")});
  c.rule("r-pair-u")
      .form({"pr1[?B1, ?B2] . ?g == ?f1", "pr2[?B1, ?B2] . ?g << ?f2"},
            "?g == rpair(?f1, ?f2)", {below2("?f1"), pure("?f2"), below2("?g")});
  for (auto& r : c.take()) rules.push_back(std::move(r));
  return rules;
}

std::vector<RuleDescriptor> build_st() {
  Catalog c;
  comonad_core(c);
  c.rule("l-pair")
      .form({"?f1 : ?A -> ?B1 deco 1", "?f2 : ?A -> ?B2 deco 2"},
            "lpair(?f1, ?f2) : ?A -> ?B1 * ?B2 deco 2")
      .form({}, "pr1[?B1, ?B2] . lpair(?f1, ?f2) ~ ?f1", {below2("?f1")})
      .form({}, "pr2[?B1, ?B2] . lpair(?f1, ?f2) == ?f2", {below2("?f1")});
  c.rule("l-pair-u")
      .form({"pr1[?B1, ?B2] . ?g ~ ?f1", "pr2[?B1, ?B2] . ?g == ?f2"},
            "?g == lpair(?f1, ?f2)", {below2("?f1")});
  c.rule("r-pair")
      .form({"?f1 : ?A -> ?B1 deco 2", "?f2 : ?A -> ?B2 deco 1"},
            "rpair(?f1, ?f2) : ?A -> ?B1 * ?B2 deco 2")
      .form({}, "pr1[?B1, ?B2] . rpair(?f1, ?f2) == ?f1", {below2("?f2")})
      .form({}, "pr2[?B1, ?B2] . rpair(?f1, ?f2) ~ ?f2", {below2("?f2")});
  c.rule("r-pair-u")
      .form({"pr1[?B1, ?B2] . ?g == ?f1", "pr2[?B1, ?B2] . ?g ~ ?f2"},
            "?g == rpair(?f1, ?f2)", {below2("?f2")});
  c.rule("st-effect-u").form({"?f ~ ?g", "final[?B] . ?f == final[?B] . ?g"}, "?f == ?g");
  c.rule("lookup").form({}, "lookup[?T] : 1 -> V_?T deco 1");
  c.rule("update").form({}, "update[?T] : V_?T -> 1 deco 2");
  c.rule("ax-lookup-update").form({}, "lookup[?T] . update[?T] ~ id[V_?T]");
  c.rule("ax-lookup-update-other")
      .form({}, "lookup[?R] . update[?T] ~ lookup[?R] . final[V_?T]", {distinct("?T", "?R")});
  c.rule("st-prod-u").form({}, "?f == ?g").family("?X", "lookup[?X] . ?f ~ lookup[?X] . ?g");
  return c.take();
}

std::vector<RuleDescriptor> build_st_plus() {
  Catalog c;
  copairs(c, std::nullopt);
  auto replacement = c.take();
  auto rules = build_st();
  for (auto& r : rules)
    for (auto& n : replacement)
      if (r.name == n.name) r = n;
  return rules;
}

// ---- matching ------------------------------------------------------------

bool is_meta_name(const std::string& s) { return !s.empty() && s[0] == '?'; }

bool match_name(const std::string& schema, const std::string& concrete, Bindings& b) {
  if (!is_meta_name(schema)) return schema == concrete;
  auto [it, fresh] = b.names.emplace(schema, concrete);
  return fresh || it->second == concrete;
}

struct Deferred {
  DecoExpr expr;
  Decoration actual;
};

bool match_deco(const DecoExpr& e, Decoration actual, Bindings& b, std::vector<Deferred>& later) {
  switch (e.kind) {
    case DecoExpr::Kind::literal: return e.lit == actual;
    case DecoExpr::Kind::var: {
      auto [it, fresh] = b.decos.emplace(e.a, actual);
      return fresh || it->second == actual;
    }
    case DecoExpr::Kind::max: later.push_back({e, actual}); return true;
  }
  return false;
}

std::string deco_string(const DecoExpr& e) {
  switch (e.kind) {
    case DecoExpr::Kind::literal: return std::to_string(level(e.lit));
    case DecoExpr::Kind::var: return e.a;
    case DecoExpr::Kind::max: return "max(" + e.a + ", " + e.b + ")";
  }
  return "?";
}

bool match_schema(const Schema& s, const Judgment& j, Bindings& b, std::vector<Deferred>& later) {
  if (const auto* eq = std::get_if<Equation>(&s)) {
    const auto* c = std::get_if<Equation>(&j);
    return c && c->strength == eq->strength && match(eq->lhs, c->lhs, b) &&
           match(eq->rhs, c->rhs, b);
  }
  const auto& ts = std::get<TermSchema>(s);
  const auto* c = std::get_if<TermJudgment>(&j);
  return c && match(ts.term, c->term, b) && match(ts.source, c->source, b) &&
         match(ts.target, c->target, b) && match_deco(ts.deco, c->deco, b, later);
}

void collect(const Type& t, MetaSet& m) {
  auto add = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  switch (t.kind()) {
    case TypeKind::meta: add(m.types, t.name()); break;
    case TypeKind::effect:
      if (is_meta_name(t.name())) add(m.names, t.name());
      break;
    case TypeKind::prod:
    case TypeKind::sum:
      collect(t.left(), m);
      collect(t.right(), m);
      break;
    default: break;
  }
}

void collect(const Term& t, MetaSet& m) {
  auto add = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  switch (t.kind()) {
    case TermKind::meta: add(m.terms, t.name()); break;
    case TermKind::tag:
    case TermKind::untag:
    case TermKind::lookup:
    case TermKind::update:
      if (is_meta_name(t.name())) add(m.names, t.name());
      break;
    case TermKind::id:
    case TermKind::final:
    case TermKind::initial: collect(t.type(), m); break;
    case TermKind::proj:
    case TermKind::copr:
      collect(t.type(), m);
      collect(t.type2(), m);
      break;
    case TermKind::comp:
    case TermKind::prop_comp:
    case TermKind::pair:
    case TermKind::copair:
      collect(t.first(), m);
      collect(t.second(), m);
      break;
    default: break;
  }
}

void collect(const Schema& s, MetaSet& m) {
  if (const auto* eq = std::get_if<Equation>(&s)) {
    collect(eq->lhs, m);
    collect(eq->rhs, m);
    return;
  }
  const auto& ts = std::get<TermSchema>(s);
  collect(ts.term, m);
  collect(ts.source, m);
  collect(ts.target, m);
  auto add = [&](const std::string& v) {
    if (!v.empty() && std::find(m.decos.begin(), m.decos.end(), v) == m.decos.end())
      m.decos.push_back(v);
  };
  if (ts.deco.kind != DecoExpr::Kind::literal) {
    add(ts.deco.a);
    add(ts.deco.b);
  }
}

std::string strip(const std::string& meta) { return is_meta_name(meta) ? meta.substr(1) : meta; }

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

// ---- public --------------------------------------------------------------

const std::vector<RuleDescriptor>& rule_catalog(Logic logic) {
  static std::mutex mu;
  static std::map<Logic, std::vector<RuleDescriptor>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(logic);
  if (it != cache.end()) return it->second;
  std::vector<RuleDescriptor> rules;
  switch (logic) {
    case Logic::eq: rules = build_eq(); break;
    case Logic::mon: rules = build_mon(); break;
    case Logic::comon: rules = build_comon(); break;
    case Logic::exc: rules = build_exc(); break;
    case Logic::exc_plus: rules = build_exc_plus(); break;
    case Logic::st: rules = build_st(); break;
    case Logic::st_plus: rules = build_st_plus(); break;
  }
  return cache.emplace(logic, std::move(rules)).first->second;
}

const RuleDescriptor* find_rule(Logic logic, const std::string& name) {
  for (const auto& r : rule_catalog(logic))
    if (r.name == name) return &r;
  return nullptr;
}

std::string to_string(const Schema& s) {
  if (const auto* eq = std::get_if<Equation>(&s)) return pretty(*eq);
  const auto& ts = std::get<TermSchema>(s);
  return pretty(ts.term) + " : " + deckit::to_string(ts.source) + " -> " +
         deckit::to_string(ts.target) + " deco " + deco_string(ts.deco);
}

std::vector<std::string> describe(const RuleDescriptor& rule) {
  std::vector<std::string> out;
  for (const auto& f : rule.forms) {
    std::string line = rule.name + ": ";
    std::vector<std::string> prem;
    for (const auto& p : f.premises) prem.push_back(to_string(p));
    if (f.family) prem.push_back("for each " + strip(f.family_var) + ": " + to_string(*f.family));
    for (std::size_t i = 0; i < prem.size(); ++i) line += (i ? " ; " : "") + prem[i];
    line += (prem.empty() ? "|- " : " |- ") + to_string(f.conclusion);
    std::vector<std::string> conds;
    for (const auto& c : f.conditions) {
      switch (c.kind) {
        case SideCondition::Kind::term_deco_at_most:
          conds.push_back(strip(c.a) + " deco <= " + std::to_string(level(c.bound)));
          break;
        case SideCondition::Kind::deco_var_at_most:
          conds.push_back(strip(c.a) + " <= " + std::to_string(level(c.bound)));
          break;
        case SideCondition::Kind::names_distinct:
          conds.push_back(strip(c.a) + " != " + strip(c.b));
          break;
        case SideCondition::Kind::declared_const:
          conds.push_back(strip(c.a) + " declared with deco " + strip(c.b));
          break;
      }
    }
    if (!conds.empty()) {
      line += "   if ";
      for (std::size_t i = 0; i < conds.size(); ++i) line += (i ? ", " : "") + conds[i];
    }
    out.push_back(line);
  }
  return out;
}

bool match(const Type& schema, const Type& concrete, Bindings& b) {
  switch (schema.kind()) {
    case TypeKind::meta: {
      auto [it, fresh] = b.types.emplace(schema.name(), concrete);
      return fresh || it->second == concrete;
    }
    case TypeKind::effect:
      return concrete.is(TypeKind::effect) && match_name(schema.name(), concrete.name(), b);
    case TypeKind::prod:
    case TypeKind::sum:
      return concrete.kind() == schema.kind() && match(schema.left(), concrete.left(), b) &&
             match(schema.right(), concrete.right(), b);
    default: return schema == concrete;
  }
}

bool match(const Term& schema, const Term& concrete, Bindings& b) {
  if (schema.is(TermKind::meta)) {
    auto [it, fresh] = b.terms.emplace(schema.name(), concrete);
    return fresh || it->second == concrete;
  }
  if (schema.kind() != concrete.kind()) return false;
  switch (schema.kind()) {
    case TermKind::id:
    case TermKind::final:
    case TermKind::initial: return match(schema.type(), concrete.type(), b);
    case TermKind::proj:
    case TermKind::copr:
      return schema.index() == concrete.index() && match(schema.type(), concrete.type(), b) &&
             match(schema.type2(), concrete.type2(), b);
    case TermKind::comp:
    case TermKind::prop_comp:
      return match(schema.first(), concrete.first(), b) &&
             match(schema.second(), concrete.second(), b);
    case TermKind::pair:
    case TermKind::copair:
      return schema.pair_kind() == concrete.pair_kind() &&
             match(schema.first(), concrete.first(), b) &&
             match(schema.second(), concrete.second(), b);
    case TermKind::tag:
    case TermKind::untag:
    case TermKind::lookup:
    case TermKind::update: return match_name(schema.name(), concrete.name(), b);
    case TermKind::untag_all: return true;
    case TermKind::constant: return schema.name() == concrete.name();
    case TermKind::meta: break;
  }
  return false;
}

namespace {

[[noreturn]] void unbound(const std::string& meta) {
  throw Error(ErrorKind::unsupported, "unbound metavariable " + meta);
}

std::string name_of(const std::string& n, const Bindings& b) {
  if (!is_meta_name(n)) return n;
  auto it = b.names.find(n);
  if (it == b.names.end()) unbound(n);
  return it->second;
}

Decoration deco_of(const DecoExpr& e, const Bindings& b) {
  auto var = [&](const std::string& v) {
    auto it = b.decos.find(v);
    if (it == b.decos.end()) unbound(v);
    return it->second;
  };
  switch (e.kind) {
    case DecoExpr::Kind::literal: return e.lit;
    case DecoExpr::Kind::var: return var(e.a);
    case DecoExpr::Kind::max: return max(var(e.a), var(e.b));
  }
  return e.lit;
}

}  // namespace

Type substitute(const Type& schema, const Bindings& b) {
  switch (schema.kind()) {
    case TypeKind::meta: {
      auto it = b.types.find(schema.name());
      if (it == b.types.end()) unbound(schema.name());
      return it->second;
    }
    case TypeKind::effect: return Type::effect(name_of(schema.name(), b));
    case TypeKind::prod: return Type::prod(substitute(schema.left(), b), substitute(schema.right(), b));
    case TypeKind::sum: return Type::sum(substitute(schema.left(), b), substitute(schema.right(), b));
    default: return schema;
  }
}

Term substitute(const Term& schema, const Bindings& b) {
  switch (schema.kind()) {
    case TermKind::meta: {
      auto it = b.terms.find(schema.name());
      if (it == b.terms.end()) unbound(schema.name());
      return it->second;
    }
    case TermKind::id: return Term::id(substitute(schema.type(), b));
    case TermKind::final: return Term::final(substitute(schema.type(), b));
    case TermKind::initial: return Term::initial(substitute(schema.type(), b));
    case TermKind::proj:
      return Term::proj(schema.index(), substitute(schema.type(), b), substitute(schema.type2(), b));
    case TermKind::copr:
      return Term::copr(schema.index(), substitute(schema.type(), b), substitute(schema.type2(), b));
    case TermKind::comp:
      return Term::comp(substitute(schema.first(), b), substitute(schema.second(), b));
    case TermKind::prop_comp:
      return Term::prop_comp(substitute(schema.first(), b), substitute(schema.second(), b));
    case TermKind::pair:
      return Term::pair(schema.pair_kind(), substitute(schema.first(), b),
                        substitute(schema.second(), b));
    case TermKind::copair:
      return Term::copair(schema.pair_kind(), substitute(schema.first(), b),
                          substitute(schema.second(), b));
    case TermKind::tag: return Term::tag(name_of(schema.name(), b));
    case TermKind::untag: return Term::untag(name_of(schema.name(), b));
    case TermKind::lookup: return Term::lookup(name_of(schema.name(), b));
    case TermKind::update: return Term::update(name_of(schema.name(), b));
    default: return schema;
  }
}

Judgment substitute(const Schema& schema, const Bindings& b) {
  if (const auto* eq = std::get_if<Equation>(&schema))
    return Equation{substitute(eq->lhs, b), substitute(eq->rhs, b), eq->strength};
  const auto& ts = std::get<TermSchema>(schema);
  return TermJudgment{substitute(ts.term, b), substitute(ts.source, b),
                      substitute(ts.target, b), deco_of(ts.deco, b)};
}

MetaSet metas(const RuleForm& form) {
  MetaSet m;
  collect(form.conclusion, m);
  for (const auto& p : form.premises) collect(p, m);
  if (form.family) {
    collect(*form.family, m);
    std::erase(m.names, form.family_var);
  }
  for (const auto& c : form.conditions) {
    if (c.kind == SideCondition::Kind::deco_var_at_most && !contains(m.decos, c.a))
      m.decos.push_back(c.a);
  }
  return m;
}

std::optional<std::string> violated_condition(const std::string& rule, const RuleForm& form,
                                              const Bindings& b, const Theory& theory) {
  for (const auto& c : form.conditions) {
    switch (c.kind) {
      case SideCondition::Kind::term_deco_at_most: {
        auto it = b.terms.find(c.a);
        if (it == b.terms.end()) unbound(c.a);
        Decoration d = infer_decoration(it->second, theory);
        if (d <= c.bound) break;
        if (c.bound == Decoration::pure)
          return rule + " requires pure " + strip(c.a) + " (" + pretty(it->second) +
                 " has decoration " + std::to_string(level(d)) + ")";
        return rule + " requires " + strip(c.a) + " with decoration <= 1 (" +
               pretty(it->second) + " has decoration " + std::to_string(level(d)) + ")";
      }
      case SideCondition::Kind::deco_var_at_most: {
        auto it = b.decos.find(c.a);
        if (it == b.decos.end()) unbound(c.a);
        if (it->second <= c.bound) break;
        return rule + " requires " + strip(c.a) + " <= " + std::to_string(level(c.bound)) +
               " (got " + std::to_string(level(it->second)) + ")";
      }
      case SideCondition::Kind::names_distinct:
        if (name_of(c.a, b) != name_of(c.b, b)) break;
        return rule + " requires " + strip(c.a) + " != " + strip(c.b) + " (both are " +
               name_of(c.a, b) + ")";
      case SideCondition::Kind::declared_const: {
        auto it = b.terms.find(c.a);
        if (it == b.terms.end()) unbound(c.a);
        const OpDecl* op =
            it->second.is(TermKind::constant) ? theory.find_op(it->second.name()) : nullptr;
        if (!op) return rule + " requires a declared operation (got " + pretty(it->second) + ")";
        auto src = b.types.find("?A");
        auto tgt = b.types.find("?B");
        Decoration d = deco_of(DecoExpr{DecoExpr::Kind::var, Decoration::pure, c.b, {}}, b);
        if (src == b.types.end() || tgt == b.types.end() || src->second != op->source ||
            tgt->second != op->target || d != op->deco)
          return rule + ": " + op->name + " is declared as " + deckit::to_string(op->source) +
                 " -> " + deckit::to_string(op->target) + " deco " +
                 std::to_string(level(op->deco));
        break;
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> invalid_judgment(const Judgment& j, const Theory& theory) {
  try {
    if (const auto* eq = std::get_if<Equation>(&j)) {
      if (eq->lhs.has_meta() || eq->rhs.has_meta()) return "judgment contains metavariables";
      require_well_formed(*eq, theory);
      return std::nullopt;
    }
    const auto& tj = std::get<TermJudgment>(j);
    if (tj.term.has_meta() || tj.source.has_meta() || tj.target.has_meta())
      return "judgment contains metavariables";
    check_type(tj.source, theory);
    check_type(tj.target, theory);
    Typing ty = require_well_formed(tj.term, theory);
    if (ty.source != tj.source || ty.target != tj.target)
      return "stated type " + deckit::to_string(tj.source) + " -> " +
             deckit::to_string(tj.target) + " but the term has type " +
             deckit::to_string(ty.source) + " -> " + deckit::to_string(ty.target);
  } catch (const Error& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

std::string path_string(const std::vector<int>& path) {
  if (path.empty()) return "root";
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) s += (i ? "." : "") + std::to_string(path[i]);
  return s;
}

namespace {

// How far a form got before failing; the deepest failure is reported.
struct Attempt {
  int stage = 0;
  std::string reason;
};

std::optional<Attempt> try_form(const RuleDescriptor& rule, const RuleForm& form,
                                const Derivation& node, const Theory& theory) {
  Bindings b;
  MetaSet m = metas(form);
  for (const auto& [k, v] : node.inst.terms) {
    if (!contains(m.terms, k)) return Attempt{0, rule.name + " has no term metavariable " + k};
    b.terms.emplace(k, v);
  }
  for (const auto& [k, v] : node.inst.types) {
    if (!contains(m.types, k)) return Attempt{0, rule.name + " has no type metavariable " + k};
    b.types.emplace(k, v);
  }
  for (const auto& [k, v] : node.inst.names) {
    if (!contains(m.names, k)) return Attempt{0, rule.name + " has no name metavariable " + k};
    b.names.emplace(k, v);
  }

  std::vector<Deferred> later;
  if (!match_schema(form.conclusion, node.conclusion, b, later))
    return Attempt{1, "conclusion does not match " + rule.name + ": expected " +
                          to_string(form.conclusion)};

  std::size_t expected = form.premises.size() + (form.family ? theory.effects.size() : 0);
  if (node.premises.size() != expected)
    return Attempt{2, rule.name + " expects " + std::to_string(expected) + " premise(s), got " +
                          std::to_string(node.premises.size())};

  for (std::size_t i = 0; i < form.premises.size(); ++i) {
    if (!match_schema(form.premises[i], node.premises[i].conclusion, b, later))
      return Attempt{3, "premise " + std::to_string(i) + " of " + rule.name +
                            " does not match " + to_string(form.premises[i])};
  }
  if (form.family) {
    for (std::size_t k = 0; k < theory.effects.size(); ++k) {
      std::size_t i = form.premises.size() + k;
      b.names[form.family_var] = theory.effects[k].name;
      if (!match_schema(*form.family, node.premises[i].conclusion, b, later))
        return Attempt{3, "premise " + std::to_string(i) + " of " + rule.name +
                              " does not match " + to_string(*form.family) + " for " +
                              strip(form.family_var) + " = " + theory.effects[k].name};
    }
    b.names.erase(form.family_var);
  }

  for (const auto& d : later) {
    auto a = b.decos.find(d.expr.a);
    auto c = b.decos.find(d.expr.b);
    if (a == b.decos.end() || c == b.decos.end())
      return Attempt{3, rule.name + ": decoration " + deco_string(d.expr) + " is undetermined"};
    if (max(a->second, c->second) != d.actual)
      return Attempt{3, rule.name + " concludes decoration " +
                            std::to_string(level(max(a->second, c->second))) + ", not " +
                            std::to_string(level(d.actual))};
  }

  // Metavariables that only occur in side conditions cannot stay open.
  for (const auto& t : m.terms)
    if (!b.terms.count(t)) return Attempt{3, rule.name + ": " + t + " is not determined"};

  if (auto why = violated_condition(rule.name, form, b, theory)) return Attempt{4, *why};
  return std::nullopt;
}

std::optional<std::string> check_node(const Derivation& node, const Theory& theory) {
  if (auto bad = invalid_judgment(node.conclusion, theory))
    return "ill-formed conclusion " + deckit::to_string(node.conclusion) + ": " + *bad;

  if (node.rule.rfind(kAxiomPrefix, 0) == 0) {
    std::string name = node.rule.substr(std::string(kAxiomPrefix).size());
    const AxiomDecl* ax = theory.find_axiom(name);
    if (!ax) return "unknown axiom '" + name + "'";
    if (!node.premises.empty()) return "axiom " + name + " takes no premises";
    const auto* eq = std::get_if<Equation>(&node.conclusion);
    if (!eq || !(*eq == ax->eq))
      return "conclusion differs from axiom " + name + ": " + pretty(ax->eq);
    return std::nullopt;
  }

  const RuleDescriptor* rule = find_rule(theory.logic, node.rule);
  if (!rule)
    return "unknown rule '" + node.rule + "' in " + std::string(deckit::to_string(theory.logic));

  Attempt best{-1, {}};
  for (const auto& form : rule->forms) {
    auto fail = try_form(*rule, form, node, theory);
    if (!fail) return std::nullopt;
    if (fail->stage > best.stage) best = *fail;
  }
  return best.reason;
}

bool walk(const Derivation& node, const Theory& theory, std::vector<int>& path, Verdict& out) {
  if (auto why = check_node(node, theory)) {
    out = Verdict{false, path, node.rule, *why};
    return false;
  }
  for (std::size_t i = 0; i < node.premises.size(); ++i) {
    path.push_back(static_cast<int>(i));
    if (!walk(node.premises[i], theory, path, out)) return false;
    path.pop_back();
  }
  return true;
}

}  // namespace

Verdict check_derivation(const Derivation& d, const Theory& theory) {
  Verdict v;
  std::vector<int> path;
  walk(d, theory, path, v);
  return v;
}

}  // namespace deckit::kernel
