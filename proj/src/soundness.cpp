#include "deckit/soundness.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <thread>

#include "deckit/calculus.hpp"
#include "deckit/enumerate.hpp"
#include "deckit/error.hpp"
#include "deckit/kernel.hpp"
#include "deckit/model.hpp"
#include "deckit/pretty.hpp"

namespace deckit::soundness {

using kernel::Bindings;
using kernel::DecoExpr;
using kernel::RuleForm;
using kernel::Schema;
using kernel::SideCondition;
using kernel::TermSchema;

namespace {

// FNV-1a; stable across standard libraries, unlike std::hash.
std::uint64_t mix(std::uint64_t seed, const std::string& s) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

bool is_meta(const std::string& s) { return !s.empty() && s[0] == '?'; }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(gen_() % n); }
  bool chance(int num, int den) { return below(den) < static_cast<std::size_t>(num); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 gen_;
};

// ---- random terms ------------------------------------------------------------

class Generator {
 public:
  Generator(const Theory& theory, Rng& rng, int depth) : th_(theory), rng_(rng), depth_(depth) {
    for (const auto& b : th_.base_types) pool_.push_back(Type::base(b.name));
    pool_.push_back(Type::unit());
    for (const auto& e : th_.effects) pool_.push_back(Type::effect(e.name));
    for (const auto& op : th_.ops) {
      mids_.push_back(op.source);
      mids_.push_back(op.target);
    }
    for (const auto& t : pool_) mids_.push_back(t);
  }

  Type random_type() {
    switch (rng_.below(10)) {
      case 0: return Type::empty();
      case 1: return Type::prod(rng_.pick(pool_), rng_.pick(pool_));
      case 2: return Type::sum(rng_.pick(pool_), rng_.pick(pool_));
      default: return rng_.pick(pool_);
    }
  }

  /// A well-typed, formation-valid term A -> B whose inferred decoration is
  /// at most `bound`.
  std::optional<Term> term(const Type& a, const Type& b, Decoration bound) {
    for (int attempt = 0; attempt < 12; ++attempt) {
      auto t = build(a, b, 1 + static_cast<int>(rng_.below(depth_)));
      if (!t) continue;
      try {
        if (typecheck(*t, th_) != Typing{a, b}) continue;
        if (!check_formation(*t, th_.profile(), th_).empty()) continue;
        if (infer_decoration(*t, th_) > bound) continue;
        return t;
      } catch (const Error&) {
        continue;
      }
    }
    return std::nullopt;
  }

 private:
  std::vector<Term> direct(const Type& a, const Type& b) const {
    std::vector<Term> out;
    const auto& f = th_.profile().formation;
    if (a == b) out.push_back(Term::id(a));
    if (b.is(TypeKind::unit)) out.push_back(Term::final(a));
    if (a.is(TypeKind::empty)) out.push_back(Term::initial(b));
    if (a.is(TypeKind::prod)) {
      if (a.left() == b) out.push_back(Term::proj(1, a.left(), a.right()));
      if (a.right() == b) out.push_back(Term::proj(2, a.left(), a.right()));
    }
    if (b.is(TypeKind::sum)) {
      if (b.left() == a) out.push_back(Term::copr(1, b.left(), b.right()));
      if (b.right() == a) out.push_back(Term::copr(2, b.left(), b.right()));
    }
    for (const auto& op : th_.ops)
      if (op.source == a && op.target == b) out.push_back(Term::constant(op.name));
    for (const auto& e : th_.effects) {
      const Type v = Type::effect(e.name);
      if (f.exception_ops) {
        if (a == v && b.is(TypeKind::empty)) out.push_back(Term::tag(e.name));
        if (a.is(TypeKind::empty) && b == v) out.push_back(Term::untag(e.name));
      }
      if (f.state_ops) {
        if (a.is(TypeKind::unit) && b == v) out.push_back(Term::lookup(e.name));
        if (a == v && b.is(TypeKind::unit)) out.push_back(Term::update(e.name));
      }
    }
    if (f.exception_ops && a.is(TypeKind::empty) && b.is(TypeKind::unit))
      out.push_back(Term::untag_all());
    return out;
  }

  PairKind pair_kind(bool co) {
    const auto& f = th_.profile().formation;
    std::vector<PairKind> kinds;
    for (auto k : {PairKind::symmetric, PairKind::left, PairKind::right})
      if (co ? f.copair(k).has_value() : f.pair(k).has_value()) kinds.push_back(k);
    return kinds.empty() ? PairKind::symmetric : rng_.pick(kinds);
  }

  std::optional<Term> build(const Type& a, const Type& b, int depth) {
    auto leaves = direct(a, b);
    if (depth <= 0 || (!leaves.empty() && rng_.chance(2, 5))) {
      if (leaves.empty()) return std::nullopt;
      return rng_.pick(leaves);
    }
    std::optional<Term> t;
    switch (rng_.below(4)) {
      case 0:
        if (b.is(TypeKind::prod)) {
          auto l = build(a, b.left(), depth - 1);
          auto r = l ? build(a, b.right(), depth - 1) : std::nullopt;
          if (l && r) t = Term::pair(pair_kind(false), *l, *r);
          break;
        }
        [[fallthrough]];
      case 1:
        if (a.is(TypeKind::sum)) {
          auto l = build(a.left(), b, depth - 1);
          auto r = l ? build(a.right(), b, depth - 1) : std::nullopt;
          if (l && r) t = Term::copair(pair_kind(true), *l, *r);
          break;
        }
        [[fallthrough]];
      default: {
        const Type mid = rng_.chance(1, 4) ? random_type() : rng_.pick(mids_);
        auto inner = build(a, mid, depth - 1);
        auto outer = inner ? build(mid, b, depth - 1) : std::nullopt;
        if (inner && outer) {
          const bool prop = th_.profile().formation.prop_comp_inner.has_value() && rng_.chance(1, 4);
          t = prop ? Term::prop_comp(*outer, *inner) : Term::comp(*outer, *inner);
        }
      }
    }
    if (!t && !leaves.empty()) return rng_.pick(leaves);
    return t;
  }

  const Theory& th_;
  Rng& rng_;
  int depth_;
  std::vector<Type> pool_;
  std::vector<Type> mids_;
};

// ---- schema typing ---------------------------------------------------------

class Unifier {
 public:
  Type fresh() { return Type::meta("#" + std::to_string(next_++)); }

  Type resolve(const Type& t) const {
    switch (t.kind()) {
      case TypeKind::meta: {
        auto it = sub_.find(t.name());
        return it == sub_.end() ? t : resolve(it->second);
      }
      case TypeKind::prod: return Type::prod(resolve(t.left()), resolve(t.right()));
      case TypeKind::sum: return Type::sum(resolve(t.left()), resolve(t.right()));
      default: return t;
    }
  }

  bool unify(const Type& x, const Type& y) {
    const Type a = resolve(x), b = resolve(y);
    if (a.is(TypeKind::meta)) return bind(a.name(), b);
    if (b.is(TypeKind::meta)) return bind(b.name(), a);
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case TypeKind::prod:
      case TypeKind::sum: return unify(a.left(), b.left()) && unify(a.right(), b.right());
      default: return a == b;
    }
  }

  /// Binds every remaining variable to a concrete type from `gen`.
  void ground(const Type& t, Generator& gen) {
    const Type r = resolve(t);
    switch (r.kind()) {
      case TypeKind::meta: sub_.insert_or_assign(r.name(), gen.random_type()); break;
      case TypeKind::prod:
      case TypeKind::sum:
        ground(r.left(), gen);
        ground(r.right(), gen);
        break;
      default: break;
    }
  }

 private:
  static bool occurs(const std::string& v, const Type& t) {
    if (t.is(TypeKind::meta)) return t.name() == v;
    if (t.is(TypeKind::prod) || t.is(TypeKind::sum)) return occurs(v, t.left()) || occurs(v, t.right());
    return false;
  }
  bool bind(const std::string& v, const Type& t) {
    if (t.is(TypeKind::meta) && t.name() == v) return true;
    if (occurs(v, t)) return false;
    sub_.insert_or_assign(v, t);
    return true;
  }

  std::map<std::string, Type> sub_;
  int next_ = 0;
};

// Schemas of one form with every name meta fixed: premises, one family
// premise per effect, and the conclusion.
struct Expanded {
  std::vector<Schema> premises;
  Schema conclusion;
};

struct Typer {
  const Theory& th;
  const std::map<std::string, std::string>& names;
  const std::map<std::string, Term>& fixed;
  Unifier u;
  std::map<std::string, std::pair<Type, Type>> meta_types;

  Type name_type(const Type& t) const {
    switch (t.kind()) {
      case TypeKind::effect: {
        auto it = names.find(t.name());
        return it == names.end() ? t : Type::effect(it->second);
      }
      case TypeKind::prod: return Type::prod(name_type(t.left()), name_type(t.right()));
      case TypeKind::sum: return Type::sum(name_type(t.left()), name_type(t.right()));
      default: return t;
    }
  }
  std::string name(const std::string& n) const {
    auto it = names.find(n);
    return it == names.end() ? n : it->second;
  }

  std::optional<std::pair<Type, Type>> infer(const Term& t) {
    using P = std::pair<Type, Type>;
    switch (t.kind()) {
      case TermKind::meta: {
        if (auto it = meta_types.find(t.name()); it != meta_types.end()) return it->second;
        P p{u.fresh(), u.fresh()};
        if (auto f = fixed.find(t.name()); f != fixed.end()) {
          const Typing ty = typecheck(f->second, th);
          p = {ty.source, ty.target};
        }
        meta_types.emplace(t.name(), p);
        return p;
      }
      case TermKind::id: {
        const Type a = name_type(t.type());
        return P{a, a};
      }
      case TermKind::final: return P{name_type(t.type()), Type::unit()};
      case TermKind::initial: return P{Type::empty(), name_type(t.type())};
      case TermKind::proj: {
        const Type l = name_type(t.type()), r = name_type(t.type2());
        return P{Type::prod(l, r), t.index() == 1 ? l : r};
      }
      case TermKind::copr: {
        const Type l = name_type(t.type()), r = name_type(t.type2());
        return P{t.index() == 1 ? l : r, Type::sum(l, r)};
      }
      case TermKind::comp:
      case TermKind::prop_comp: {
        auto outer = infer(t.first());
        auto inner = outer ? infer(t.second()) : std::nullopt;
        if (!inner || !u.unify(inner->second, outer->first)) return std::nullopt;
        return P{inner->first, outer->second};
      }
      case TermKind::pair: {
        auto l = infer(t.first());
        auto r = l ? infer(t.second()) : std::nullopt;
        if (!r || !u.unify(l->first, r->first)) return std::nullopt;
        return P{l->first, Type::prod(l->second, r->second)};
      }
      case TermKind::copair: {
        auto l = infer(t.first());
        auto r = l ? infer(t.second()) : std::nullopt;
        if (!r || !u.unify(l->second, r->second)) return std::nullopt;
        return P{Type::sum(l->first, r->first), l->second};
      }
      case TermKind::tag: return P{Type::effect(name(t.name())), Type::empty()};
      case TermKind::untag: return P{Type::empty(), Type::effect(name(t.name()))};
      case TermKind::untag_all: return P{Type::empty(), Type::unit()};
      case TermKind::lookup: return P{Type::unit(), Type::effect(name(t.name()))};
      case TermKind::update: return P{Type::effect(name(t.name())), Type::unit()};
      case TermKind::constant: {
        const OpDecl* op = th.find_op(t.name());
        if (!op) return std::nullopt;
        return P{op->source, op->target};
      }
    }
    return std::nullopt;
  }

  bool schema(const Schema& s) {
    if (const auto* eq = std::get_if<Equation>(&s)) {
      auto l = infer(eq->lhs);
      auto r = l ? infer(eq->rhs) : std::nullopt;
      return r && u.unify(l->first, r->first) && u.unify(l->second, r->second);
    }
    const auto& ts = std::get<TermSchema>(s);
    auto p = infer(ts.term);
    return p && u.unify(p->first, name_type(ts.source)) && u.unify(p->second, name_type(ts.target));
  }
};

// ---- instances ---------------------------------------------------------------

struct Instance {
  Bindings b;
  std::vector<Judgment> premises;
  Judgment conclusion;
};

std::string instantiation_text(const Bindings& b) {
  std::string s;
  auto add = [&](const std::string& k, const std::string& v) {
    s += (s.empty() ? "" : ", ") + k + " := " + v;
  };
  for (const auto& [k, v] : b.terms) add(k, pretty(v));
  for (const auto& [k, v] : b.types)
    if (is_meta(k)) add(k, to_string(v));
  for (const auto& [k, v] : b.names) add(k, v);
  for (const auto& [k, v] : b.decos) add(k, std::to_string(level(v)));
  return s;
}

class Sampler {
 public:
  Sampler(const Theory& th, const Model& model, Rng& rng, int depth)
      : th_(th), model_(model), rng_(rng), gen_(th, rng, depth) {}

  /// One attempt at a well-formed instance satisfying the side conditions.
  std::optional<Instance> draw(const std::string& rule, const RuleForm& form, const Bindings& preset,
                               bool check_conditions = true) {
    const kernel::MetaSet ms = kernel::metas(form);
    Bindings b = preset;

    for (const auto& n : ms.names) {
      if (n == form.family_var || b.names.count(n)) continue;
      if (th_.effects.empty()) return std::nullopt;
      b.names[n] = rng_.pick(th_.effects).name;
    }
    for (const auto& c : form.conditions) {
      if (c.kind != SideCondition::Kind::declared_const || b.terms.count(c.a)) continue;
      if (th_.ops.empty()) return std::nullopt;
      const OpDecl& op = rng_.pick(th_.ops);
      b.terms.insert_or_assign(c.a, Term::constant(op.name));
      b.decos[c.b] = op.deco;
    }

    Expanded ex{form.premises, form.conclusion};
    std::vector<std::map<std::string, std::string>> family_names;
    if (form.family)
      for (const auto& e : th_.effects) family_names.push_back({{form.family_var, e.name}});

    // Types: one unifier over every schema; family premises are typed per name.
    Typer ty{th_, b.names, b.terms, {}, {}};
    for (const auto& p : ex.premises)
      if (!ty.schema(p)) return std::nullopt;
    if (!ty.schema(ex.conclusion)) return std::nullopt;
    for (const auto& fam : family_names) {
      auto names = b.names;
      names.insert(fam.begin(), fam.end());
      Typer sub{th_, names, b.terms, {}, {}};
      sub.u = ty.u;
      sub.meta_types = ty.meta_types;
      if (!sub.schema(*form.family)) return std::nullopt;
      ty.u = sub.u;
      ty.meta_types = sub.meta_types;
    }
    for (const auto& t : ms.types) ty.u.ground(Type::meta(t), gen_);
    for (const auto& [m, p] : ty.meta_types) {
      ty.u.ground(p.first, gen_);
      ty.u.ground(p.second, gen_);
    }
    for (const auto& t : ms.types) b.types.insert_or_assign(t, ty.u.resolve(Type::meta(t)));
    std::map<std::string, std::pair<Type, Type>> types;
    for (const auto& [m, p] : ty.meta_types)
      types.insert_or_assign(m, std::pair{ty.u.resolve(p.first), ty.u.resolve(p.second)});

    // Terms: drawn at random, or read off a premise (or the conclusion) whose
    // other side is already known.
    std::map<std::string, Decoration> bound;
    for (const auto& m : ms.terms) bound[m] = th_.profile().formation.max_any;
    for (const auto& c : form.conditions)
      if (c.kind == SideCondition::Kind::term_deco_at_most && bound.count(c.a))
        bound[c.a] = min(bound[c.a], c.bound);
    for (const auto& p : ex.premises)
      if (const auto* ts = std::get_if<TermSchema>(&p))
        if (ts->term.is(TermKind::meta) && ts->deco.kind == DecoExpr::Kind::literal)
          bound[ts->term.name()] = min(bound[ts->term.name()], ts->deco.lit);

    std::vector<const Schema*> sources;
    for (const auto& p : ex.premises) sources.push_back(&p);
    sources.push_back(&ex.conclusion);

    std::vector<std::string> open;
    for (const auto& m : ms.terms)
      if (!b.terms.count(m)) open.push_back(m);
    while (!open.empty()) {
      std::vector<std::pair<std::string, Term>> derivable;
      for (const Schema* s : sources) {
        const auto* eq = std::get_if<Equation>(s);
        if (!eq) continue;
        for (int side = 0; side < 2; ++side) {
          const Term& m = side ? eq->rhs : eq->lhs;
          const Term& other = side ? eq->lhs : eq->rhs;
          if (!m.is(TermKind::meta) || b.terms.count(m.name())) continue;
          try {
            derivable.emplace_back(m.name(), kernel::substitute(other, b));
          } catch (const Error&) {
          }
        }
      }
      if (!derivable.empty() && rng_.chance(3, 4)) {
        auto [m, t] = rng_.pick(derivable);
        b.terms.insert_or_assign(m, variant(t, types.at(m)));
        open.erase(std::find(open.begin(), open.end(), m));
        continue;
      }
      const std::string m = open[rng_.below(open.size())];
      auto t = gen_.term(types.at(m).first, types.at(m).second, bound[m]);
      if (!t) return std::nullopt;
      b.terms.insert_or_assign(m, *t);
      open.erase(std::find(open.begin(), open.end(), m));
    }

    // Decoration variables: mostly the term's actual level, sometimes above.
    for (const auto& p : ex.premises) {
      const auto* ts = std::get_if<TermSchema>(&p);
      if (!ts || ts->deco.kind != DecoExpr::Kind::var || b.decos.count(ts->deco.a)) continue;
      try {
        const Term t = kernel::substitute(ts->term, b);
        Decoration d = rng_.chance(1, 2) ? model_.semantic_decoration(t) : infer_decoration(t, th_);
        if (rng_.chance(1, 4)) d = decoration_of(static_cast<int>(rng_.below(3)));
        b.decos[ts->deco.a] = d;
      } catch (const Error&) {
        return std::nullopt;
      }
    }
    for (const auto& d : ms.decos)
      if (!b.decos.count(d)) b.decos[d] = decoration_of(static_cast<int>(rng_.below(3)));

    std::optional<Instance> built;
    try {
      std::vector<Judgment> premises;
      for (const auto& p : ex.premises) premises.push_back(kernel::substitute(p, b));
      for (const auto& fam : family_names) {
        Bindings fb = b;
        fb.names.insert(fam.begin(), fam.end());
        premises.push_back(kernel::substitute(*form.family, fb));
      }
      built = Instance{b, std::move(premises), kernel::substitute(ex.conclusion, b)};
    } catch (const Error&) {
      return std::nullopt;
    }
    Instance& in = *built;
    for (const auto& p : in.premises) {
      if (kernel::invalid_judgment(p, th_)) return std::nullopt;
      // Decorations are syntactic: a term judgment below the inferred level
      // may be true in the model but is not derivable.
      if (const auto* tj = std::get_if<TermJudgment>(&p))
        if (infer_decoration(tj->term, th_) > tj->deco) return std::nullopt;
    }
    if (check_conditions && kernel::violated_condition(rule, form, b, th_)) return std::nullopt;
    return built;
  }

 private:
  // A term equal to `t` in every model, not always syntactically `t`.
  Term variant(const Term& t, const std::pair<Type, Type>& ty) {
    switch (rng_.below(4)) {
      case 0: return Term::comp(Term::id(ty.second), t);
      case 1: return Term::comp(t, Term::id(ty.first));
      default: return t;
    }
  }

  const Theory& th_;
  const Model& model_;
  Rng& rng_;
  Generator gen_;
};

// Empty when the judgment holds, otherwise why not.
std::optional<std::string> refute(const Judgment& j, const Model& model, const Theory& th) {
  if (const auto* eq = std::get_if<Equation>(&j)) {
    const Verdict v = model.decide(*eq);
    if (v.holds) return std::nullopt;
    return describe(*v.counterexample, th);
  }
  const auto& tj = std::get<TermJudgment>(j);
  const Decoration d = model.semantic_decoration(tj.term);
  if (d <= tj.deco) return std::nullopt;
  return "denotation lives at level " + std::to_string(level(d)) + ", above " +
         std::to_string(level(tj.deco));
}

std::string form_text(const kernel::RuleDescriptor& rule, std::size_t index) {
  return kernel::describe(rule).at(index);
}

}  // namespace

struct TermSource::Impl {
  Impl(const Theory& th, std::uint64_t seed, int depth) : rng(seed), gen(th, rng, depth) {}
  Rng rng;
  Generator gen;
};

TermSource::TermSource(const Theory& theory, std::uint64_t seed, int depth)
    : impl_(std::make_unique<Impl>(theory, seed, depth)) {}
TermSource::~TermSource() = default;
Type TermSource::type() { return impl_->gen.random_type(); }
std::optional<Term> TermSource::term(const Type& a, const Type& b, Decoration bound) {
  return impl_->gen.term(a, b, bound);
}

Report check_rule_sound(const std::string& rule, const Theory& theory, const Budget& budget) {
  const kernel::RuleDescriptor* desc = kernel::find_rule(theory.logic, rule);
  if (!desc)
    throw Error(ErrorKind::unknown_rule, "unknown rule '" + rule + "' in " +
                                             std::string(to_string(theory.logic)));
  Report r;
  r.rule = rule;
  r.logic = std::string(to_string(theory.logic));
  r.theory = theory.name;

  const Model model(theory);
  Rng rng(mix(budget.seed, rule));
  Sampler sampler(theory, model, rng, budget.depth);
  for (std::size_t i = 0; i < budget.samples; ++i) {
    const std::size_t fi = i % desc->forms.size();
    const RuleForm& form = desc->forms[fi];
    std::optional<Instance> in;
    for (int attempt = 0; attempt < 8 && !in; ++attempt) in = sampler.draw(rule, form, {});
    if (!in) continue;
    try {
      bool premises = true;
      for (const auto& p : in->premises)
        if (!model.holds(p)) {
          premises = false;
          break;
        }
      ++r.tried;
      if (!premises) continue;
      ++r.premises_true;
      std::optional<std::string> why;
      if (auto bad = kernel::invalid_judgment(in->conclusion, theory))
        why = "conclusion is not a valid judgment: " + *bad;
      else
        why = refute(in->conclusion, model, theory);
      if (why && r.failures.size() < 8)
        r.failures.push_back({form_text(*desc, fi), instantiation_text(in->b),
                              to_string(in->conclusion), *why});
      else if (why)
        r.failures.push_back({});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::carrier_too_large) throw;
    }
  }
  r.budget_exhausted = r.premises_true == 0;
  return r;
}

std::vector<Report> check_rules(const Theory& theory, const Budget& budget, const std::string& only) {
  std::vector<std::string> names;
  for (const auto& d : kernel::rule_catalog(theory.logic))
    if (only == "all" || d.name == only) names.push_back(d.name);
  if (names.empty())
    throw Error(ErrorKind::unknown_rule, "unknown rule '" + only + "' in " +
                                             std::string(to_string(theory.logic)));
  std::vector<Report> out(names.size());
  const std::size_t workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  for (std::size_t start = 0; start < names.size(); start += workers) {
    std::vector<std::future<Report>> jobs;
    for (std::size_t i = start; i < std::min(names.size(), start + workers); ++i)
      jobs.push_back(std::async(std::launch::async,
                                [&, i] { return check_rule_sound(names[i], theory, budget); }));
    for (std::size_t i = 0; i < jobs.size(); ++i) out[start + i] = jobs[i].get();
  }
  return out;
}

// ---- side-condition witnesses ----------------------------------------------------

const std::vector<std::string>& witness_variants() {
  static const std::vector<std::string> v{"w-subs-unrestricted", "weak-strong-at-2",
                                          "copair-of-catchers"};
  return v;
}

namespace {

RuleForm weakened(Logic logic, const std::string& rule) {
  RuleForm f = kernel::find_rule(logic, rule)->forms.at(0);
  f.conditions.clear();
  return f;
}

// Re-checks a sampled witness on a fresh model, then compares both sides of
// the failing conclusion pointwise at the reported input.
bool reproduce(const Instance& in, const Theory& th) {
  const Model fresh(th);
  for (const auto& p : in.premises)
    if (!fresh.holds(p)) return false;
  const auto* eq = std::get_if<Equation>(&in.conclusion);
  if (!eq) return false;
  const Verdict v = fresh.decide(*eq);
  if (v.holds) return false;
  const auto& c = *v.counterexample;
  return fresh.eval_point(eq->lhs, c.input, c.input_state) !=
         fresh.eval_point(eq->rhs, c.input, c.input_state);
}

Witness sampled(const std::string& variant, const std::string& rule, const Theory& th,
                const Bindings& preset, const Budget& budget) {
  Witness w;
  w.variant = variant;
  const Model model(th);
  Rng rng(mix(budget.seed, variant));
  Sampler sampler(th, model, rng, budget.depth);
  const RuleForm form = weakened(th.logic, rule);
  for (std::size_t i = 0; i < budget.samples && !w.found; ++i) {
    ++w.attempts;
    auto in = sampler.draw(rule, form, preset, false);
    if (!in) continue;
    try {
      bool premises = true;
      for (const auto& p : in->premises) premises = premises && model.holds(p);
      if (!premises) continue;
      auto why = refute(in->conclusion, model, th);
      if (!why) continue;
      w.found = true;
      w.instantiation = instantiation_text(in->b);
      for (const auto& p : in->premises) w.premises.push_back(to_string(p));
      w.conclusion = to_string(in->conclusion);
      w.counterexample = *why;
      w.verified = reproduce(*in, th);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::carrier_too_large) throw;
    }
  }
  return w;
}

Witness catcher_copair(const Theory& th) {
  Witness w;
  w.variant = "copair-of-catchers";
  const std::string t = th.effects.front().name;
  const Type vt = Type::effect(t);
  const Term f1 = Term::untag(t);
  const Term f2 = Term::initial(vt);
  w.instantiation = "?f1 := " + pretty(f1) + ", ?f2 := " + pretty(f2) + ", ?A1 := 0, ?A2 := 0";
  w.premises = {pretty(f1) + " : 0 -> " + to_string(vt) + " deco 2",
                pretty(f2) + " : 0 -> " + to_string(vt) + " deco 2"};
  w.conclusion = "some h : 0 + 0 -> " + to_string(vt) + " has h . in1[0, 0] == " + pretty(f1) +
                 " and h . in2[0, 0] == " + pretty(f2);

  const Model model(th);
  const auto& env = model.exceptions();
  exc::Denotation d1 = exc::eval(f1, env);
  exc::Denotation d2 = exc::eval(f2, env);
  const auto search =
      enumerate::exc_copair_solutions(d1, d2, env, Limits::from_environment().max_candidates);
  w.attempts = static_cast<std::size_t>(search.candidates);
  if (search.solutions != 0 || !search.conflict) return w;

  w.found = true;
  const Type src = Type::sum(Type::empty(), Type::empty());
  const Value input = env.decode(src, search.conflict_input);
  w.counterexample = "input " + to_string(input) + ": the first law needs " +
                     to_outcome_string(env.decode(vt, search.first_demand)) +
                     ", the second needs " +
                     to_outcome_string(env.decode(vt, search.second_demand)) + "; none of " +
                     std::to_string(search.candidates) + " candidate tables satisfies both";

  // Re-evaluation: each component on its own, at the conflicting packet.
  const Model fresh(th);
  const Value packet = input;
  w.verified = fresh.eval_point(f1, packet, std::nullopt) == to_outcome_string(env.decode(vt, search.first_demand)) &&
               fresh.eval_point(f2, packet, std::nullopt) == to_outcome_string(env.decode(vt, search.second_demand)) &&
               search.first_demand != search.second_demand;
  return w;
}

}  // namespace

Witness find_side_condition_witness(const std::string& variant, const Theory& theory,
                                    const Budget& budget) {
  if (std::find(witness_variants().begin(), witness_variants().end(), variant) ==
      witness_variants().end())
    throw Error(ErrorKind::unknown_rule, "unknown rule variant '" + variant + "'");
  if (!theory.is_exception_side() || theory.effects.empty() ||
      !profile(theory.logic).formation.exception_ops)
    throw Error(ErrorKind::unsupported, variant + " needs an exception theory with a declared exception");

  const std::string t = theory.effects.front().name;
  const Type vt = Type::effect(t);
  const Term id = Term::id(vt);
  const Term round_trip = Term::comp(Term::untag(t), Term::tag(t));
  if (variant == "w-subs-unrestricted") {
    Bindings preset;
    preset.terms.insert_or_assign("?g1", id);
    preset.terms.insert_or_assign("?g2", round_trip);
    return sampled(variant, "w-subs", theory, preset, budget);
  }
  if (variant == "weak-strong-at-2") {
    Bindings preset;
    preset.terms.insert_or_assign("?f", round_trip);
    preset.terms.insert_or_assign("?g", id);
    return sampled(variant, "weak-strong", theory, preset, budget);
  }
  return catcher_copair(theory);
}

// ---- output --------------------------------------------------------------------

std::string to_text(const Report& r) {
  std::string s = r.rule + " [" + r.logic + ", " + r.theory + "]: " + std::to_string(r.tried) +
                  " instances, " + std::to_string(r.premises_true) + " with true premises, " +
                  std::to_string(r.failures.size()) + " failures";
  if (r.budget_exhausted) s += " (budget exhausted: no instance with true premises)";
  for (const auto& f : r.failures) {
    if (f.form.empty()) continue;
    s += "\n  form: " + f.form + "\n  with " + f.instantiation + "\n  fails " + f.conclusion +
         "\n  " + f.counterexample;
  }
  return s;
}

std::string to_text(const Witness& w) {
  std::string s = w.variant + ": ";
  if (!w.found) return s + "no witness found after " + std::to_string(w.attempts) + " attempts";
  s += std::string(w.verified ? "witness (re-evaluated)" : "witness (NOT reproduced)") + "\n  with " +
       w.instantiation;
  for (const auto& p : w.premises) s += "\n  holds " + p;
  s += "\n  fails " + w.conclusion + "\n  " + w.counterexample;
  return s;
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : r.failures)
    if (!f.form.empty())
      fails.push_back({{"form", f.form},
                       {"instantiation", f.instantiation},
                       {"conclusion", f.conclusion},
                       {"counterexample", f.counterexample}});
  return {{"rule", r.rule},
          {"logic", r.logic},
          {"theory", r.theory},
          {"tried", r.tried},
          {"premises_true", r.premises_true},
          {"failure_count", r.failures.size()},
          {"failures", fails},
          {"budget_exhausted", r.budget_exhausted}};
}

nlohmann::json to_json(const Witness& w) {
  return {{"variant", w.variant},         {"found", w.found},
          {"verified", w.verified},       {"instantiation", w.instantiation},
          {"premises", w.premises},       {"conclusion", w.conclusion},
          {"counterexample", w.counterexample}, {"attempts", w.attempts}};
}

}  // namespace deckit::soundness
