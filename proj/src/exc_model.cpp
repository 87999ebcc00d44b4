#include "deckit/exc_model.hpp"

#include <limits>

#include "deckit/error.hpp"
#include "deckit/pretty.hpp"

namespace deckit::exc {

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

Denotation blank(const Type& a, const Type& b, std::uint32_t na, std::uint32_t nb,
                 std::uint32_t ne) {
  Denotation d;
  d.source = a;
  d.target = b;
  d.n_source = na;
  d.n_target = nb;
  d.n_exc = ne;
  d.table.assign(na + ne, kUnset);
  return d;
}

// Packets map to themselves.
void propagate(Denotation& d) {
  for (std::uint32_t p = 0; p < d.n_exc; ++p) d.table[d.n_source + p] = d.n_target + p;
}

[[noreturn]] void not_supported(const Term& t, const char* why) {
  throw Error(ErrorKind::formation, "cannot interpret '" + pretty(t) + "' with exceptions: " + why);
}

}  // namespace

void settle(Denotation& d) {
  d.min_deco = Decoration::pure;
  for (std::uint32_t p = 0; p < d.n_exc; ++p)
    if (d.table[d.n_source + p] != d.n_target + p) {
      d.min_deco = Decoration::modifier;
      return;
    }
  for (std::uint32_t i = 0; i < d.n_source; ++i)
    if (d.is_packet_out(d.table[i])) {
      d.min_deco = Decoration::constructor;
      return;
    }
}

Environment::Environment(const Theory& theory, Limits limits) : carriers_(theory, limits) {
  if (theory.kind == TheoryKind::states || theory.is_state_side())
    throw Error(ErrorKind::unsupported, "theory '" + theory.name + "' is not exception-sided");
  for (const auto& e : theory.effects) {
    offsets_[e.name] = static_cast<std::uint32_t>(packets_.size());
    for (const auto& v : carriers_.effect_elements(e.name))
      packets_.push_back(Value::packet(e.name, v));
  }
  if (packets_.size() > limits.max_carrier)
    throw Error(ErrorKind::carrier_too_large,
                "the exception set has " + std::to_string(packets_.size()) +
                    " elements, above the limit of " + std::to_string(limits.max_carrier));

  for (const auto& op : theory.ops) {
    Denotation d = blank(op.source, op.target, size(op.source), size(op.target), n_exc());
    if (op.deco != Decoration::modifier) propagate(d);
    for (const auto& row : op.rows) {
      const std::string where = "operation '" + op.name + "' row '" + to_string(row.input) + "'";
      std::uint32_t in = encode(op.source, row.input);
      std::uint32_t out = encode(op.target, row.output);
      if (in >= d.n_source && op.deco != Decoration::modifier)
        throw Error(ErrorKind::decoration_mismatch,
                    where + ": only deco 2 operations list rows for exceptions");
      if (d.is_packet_out(out) && op.deco == Decoration::pure)
        throw Error(ErrorKind::decoration_mismatch, where + ": a pure operation cannot raise");
      if (d.table[in] != kUnset)
        throw Error(ErrorKind::duplicate_name, where + " is given twice");
      d.table[in] = out;
    }
    for (std::uint32_t i = 0; i < d.table.size(); ++i)
      if (d.table[i] == kUnset)
        throw Error(ErrorKind::incomplete_const_table,
                    "operation '" + op.name + "' has no row for " +
                        to_outcome_string(decode(op.source, i)));
    settle(d);
    consts_.emplace(op.name, std::move(d));
  }
}

std::uint32_t Environment::packet_offset(const std::string& name) const {
  auto it = offsets_.find(name);
  if (it == offsets_.end())
    throw Error(ErrorKind::undeclared_name, "undeclared exception name '" + name + "'");
  return it->second;
}

std::uint32_t Environment::size(const Type& t) const {
  return static_cast<std::uint32_t>(carriers_.size(t));
}

std::uint32_t Environment::encode(const Type& t, const Value& v) const {
  if (v.is(ValueKind::packet))
    return size(t) + packet_offset(v.name()) +
           static_cast<std::uint32_t>(carriers_.index_of(Type::effect(v.name()), v.inner()));
  return static_cast<std::uint32_t>(carriers_.index_of(t, v));
}

Value Environment::decode(const Type& t, std::uint32_t code) const {
  const auto& elems = carriers_.elements(t);
  if (code < elems.size()) return elems[code];
  return packets_.at(code - elems.size());
}

const Denotation& Environment::constant(const std::string& name) const {
  auto it = consts_.find(name);
  if (it == consts_.end())
    throw Error(ErrorKind::undeclared_name, "undeclared operation '" + name + "'");
  return it->second;
}

Denotation Environment::from_pure(const Type& a, const Type& b,
                                  const std::vector<std::uint32_t>& f0) const {
  Denotation d = blank(a, b, size(a), size(b), n_exc());
  for (std::uint32_t i = 0; i < d.n_source; ++i) d.table[i] = f0.at(i);
  propagate(d);
  settle(d);
  return d;
}

Denotation Environment::from_level1(const Type& a, const Type& b,
                                    const std::vector<std::uint32_t>& f1) const {
  Denotation d = blank(a, b, size(a), size(b), n_exc());
  for (std::uint32_t i = 0; i < d.n_source; ++i) d.table[i] = f1.at(i);
  propagate(d);
  settle(d);
  return d;
}

Denotation Environment::identity(const Type& a) const {
  std::vector<std::uint32_t> f(size(a));
  for (std::uint32_t i = 0; i < f.size(); ++i) f[i] = i;
  return from_pure(a, a, f);
}

Denotation lift(Decoration from, Decoration to, const Denotation& den) {
  if (from > to)
    throw Error(ErrorKind::illegal_lift, "cannot lift from level " + std::to_string(level(from)) +
                                             " down to level " + std::to_string(level(to)));
  if (den.min_deco > from)
    throw Error(ErrorKind::illegal_lift, "denotation of level " +
                                             std::to_string(level(den.min_deco)) +
                                             " is not a level-" + std::to_string(level(from)) +
                                             " morphism");
  if (from == Decoration::modifier) return den;
  // Keep the ordinary part (A -> B for pure, A -> B+E for propagators); the
  // packet part is forced to the identity by the lift.
  Denotation out = blank(den.source, den.target, den.n_source, den.n_target, den.n_exc);
  for (std::uint32_t i = 0; i < den.n_source; ++i) out.table[i] = den.table[i];
  propagate(out);
  settle(out);
  return out;
}

Denotation compose(const Denotation& outer, const Denotation& inner) {
  if (inner.target != outer.source)
    throw Error(ErrorKind::type_mismatch, "cannot compose " + to_string(outer.source) +
                                              " with " + to_string(inner.target));
  Denotation d = blank(inner.source, outer.target, inner.n_source, outer.n_target, inner.n_exc);
  for (std::uint32_t i = 0; i < d.table.size(); ++i) d.table[i] = outer.table[inner.table[i]];
  settle(d);
  return d;
}

Denotation interp_left_pair(const Denotation& v, const Denotation& f, const Environment& env) {
  if (v.min_deco != Decoration::pure)
    throw Error(ErrorKind::decoration_mismatch, "left pair needs a pure first component");
  if (f.min_deco > Decoration::constructor)
    throw Error(ErrorKind::decoration_mismatch, "left pair needs a propagator second component");
  if (v.source != f.source)
    throw Error(ErrorKind::type_mismatch, "left pair components have different sources");
  const Type target = Type::prod(v.target, f.target);
  const std::uint32_t nb = env.size(target);
  std::vector<std::uint32_t> h(v.n_source);
  for (std::uint32_t a = 0; a < v.n_source; ++a) {
    const std::uint32_t b = f.table[a];
    h[a] = f.is_packet_out(b) ? nb + (b - f.n_target) : v.table[a] * f.n_target + b;
  }
  return env.from_level1(v.source, target, h);
}

Denotation interp_right_pair(const Denotation& f, const Denotation& v, const Environment& env) {
  if (v.min_deco != Decoration::pure)
    throw Error(ErrorKind::decoration_mismatch, "right pair needs a pure second component");
  if (f.min_deco > Decoration::constructor)
    throw Error(ErrorKind::decoration_mismatch, "right pair needs a propagator first component");
  if (v.source != f.source)
    throw Error(ErrorKind::type_mismatch, "right pair components have different sources");
  const Type target = Type::prod(f.target, v.target);
  const std::uint32_t nb = env.size(target);
  std::vector<std::uint32_t> h(v.n_source);
  for (std::uint32_t a = 0; a < v.n_source; ++a) {
    const std::uint32_t b = f.table[a];
    h[a] = f.is_packet_out(b) ? nb + (b - f.n_target) : b * v.n_target + v.table[a];
  }
  return env.from_level1(v.source, target, h);
}

namespace {
Denotation eval(const Term& t, const Environment& env, const Overrides* extra) {
  const std::uint32_t ne = env.n_exc();
  switch (t.kind()) {
    case TermKind::id: return env.identity(t.type());
    case TermKind::comp: return compose(eval(t.first(), env, extra), eval(t.second(), env, extra));
    case TermKind::prop_comp: {
      Denotation k = eval(t.first(), env, extra);
      Denotation f = eval(t.second(), env, extra);
      if (f.min_deco > Decoration::constructor)
        not_supported(t, "the inner factor of (.) must be a propagator");
      // k_2 . f_1 on ordinary inputs; incoming packets bypass k.
      Denotation kf = compose(k, f);
      kf.table.resize(kf.n_source);
      return env.from_level1(f.source, k.target, kf.table);
    }
    case TermKind::pair: {
      Denotation a = eval(t.first(), env, extra);
      Denotation b = eval(t.second(), env, extra);
      switch (t.pair_kind()) {
        case PairKind::left: return interp_left_pair(a, b, env);
        case PairKind::right: return interp_right_pair(a, b, env);
        case PairKind::symmetric: break;
      }
      if (a.min_deco != Decoration::pure || b.min_deco != Decoration::pure)
        not_supported(t, "a symmetric pair needs pure components");
      const Type target = Type::prod(a.target, b.target);
      std::vector<std::uint32_t> f(a.n_source);
      for (std::uint32_t i = 0; i < a.n_source; ++i) f[i] = a.table[i] * b.n_target + b.table[i];
      return env.from_pure(a.source, target, f);
    }
    case TermKind::proj: {
      const Type src = Type::prod(t.type(), t.type2());
      const std::uint32_t nr = env.size(t.type2());
      std::vector<std::uint32_t> f(env.size(src));
      for (std::uint32_t i = 0; i < f.size(); ++i) f[i] = t.index() == 1 ? i / nr : i % nr;
      return env.from_pure(src, t.index() == 1 ? t.type() : t.type2(), f);
    }
    case TermKind::final:
      return env.from_pure(t.type(), Type::unit(),
                           std::vector<std::uint32_t>(env.size(t.type()), 0));
    case TermKind::copr: {
      const Type tgt = Type::sum(t.type(), t.type2());
      const std::uint32_t nl = env.size(t.type());
      const Type& src = t.index() == 1 ? t.type() : t.type2();
      std::vector<std::uint32_t> f(env.size(src));
      for (std::uint32_t i = 0; i < f.size(); ++i) f[i] = t.index() == 1 ? i : nl + i;
      return env.from_pure(src, tgt, f);
    }
    case TermKind::initial: return env.from_pure(Type::empty(), t.type(), {});
    case TermKind::copair: {
      Denotation f = eval(t.first(), env, extra);
      Denotation g = eval(t.second(), env, extra);
      const Type src = Type::sum(f.source, g.source);
      Denotation d = blank(src, f.target, f.n_source + g.n_source, f.n_target, ne);
      const PairKind k = t.pair_kind();
      if (k == PairKind::symmetric &&
          (f.min_deco > Decoration::constructor || g.min_deco > Decoration::constructor))
        not_supported(t, "a symmetric copair needs propagators");
      if (k == PairKind::left && f.min_deco > Decoration::constructor)
        not_supported(t, "a left copair needs a propagator on the left");
      if (k == PairKind::right && g.min_deco > Decoration::constructor)
        not_supported(t, "a right copair needs a propagator on the right");
      for (std::uint32_t i = 0; i < f.n_source; ++i) d.table[i] = f.table[i];
      for (std::uint32_t i = 0; i < g.n_source; ++i) d.table[f.n_source + i] = g.table[i];
      // Packets go to the catcher leg; for propagator legs both agree.
      const Denotation& catcher = k == PairKind::right ? f : g;
      for (std::uint32_t p = 0; p < ne; ++p)
        d.table[d.n_source + p] = catcher.table[catcher.n_source + p];
      settle(d);
      return d;
    }
    case TermKind::tag: {
      const Type src = Type::effect(t.name());
      const std::uint32_t off = env.packet_offset(t.name());
      std::vector<std::uint32_t> f(env.size(src));
      for (std::uint32_t i = 0; i < f.size(); ++i) f[i] = off + i;  // |0| = 0
      return env.from_level1(src, Type::empty(), f);
    }
    case TermKind::untag: {
      const Type tgt = Type::effect(t.name());
      const std::uint32_t off = env.packet_offset(t.name());
      const std::uint32_t n = env.size(tgt);
      Denotation d = blank(Type::empty(), tgt, 0, n, ne);
      for (std::uint32_t p = 0; p < ne; ++p) d.table[p] = (p >= off && p < off + n) ? p - off : n + p;
      settle(d);
      return d;
    }
    case TermKind::untag_all: {
      Denotation d = blank(Type::empty(), Type::unit(), 0, 1, ne);
      for (std::uint32_t p = 0; p < ne; ++p) d.table[p] = 0;
      settle(d);
      return d;
    }
    case TermKind::constant: {
      if (extra) {
        auto it = extra->find(t.name());
        if (it != extra->end()) return it->second;
      }
      return env.constant(t.name());
    }
    case TermKind::lookup:
    case TermKind::update: not_supported(t, "state operations have no exception semantics");
    case TermKind::meta: not_supported(t, "metavariables have no semantics");
  }
  not_supported(t, "unknown construction");
}
}  // namespace

Denotation eval(const Term& t, const Environment& env) { return eval(t, env, nullptr); }

Denotation eval(const Term& t, const Environment& env, const Overrides& extra) {
  return eval(t, env, &extra);
}

Verdict decide(const Denotation& lhs, const Denotation& rhs, Strength s, const Environment& env) {
  if (lhs.source != rhs.source || lhs.target != rhs.target)
    throw Error(ErrorKind::type_mismatch, "equation sides have different types");
  if (s == Strength::order) {
    if (rhs.min_deco != Decoration::pure)
      throw Error(ErrorKind::decoration_mismatch, "the right side of '<<' must be pure");
    if (lhs.min_deco > Decoration::constructor)
      throw Error(ErrorKind::decoration_mismatch, "the left side of '<<' must be a propagator");
  }
  const std::uint32_t n = s == Strength::strong ? lhs.n_source + lhs.n_exc : lhs.n_source;
  Verdict v;
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t l = lhs.table[i];
    const std::uint32_t r = rhs.table[i];
    if (l == r) continue;
    if (s == Strength::order && lhs.is_packet_out(l)) continue;
    Counterexample c;
    c.strength = s;
    c.input = env.decode(lhs.source, i);
    c.lhs = env.decode(lhs.target, l);
    c.rhs = env.decode(rhs.target, r);
    v.add(std::move(c));
  }
  return v;
}

Verdict decide(const Equation& eq, const Environment& env) {
  return decide(eval(eq.lhs, env), eval(eq.rhs, env), eq.strength, env);
}

Decomposition decompose(const Denotation& f) {
  if (f.min_deco > Decoration::constructor)
    throw Error(ErrorKind::not_a_propagator, "only propagators have a domain of definition");
  Decomposition d;
  for (std::uint32_t a = 0; a < f.n_source; ++a) {
    const std::uint32_t b = f.table[a];
    if (f.is_packet_out(b)) {
      d.exceptional.push_back(a);
      d.abrupt[a] = b - f.n_target;
    } else {
      d.defined.push_back(a);
      d.normal[a] = b;
    }
  }
  return d;
}

bool geq(const Denotation& v, const Denotation& f) {
  if (v.min_deco != Decoration::pure)
    throw Error(ErrorKind::decoration_mismatch, "the larger side of the order must be pure");
  if (f.min_deco > Decoration::constructor)
    throw Error(ErrorKind::decoration_mismatch, "the smaller side of the order must propagate");
  if (v.source != f.source || v.target != f.target)
    throw Error(ErrorKind::type_mismatch, "ordered terms have different types");
  Decomposition d = decompose(f);
  for (const auto& [a, b] : d.normal)
    if (v.table[a] != b) return false;
  return true;
}

}  // namespace deckit::exc
