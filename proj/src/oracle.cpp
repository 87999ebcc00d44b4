#include "deckit/oracle.hpp"

#include "deckit/calculus.hpp"
#include "deckit/error.hpp"
#include "deckit/model.hpp"
#include "deckit/pretty.hpp"

namespace deckit::oracle {

namespace {

bool raised(const Value& v) { return v.is(ValueKind::packet); }

[[noreturn]] void stuck(const Term& t, const std::string& why) {
  throw Error(ErrorKind::unsupported, "oracle: " + pretty(t) + ": " + why);
}

Value run_const(const Term& t, const Value& in, const Theory& theory) {
  const OpDecl* op = theory.find_op(t.name());
  if (!op) stuck(t, "undeclared operation");
  for (const auto& row : op->rows)
    if (row.input == in) return row.output;
  if (raised(in)) return in;
  stuck(t, "no row for " + to_outcome_string(in));
}

// Runs both components; the first one to raise decides the outcome.
Value run_pair(const Term& t, const Value& in, const Theory& theory) {
  const bool right_first = t.pair_kind() == PairKind::right;
  const Term& a = right_first ? t.second() : t.first();
  const Term& b = right_first ? t.first() : t.second();
  Value x = run(a, in, theory);
  if (raised(x)) return x;
  Value y = run(b, in, theory);
  if (raised(y)) return y;
  return right_first ? Value::tuple(y, x) : Value::tuple(x, y);
}

Value run_copair(const Term& t, const Value& in, const Theory& theory) {
  if (in.is(ValueKind::inl)) return run(t.first(), in.inner(), theory);
  if (in.is(ValueKind::inr)) return run(t.second(), in.inner(), theory);
  switch (t.pair_kind()) {
    case PairKind::symmetric: return in;
    case PairKind::left: return run(t.second(), in, theory);
    case PairKind::right: return run(t.first(), in, theory);
  }
  return in;
}

}  // namespace

Value run(const Term& t, const Value& in, const Theory& theory) {
  switch (t.kind()) {
    case TermKind::id: return in;
    case TermKind::comp: return run(t.first(), run(t.second(), in, theory), theory);
    case TermKind::prop_comp: {
      // Only packets that arrive from outside skip k.
      if (raised(in)) return in;
      return run(t.first(), run(t.second(), in, theory), theory);
    }
    case TermKind::constant: return run_const(t, in, theory);
    case TermKind::untag:
      if (raised(in) && in.name() == t.name()) return in.inner();
      return in;
    case TermKind::untag_all: return raised(in) ? Value::unit() : in;
    case TermKind::copair: return run_copair(t, in, theory);
    default: break;
  }
  // Everything else ignores packets.
  if (raised(in)) return in;
  switch (t.kind()) {
    case TermKind::final: return Value::unit();
    case TermKind::initial: stuck(t, "the empty type has no ordinary value");
    case TermKind::proj: return t.index() == 1 ? in.first() : in.second();
    case TermKind::copr: return t.index() == 1 ? Value::inl(in) : Value::inr(in);
    case TermKind::tag: return Value::packet(t.name(), in);
    case TermKind::pair: return run_pair(t, in, theory);
    default: stuck(t, "not an exception-side construction");
  }
}

Value run_try_catch(const TryCatchSpec& spec, const Value& in, const Theory& theory) {
  if (raised(in)) return in;
  Value y = run(spec.body, in, theory);
  if (!raised(y)) return y;
  for (const auto& h : spec.handlers) {
    if (!h.name) return run(h.body, Value::unit(), theory);
    if (*h.name == y.name()) return run(h.body, y.inner(), theory);
  }
  if (spec.catch_all) return run(*spec.catch_all, Value::unit(), theory);
  return y;
}

std::vector<Mismatch> compare_try_catch(const TryCatchSpec& spec, const Theory& theory) {
  Term elaborated = elaborate_try_catch(spec, theory);
  Typing ty = typecheck(elaborated, theory);
  exc::Environment env(theory);
  exc::Denotation d = exc::eval(elaborated, env);
  std::vector<Mismatch> out;
  std::vector<Value> inputs = env.carriers().elements(ty.source);
  inputs.insert(inputs.end(), env.packets().begin(), env.packets().end());
  for (const auto& x : inputs) {
    Value e = env.decode(ty.target, d.table.at(env.encode(ty.source, x)));
    Value o = run_try_catch(spec, x, theory);
    if (!(e == o)) out.push_back({x, e, o});
  }
  return out;
}

}  // namespace deckit::oracle
