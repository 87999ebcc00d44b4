#include "deckit/elaborate.hpp"

#include "deckit/calculus.hpp"
#include "deckit/error.hpp"
#include "deckit/pretty.hpp"

namespace deckit {

namespace {

void require_exception(const Theory& theory, const std::string& name) {
  if (theory.kind != TheoryKind::exceptions || !theory.find_effect(name))
    throw Error(ErrorKind::undeclared_name, "undeclared exception name '" + name + "'");
}

void require_typed(const Term& t, const Type& source, const Type& target, const Theory& theory,
                   const char* what) {
  Typing ty = typecheck(t, theory);
  if (ty.source != source || ty.target != target)
    throw Error(ErrorKind::type_mismatch,
                std::string(what) + " '" + pretty(t) + "' has type " + to_string(ty.source) +
                    " -> " + to_string(ty.target) + ", expected " + to_string(source) + " -> " +
                    to_string(target));
  if (infer_decoration(t, theory) > Decoration::constructor)
    throw Error(ErrorKind::decoration_mismatch,
                std::string(what) + " '" + pretty(t) + "' must be a propagator");
}

// untag[T] followed by the injection V_T -> V_T + 0.
Term opened(const std::string& name) {
  return Term::comp(Term::copr(1, Type::effect(name), Type::empty()), Term::untag(name));
}

}  // namespace

Term elaborate_throw(const Type& target, const std::string& name, const Theory& theory) {
  require_exception(theory, name);
  check_type(target, theory);
  return Term::comp(Term::initial(target), Term::tag(name));
}

Term elaborate_catch_core(const std::vector<Handler>& handlers, const Type& target,
                          const std::optional<Term>& catch_all, const Theory& theory) {
  std::vector<Handler> stages;
  bool closed = false;
  auto add = [&](const Handler& h) {
    if (h.name) {
      require_exception(theory, *h.name);
      require_typed(h.body, Type::effect(*h.name), target, theory, "handler");
    } else {
      require_typed(h.body, Type::unit(), target, theory, "catch-all handler");
    }
    if (!closed) stages.push_back(h);
    if (!h.name) closed = true;
  };
  for (const auto& h : handlers) add(h);
  if (catch_all) add(Handler{std::nullopt, *catch_all});
  if (stages.empty()) throw Error(ErrorKind::empty_handler_list, "catch block has no handlers");

  // Built from the last stage backwards.
  std::optional<Term> rest;
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    if (!it->name) {
      rest = Term::comp(it->body, Term::untag_all());
    } else if (!rest) {
      rest = Term::comp(Term::copair(PairKind::symmetric, it->body, Term::initial(target)),
                        opened(*it->name));
    } else {
      rest = Term::comp(Term::copair(PairKind::left, it->body, *rest), opened(*it->name));
    }
  }
  return *rest;
}

Term elaborate_try_catch(const TryCatchSpec& spec, const Theory& theory) {
  Typing body = typecheck(spec.body, theory);
  if (infer_decoration(spec.body, theory) > Decoration::constructor)
    throw Error(ErrorKind::decoration_mismatch,
                "try body '" + pretty(spec.body) + "' must be a propagator");
  const Type& b = body.target;
  Term handler = Term::copair(PairKind::left, Term::id(b),
                              elaborate_catch_core(spec.handlers, b, spec.catch_all, theory));
  return Term::prop_comp(handler, Term::comp(Term::copr(1, b, Type::empty()), spec.body));
}

Term elaborate_conditional(const Term& b, const Term& f, const Term& g) {
  return Term::comp(Term::copair(PairKind::symmetric, f, g), b);
}

Term elaborate_seq_pair(const Term& a1, const Term& a2, const Theory& theory) {
  Typing t1 = typecheck(a1, theory);
  Typing t2 = typecheck(a2, theory);
  if (t1.source != t2.source)
    throw Error(ErrorKind::type_mismatch, "sequential pair components have different sources: " +
                                              to_string(t1.source) + " vs " +
                                              to_string(t2.source));
  const Type& a = t1.source;
  Term second = Term::pair(PairKind::left, Term::proj(1, t1.target, a),
                           Term::comp(a2, Term::proj(2, t1.target, a)));
  return Term::comp(second, Term::pair(PairKind::right, a1, Term::id(a)));
}

}  // namespace deckit
