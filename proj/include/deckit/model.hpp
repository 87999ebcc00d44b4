#pragma once

#include <memory>
#include <optional>
#include <string>

#include "deckit/derivation.hpp"
#include "deckit/exc_model.hpp"
#include "deckit/state_model.hpp"
#include "deckit/theory.hpp"
#include "deckit/verdict.hpp"

namespace deckit {

/// The finite model matching a theory's side: the exception monad for
/// monad-side and pure theories, the state comonad for comonad-side ones.
class Model {
 public:
  explicit Model(const Theory& theory, Limits limits = Limits::from_environment());

  const Theory& theory() const { return *theory_; }
  bool exception_side() const { return exc_ != nullptr; }
  const exc::Environment& exceptions() const { return *exc_; }
  const state::Environment& states() const { return *st_; }

  Verdict decide(const Equation& eq) const;
  /// Minimal decoration of the term's denotation (never above the inferred one).
  Decoration semantic_decoration(const Term& term) const;
  /// A term judgment holds when the denotation lives at the stated level.
  bool holds(const TermJudgment& j) const;
  bool holds(const Judgment& j) const;

  /// Output of `term` on one input, rendered: `ok v` / `exn T v` for
  /// exceptions, `(v, {X=..})` for states.
  std::string eval_point(const Term& term, const Value& input,
                         const std::optional<StateVal>& state) const;

 private:
  const Theory* theory_;
  std::unique_ptr<exc::Environment> exc_;
  std::unique_ptr<state::Environment> st_;
};

}  // namespace deckit
