#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deckit/profile.hpp"
#include "deckit/term.hpp"
#include "deckit/types.hpp"
#include "deckit/value.hpp"

namespace deckit {

enum class TheoryKind { none, exceptions, states };

struct BaseTypeDecl {
  std::string name;
  std::vector<std::string> atoms;
};

/// An exception name or a location together with its parameter type V_T.
/// The carrier is either an explicit atom list or an existing type.
struct EffectDecl {
  std::string name;
  std::vector<std::string> atoms;
  std::optional<Type> payload;
};

/// One row of a declared operation's table.
///
/// Exceptions: `input` and `output` may be packets (level-2 rows).
/// States: level 1 rows carry `input_state`, level 2 rows both states.
struct OpRow {
  Value input;
  std::optional<StateVal> input_state;
  Value output;
  std::optional<StateVal> output_state;
};

struct OpDecl {
  std::string name;
  Type source = Type::unit();
  Type target = Type::unit();
  Decoration deco = Decoration::pure;
  std::vector<OpRow> rows;
  int line = 0;
};

struct AxiomDecl {
  std::string name;
  Equation eq;
  int line = 0;
};

struct CheckStmt {
  std::string name;
  Equation eq;
  bool expect_holds = true;
  int line = 0;
};

struct EvalStmt {
  Term term;
  Value input;
  std::optional<StateVal> state;
  int line = 0;
};

/// A signature, a logic profile and the statements to run against it.
struct Theory {
  std::string name;
  TheoryKind kind = TheoryKind::none;
  Logic logic = Logic::mon;
  std::vector<BaseTypeDecl> base_types;
  std::vector<EffectDecl> effects;
  std::vector<OpDecl> ops;
  std::vector<AxiomDecl> axioms;
  std::vector<CheckStmt> checks;
  std::vector<EvalStmt> evals;

  const LogicProfile& profile() const { return deckit::profile(logic); }

  const BaseTypeDecl* find_base(const std::string& name) const;
  const EffectDecl* find_effect(const std::string& name) const;
  const OpDecl* find_op(const std::string& name) const;
  const AxiomDecl* find_axiom(const std::string& name) const;
  /// Position of `name` among the effect declarations; throws UndeclaredName.
  std::size_t effect_index(const std::string& name) const;

  bool is_exception_side() const;
  bool is_state_side() const;
};

}  // namespace deckit
