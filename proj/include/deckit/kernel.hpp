#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "deckit/derivation.hpp"
#include "deckit/profile.hpp"
#include "deckit/theory.hpp"

namespace deckit::kernel {

/// Decoration in a term-judgment schema: a literal, a variable `?d` or
/// `max(?d, ?e)`.
struct DecoExpr {
  enum class Kind { literal, var, max };
  Kind kind = Kind::literal;
  Decoration lit = Decoration::pure;
  std::string a;
  std::string b;
};

struct TermSchema {
  Term term;
  Type source;
  Type target;
  DecoExpr deco;
};

using Schema = std::variant<Equation, TermSchema>;

struct SideCondition {
  enum class Kind {
    term_deco_at_most,  // inferred decoration of term meta `a` <= bound
    deco_var_at_most,   // decoration variable `a` <= bound
    names_distinct,     // name metas `a` and `b` differ
    declared_const,     // term meta `a` is an operation declared at `b`
  };
  Kind kind;
  std::string a;
  std::string b;
  Decoration bound = Decoration::pure;
};

/// One shape of a rule. Rules with several conclusions (pair, copair, ...)
/// have one form per conclusion.
struct RuleForm {
  std::vector<Schema> premises;
  Schema conclusion;
  std::vector<SideCondition> conditions;
  /// Premise repeated once per declared effect name, in declaration order,
  /// with the name metavariable `family_var` bound to that name.
  std::optional<Schema> family;
  std::string family_var;
};

struct RuleDescriptor {
  std::string name;
  std::vector<RuleForm> forms;
};

/// Values of schema metavariables.
struct Bindings {
  std::map<std::string, Term> terms;
  std::map<std::string, Type> types;
  std::map<std::string, std::string> names;
  std::map<std::string, Decoration> decos;
};

const std::vector<RuleDescriptor>& rule_catalog(Logic logic);
const RuleDescriptor* find_rule(Logic logic, const std::string& name);

/// Human-readable listing of one rule, one line per form.
std::vector<std::string> describe(const RuleDescriptor& rule);
std::string to_string(const Schema& s);

/// Syntactic matching; extends `b` and returns false on a clash.
bool match(const Term& schema, const Term& concrete, Bindings& b);
bool match(const Type& schema, const Type& concrete, Bindings& b);

/// Replaces every metavariable; throws UnknownRule-free Error(unsupported)
/// when one is unbound.
Term substitute(const Term& schema, const Bindings& b);
Type substitute(const Type& schema, const Bindings& b);
Judgment substitute(const Schema& schema, const Bindings& b);

/// Every metavariable of a form, by sort.
struct MetaSet {
  std::vector<std::string> terms;
  std::vector<std::string> types;
  std::vector<std::string> names;
  std::vector<std::string> decos;
};
MetaSet metas(const RuleForm& form);

/// The first violated side condition of a fully bound form, as a reason.
std::optional<std::string> violated_condition(const std::string& rule, const RuleForm& form,
                                              const Bindings& b, const Theory& theory);

/// A judgment is valid when it has no metavariables, typechecks with the
/// stated types and is formation-valid in the theory's profile.
std::optional<std::string> invalid_judgment(const Judgment& j, const Theory& theory);

/// Rule names of the form `ax:<name>` refer to the theory's own axioms.
inline constexpr const char* kAxiomPrefix = "ax:";

struct Verdict {
  bool accepted = true;
  std::vector<int> path;  // premise indices from the root
  std::string rule;
  std::string reason;
};

std::string path_string(const std::vector<int>& path);

Verdict check_derivation(const Derivation& d, const Theory& theory);

}  // namespace deckit::kernel
