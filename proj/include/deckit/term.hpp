#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "deckit/types.hpp"

namespace deckit {

/// Effect level of a term: 0 pure, 1 constructor (a propagator for
/// exceptions, an accessor for states), 2 modifier (a catcher for exceptions).
enum class Decoration : std::uint8_t { pure = 0, constructor = 1, modifier = 2 };

constexpr int level(Decoration d) { return static_cast<int>(d); }
constexpr Decoration decoration_of(int lvl) { return static_cast<Decoration>(lvl); }
constexpr Decoration max(Decoration a, Decoration b) { return a < b ? b : a; }
constexpr Decoration min(Decoration a, Decoration b) { return a < b ? a : b; }

enum class PairKind { symmetric, left, right };

enum class TermKind {
  id,
  comp,       // outer . inner
  prop_comp,  // outer (.) inner
  pair,
  proj,
  final,
  copair,
  copr,
  initial,
  tag,
  untag,
  untag_all,
  lookup,
  update,
  constant,
  meta,
};

/// Decorated point-free term. Immutable and shared; equality is structural.
///
/// Field use by kind:
///   id, final, initial     type()
///   proj, copr             index(), type() = left, type2() = right
///   comp, prop_comp        first() = outer, second() = inner
///   pair, copair           pair_kind(), first(), second()
///   tag .. update          name() (exception or location)
///   constant, meta         name()
class Term {
 public:
  static Term id(Type t);
  static Term comp(Term outer, Term inner);
  static Term prop_comp(Term outer, Term inner);
  static Term pair(PairKind kind, Term first, Term second);
  static Term proj(int index, Type left, Type right);
  static Term final(Type t);
  static Term copair(PairKind kind, Term first, Term second);
  static Term copr(int index, Type left, Type right);
  static Term initial(Type t);
  static Term tag(std::string name);
  static Term untag(std::string name);
  static Term untag_all();
  static Term lookup(std::string name);
  static Term update(std::string name);
  static Term constant(std::string name);
  static Term meta(std::string name);

  TermKind kind() const;
  PairKind pair_kind() const;
  int index() const;
  const std::string& name() const;
  const Type& type() const;
  const Type& type2() const;
  const Term& first() const;
  const Term& second() const;

  bool is(TermKind k) const { return kind() == k; }
  bool has_children() const;
  bool has_meta() const;
  std::size_t size() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node;
  static Term named(TermKind kind, std::string name);
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  TermKind kind = TermKind::id;
  PairKind pair_kind = PairKind::symmetric;
  int index = 0;
  std::string name;
  std::unique_ptr<Type> type;
  std::unique_ptr<Type> type2;
  std::unique_ptr<Term> first;
  std::unique_ptr<Term> second;
};

/// `order` is the relation lhs << rhs between a propagator (lhs) and a pure
/// term (rhs): they agree wherever the propagator terminates normally.
enum class Strength { strong, weak, order };

const char* to_string(Strength s);

struct Equation {
  Term lhs;
  Term rhs;
  Strength strength = Strength::strong;

  friend bool operator==(const Equation& a, const Equation& b) {
    return a.strength == b.strength && a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

}  // namespace deckit
