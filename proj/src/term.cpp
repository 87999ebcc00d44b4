#include "deckit/term.hpp"

namespace deckit {

Term Term::id(Type t) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::id;
  n->type = std::make_unique<Type>(std::move(t));
  return Term(std::move(n));
}

Term Term::comp(Term outer, Term inner) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::comp;
  n->first = std::make_unique<Term>(std::move(outer));
  n->second = std::make_unique<Term>(std::move(inner));
  return Term(std::move(n));
}

Term Term::prop_comp(Term outer, Term inner) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::prop_comp;
  n->first = std::make_unique<Term>(std::move(outer));
  n->second = std::make_unique<Term>(std::move(inner));
  return Term(std::move(n));
}

Term Term::pair(PairKind kind, Term first, Term second) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::pair;
  n->pair_kind = kind;
  n->first = std::make_unique<Term>(std::move(first));
  n->second = std::make_unique<Term>(std::move(second));
  return Term(std::move(n));
}

Term Term::proj(int index, Type left, Type right) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::proj;
  n->index = index;
  n->type = std::make_unique<Type>(std::move(left));
  n->type2 = std::make_unique<Type>(std::move(right));
  return Term(std::move(n));
}

Term Term::final(Type t) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::final;
  n->type = std::make_unique<Type>(std::move(t));
  return Term(std::move(n));
}

Term Term::copair(PairKind kind, Term first, Term second) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::copair;
  n->pair_kind = kind;
  n->first = std::make_unique<Term>(std::move(first));
  n->second = std::make_unique<Term>(std::move(second));
  return Term(std::move(n));
}

Term Term::copr(int index, Type left, Type right) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::copr;
  n->index = index;
  n->type = std::make_unique<Type>(std::move(left));
  n->type2 = std::make_unique<Type>(std::move(right));
  return Term(std::move(n));
}

Term Term::initial(Type t) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::initial;
  n->type = std::make_unique<Type>(std::move(t));
  return Term(std::move(n));
}

Term Term::named(TermKind kind, std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::tag(std::string name) {
  return named(TermKind::tag, std::move(name));
}
Term Term::untag(std::string name) {
  return named(TermKind::untag, std::move(name));
}
Term Term::untag_all() {
  static const Term t = named(TermKind::untag_all, "");
  return t;
}
Term Term::lookup(std::string name) {
  return named(TermKind::lookup, std::move(name));
}
Term Term::update(std::string name) {
  return named(TermKind::update, std::move(name));
}
Term Term::constant(std::string name) {
  return named(TermKind::constant, std::move(name));
}
Term Term::meta(std::string name) {
  return named(TermKind::meta, std::move(name));
}

TermKind Term::kind() const { return node_->kind; }
PairKind Term::pair_kind() const { return node_->pair_kind; }
int Term::index() const { return node_->index; }
const std::string& Term::name() const { return node_->name; }
const Type& Term::type() const { return *node_->type; }
const Type& Term::type2() const { return *node_->type2; }
const Term& Term::first() const { return *node_->first; }
const Term& Term::second() const { return *node_->second; }

bool Term::has_children() const {
  switch (kind()) {
    case TermKind::comp:
    case TermKind::prop_comp:
    case TermKind::pair:
    case TermKind::copair: return true;
    default: return false;
  }
}

bool Term::has_meta() const {
  switch (kind()) {
    case TermKind::meta: return true;
    case TermKind::id:
    case TermKind::final:
    case TermKind::initial: return type().has_meta();
    case TermKind::proj:
    case TermKind::copr: return type().has_meta() || type2().has_meta();
    case TermKind::tag:
    case TermKind::untag:
    case TermKind::lookup:
    case TermKind::update: return !name().empty() && name()[0] == '?';
    case TermKind::untag_all:
    case TermKind::constant: return false;
    default: return first().has_meta() || second().has_meta();
  }
}

std::size_t Term::size() const {
  if (has_children()) return 1 + first().size() + second().size();
  return 1;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::id:
    case TermKind::final:
    case TermKind::initial: return a.type() == b.type();
    case TermKind::proj:
    case TermKind::copr:
      return a.index() == b.index() && a.type() == b.type() && a.type2() == b.type2();
    case TermKind::comp:
    case TermKind::prop_comp: return a.first() == b.first() && a.second() == b.second();
    case TermKind::pair:
    case TermKind::copair:
      return a.pair_kind() == b.pair_kind() && a.first() == b.first() &&
             a.second() == b.second();
    case TermKind::untag_all: return true;
    default: return a.name() == b.name();
  }
}

const char* to_string(Strength s) {
  switch (s) {
    case Strength::strong: return "strong";
    case Strength::weak: return "weak";
    case Strength::order: return "order";
  }
  return "?";
}

}  // namespace deckit
