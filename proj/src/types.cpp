#include "deckit/types.hpp"

#include <functional>

#include "deckit/error.hpp"

namespace deckit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::undeclared_name: return "UndeclaredName";
    case ErrorKind::type_mismatch: return "TypeMismatch";
    case ErrorKind::syntax_error: return "SyntaxError";
    case ErrorKind::duplicate_name: return "DuplicateName";
    case ErrorKind::unknown_profile: return "UnknownProfile";
    case ErrorKind::formation: return "FormationError";
    case ErrorKind::carrier_too_large: return "CarrierTooLarge";
    case ErrorKind::incomplete_const_table: return "IncompleteConstTable";
    case ErrorKind::illegal_lift: return "IllegalLift";
    case ErrorKind::not_a_propagator: return "NotAPropagator";
    case ErrorKind::decoration_mismatch: return "DecorationMismatch";
    case ErrorKind::empty_handler_list: return "EmptyHandlerList";
    case ErrorKind::unknown_rule: return "UnknownRule";
    case ErrorKind::unsupported: return "Unsupported";
  }
  return "Error";
}

Type Type::base(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TypeKind::base;
  n->name = std::move(name);
  return Type(std::move(n));
}

Type Type::unit() {
  static const Type u = [] {
    auto n = std::make_shared<Node>();
    n->kind = TypeKind::unit;
    return Type(std::move(n));
  }();
  return u;
}

Type Type::empty() {
  static const Type e = [] {
    auto n = std::make_shared<Node>();
    n->kind = TypeKind::empty;
    return Type(std::move(n));
  }();
  return e;
}

Type Type::prod(Type left, Type right) {
  auto n = std::make_shared<Node>();
  n->kind = TypeKind::prod;
  n->left = std::make_unique<Type>(std::move(left));
  n->right = std::make_unique<Type>(std::move(right));
  return Type(std::move(n));
}

Type Type::sum(Type left, Type right) {
  auto n = std::make_shared<Node>();
  n->kind = TypeKind::sum;
  n->left = std::make_unique<Type>(std::move(left));
  n->right = std::make_unique<Type>(std::move(right));
  return Type(std::move(n));
}

Type Type::effect(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TypeKind::effect;
  n->name = std::move(name);
  return Type(std::move(n));
}

Type Type::meta(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TypeKind::meta;
  n->name = std::move(name);
  return Type(std::move(n));
}

TypeKind Type::kind() const { return node_->kind; }
const std::string& Type::name() const { return node_->name; }
const Type& Type::left() const { return *node_->left; }
const Type& Type::right() const { return *node_->right; }

bool Type::has_meta() const {
  switch (kind()) {
    case TypeKind::meta: return true;
    case TypeKind::effect: return !name().empty() && name()[0] == '?';
    case TypeKind::prod:
    case TypeKind::sum: return left().has_meta() || right().has_meta();
    default: return false;
  }
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TypeKind::unit:
    case TypeKind::empty: return true;
    case TypeKind::base:
    case TypeKind::effect:
    case TypeKind::meta: return a.name() == b.name();
    case TypeKind::prod:
    case TypeKind::sum: return a.left() == b.left() && a.right() == b.right();
  }
  return false;
}

std::size_t Type::hash() const {
  std::size_t h = static_cast<std::size_t>(kind()) * 0x9e3779b97f4a7c15ULL;
  switch (kind()) {
    case TypeKind::base:
    case TypeKind::effect:
    case TypeKind::meta: h ^= std::hash<std::string>{}(name()) + (h << 6); break;
    case TypeKind::prod:
    case TypeKind::sum:
      h ^= left().hash() + 0x9e3779b9 + (h << 6) + (h >> 2);
      h ^= right().hash() + 0x7f4a7c15 + (h << 6) + (h >> 2);
      break;
    default: break;
  }
  return h;
}

namespace {

// Precedence: sum 1, product 2, atoms 3. Both binary forms associate left.
void print(std::string& out, const Type& t, int context) {
  switch (t.kind()) {
    case TypeKind::base:
    case TypeKind::meta: out += t.name(); return;
    case TypeKind::effect: out += "V_" + t.name(); return;
    case TypeKind::unit: out += "1"; return;
    case TypeKind::empty: out += "0"; return;
    case TypeKind::prod:
    case TypeKind::sum: {
      const int prec = t.is(TypeKind::sum) ? 1 : 2;
      const bool parens = prec < context;
      if (parens) out += "(";
      print(out, t.left(), prec);
      out += t.is(TypeKind::sum) ? " + " : " * ";
      print(out, t.right(), prec + 1);
      if (parens) out += ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Type& t) {
  std::string out;
  print(out, t, 0);
  return out;
}

}  // namespace deckit
