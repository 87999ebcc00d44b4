#pragma once

#include <cstddef>
#include <memory>
#include <string>

namespace deckit {

enum class TypeKind { base, unit, empty, prod, sum, effect, meta };

/// Object-language type. Immutable, shared, compared structurally.
///
/// `effect` is the parameter type V_T of an exception name or a location.
/// `meta` only occurs in rule schemas; it never typechecks.
class Type {
 public:
  static Type base(std::string name);
  static Type unit();
  static Type empty();
  static Type prod(Type left, Type right);
  static Type sum(Type left, Type right);
  static Type effect(std::string name);
  static Type meta(std::string name);

  TypeKind kind() const;
  const std::string& name() const;
  const Type& left() const;
  const Type& right() const;

  bool is(TypeKind k) const { return kind() == k; }
  bool has_meta() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

  std::size_t hash() const;

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Type::Node {
  TypeKind kind;
  std::string name;
  std::unique_ptr<Type> left;
  std::unique_ptr<Type> right;
};

std::string to_string(const Type& t);

}  // namespace deckit
