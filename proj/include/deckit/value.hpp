#pragma once

#include <memory>
#include <string>
#include <vector>

namespace deckit {

enum class ValueKind { atom, unit, tuple, inl, inr, packet };

/// Element of a finite carrier. A packet is an exception value `exn T v`;
/// it only appears on the level-2 side of the exception model.
class Value {
 public:
  static Value atom(std::string name);
  static Value unit();
  static Value tuple(Value first, Value second);
  static Value inl(Value v);
  static Value inr(Value v);
  static Value packet(std::string exception, Value payload);

  ValueKind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const Value& first() const { return *node_->first; }
  const Value& second() const { return *node_->second; }
  /// Payload of inl/inr/packet.
  const Value& inner() const { return *node_->first; }

  bool is(ValueKind k) const { return kind() == k; }

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

 private:
  struct Node {
    ValueKind kind;
    std::string name;
    std::unique_ptr<Value> first;
    std::unique_ptr<Value> second;
  };
  explicit Value(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Contents of every declared location, in declaration order.
using StateVal = std::vector<Value>;

std::string to_string(const Value& v);

/// Level-2 input/output rendering: `ok v` or `exn T v`.
std::string to_outcome_string(const Value& v);

}  // namespace deckit
