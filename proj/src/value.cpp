#include "deckit/value.hpp"

namespace deckit {

Value Value::atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = ValueKind::atom;
  n->name = std::move(name);
  return Value(std::move(n));
}

Value Value::unit() {
  static const Value u = [] {
    auto n = std::make_shared<Node>();
    n->kind = ValueKind::unit;
    return Value(std::move(n));
  }();
  return u;
}

Value Value::tuple(Value first, Value second) {
  auto n = std::make_shared<Node>();
  n->kind = ValueKind::tuple;
  n->first = std::make_unique<Value>(std::move(first));
  n->second = std::make_unique<Value>(std::move(second));
  return Value(std::move(n));
}

Value Value::inl(Value v) {
  auto n = std::make_shared<Node>();
  n->kind = ValueKind::inl;
  n->first = std::make_unique<Value>(std::move(v));
  return Value(std::move(n));
}

Value Value::inr(Value v) {
  auto n = std::make_shared<Node>();
  n->kind = ValueKind::inr;
  n->first = std::make_unique<Value>(std::move(v));
  return Value(std::move(n));
}

Value Value::packet(std::string exception, Value payload) {
  auto n = std::make_shared<Node>();
  n->kind = ValueKind::packet;
  n->name = std::move(exception);
  n->first = std::make_unique<Value>(std::move(payload));
  return Value(std::move(n));
}

bool operator==(const Value& a, const Value& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ValueKind::atom: return a.name() == b.name();
    case ValueKind::unit: return true;
    case ValueKind::tuple: return a.first() == b.first() && a.second() == b.second();
    case ValueKind::inl:
    case ValueKind::inr: return a.inner() == b.inner();
    case ValueKind::packet: return a.name() == b.name() && a.inner() == b.inner();
  }
  return false;
}

namespace {

void print(std::string& out, const Value& v, bool nested) {
  switch (v.kind()) {
    case ValueKind::atom: out += v.name(); return;
    case ValueKind::unit: out += "()"; return;
    case ValueKind::tuple:
      out += "(";
      print(out, v.first(), false);
      out += ", ";
      print(out, v.second(), false);
      out += ")";
      return;
    case ValueKind::inl:
    case ValueKind::inr:
    case ValueKind::packet:
      if (nested) out += "(";
      if (v.is(ValueKind::packet)) {
        out += "exn " + v.name() + " ";
      } else {
        out += v.is(ValueKind::inl) ? "inl " : "inr ";
      }
      print(out, v.inner(), true);
      if (nested) out += ")";
      return;
  }
}

}  // namespace

std::string to_string(const Value& v) {
  std::string out;
  print(out, v, false);
  return out;
}

std::string to_outcome_string(const Value& v) {
  if (v.is(ValueKind::packet)) return to_string(v);
  std::string out = "ok ";
  print(out, v, true);
  return out;
}

}  // namespace deckit
