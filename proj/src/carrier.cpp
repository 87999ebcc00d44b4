#include "deckit/carrier.hpp"

#include <cstdlib>

#include "deckit/error.hpp"

namespace deckit {

Limits Limits::from_environment() {
  Limits l;
  if (const char* env = std::getenv("DECKIT_MAX_CARRIER")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) l.max_carrier = static_cast<std::size_t>(v);
  }
  return l;
}

Carriers::Carriers(const Theory& theory, Limits limits) : theory_(&theory), limits_(limits) {}

namespace {

constexpr std::size_t kHuge = std::size_t{1} << 40;

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kHuge / a) return kHuge;
  return a * b;
}

}  // namespace

std::size_t Carriers::raw_size(const Type& t, int depth) const {
  if (depth > 64) throw Error(ErrorKind::unsupported, "carrier definitions are cyclic");
  switch (t.kind()) {
    case TypeKind::unit: return 1;
    case TypeKind::empty: return 0;
    case TypeKind::base: {
      const auto* b = theory_->find_base(t.name());
      if (!b) throw Error(ErrorKind::undeclared_name, "undeclared type '" + t.name() + "'");
      return b->atoms.size();
    }
    case TypeKind::effect: {
      const auto* e = theory_->find_effect(t.name());
      if (!e) throw Error(ErrorKind::undeclared_name, "undeclared effect name '" + t.name() + "'");
      return e->payload ? raw_size(*e->payload, depth + 1) : e->atoms.size();
    }
    case TypeKind::prod:
      return saturating_mul(raw_size(t.left(), depth + 1), raw_size(t.right(), depth + 1));
    case TypeKind::sum: return raw_size(t.left(), depth + 1) + raw_size(t.right(), depth + 1);
    case TypeKind::meta: break;
  }
  throw Error(ErrorKind::undeclared_name, "type metavariable '" + t.name() + "' has no carrier");
}

std::size_t Carriers::size(const Type& t) const {
  std::size_t n = raw_size(t, 0);
  if (n > limits_.max_carrier)
    throw Error(ErrorKind::carrier_too_large,
                "carrier of " + to_string(t) + " has " + std::to_string(n) +
                    " elements, above the limit of " + std::to_string(limits_.max_carrier));
  return n;
}

const Carriers::Entry& Carriers::entry(const Type& t) const {
  const std::string key = to_string(t);
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }
  size(t);
  auto e = std::make_unique<Entry>();
  switch (t.kind()) {
    case TypeKind::unit: e->values.push_back(Value::unit()); break;
    case TypeKind::empty: break;
    case TypeKind::base:
      for (const auto& a : theory_->find_base(t.name())->atoms) e->values.push_back(Value::atom(a));
      break;
    case TypeKind::effect: {
      const auto* decl = theory_->find_effect(t.name());
      if (decl->payload) {
        e->values = elements(*decl->payload);
      } else {
        for (const auto& a : decl->atoms) e->values.push_back(Value::atom(a));
      }
      break;
    }
    case TypeKind::prod:
      for (const auto& a : elements(t.left()))
        for (const auto& b : elements(t.right())) e->values.push_back(Value::tuple(a, b));
      break;
    case TypeKind::sum:
      for (const auto& a : elements(t.left())) e->values.push_back(Value::inl(a));
      for (const auto& b : elements(t.right())) e->values.push_back(Value::inr(b));
      break;
    case TypeKind::meta: break;
  }
  for (std::size_t i = 0; i < e->values.size(); ++i) e->index.emplace(to_string(e->values[i]), i);
  std::lock_guard lock(mutex_);
  auto [it, fresh] = cache_.emplace(key, std::move(e));
  return *it->second;
}

const std::vector<Value>& Carriers::elements(const Type& t) const { return entry(t).values; }

bool Carriers::contains(const Type& t, const Value& v) const {
  const Entry& e = entry(t);
  return e.index.count(to_string(v)) != 0;
}

std::size_t Carriers::index_of(const Type& t, const Value& v) const {
  const Entry& e = entry(t);
  auto it = e.index.find(to_string(v));
  if (it == e.index.end())
    throw Error(ErrorKind::type_mismatch,
                "value '" + to_string(v) + "' is not an element of " + to_string(t));
  return it->second;
}

const std::vector<Value>& Carriers::effect_elements(const std::string& name) const {
  return elements(Type::effect(name));
}

}  // namespace deckit
