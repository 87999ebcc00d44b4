#include "deckit/theory.hpp"

#include "deckit/error.hpp"

namespace deckit {

namespace {

template <typename Decl>
const Decl* find_named(const std::vector<Decl>& decls, const std::string& name) {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace

const BaseTypeDecl* Theory::find_base(const std::string& name) const {
  return find_named(base_types, name);
}
const EffectDecl* Theory::find_effect(const std::string& name) const {
  return find_named(effects, name);
}
const OpDecl* Theory::find_op(const std::string& name) const { return find_named(ops, name); }
const AxiomDecl* Theory::find_axiom(const std::string& name) const {
  return find_named(axioms, name);
}

std::size_t Theory::effect_index(const std::string& name) const {
  for (std::size_t i = 0; i < effects.size(); ++i)
    if (effects[i].name == name) return i;
  throw Error(ErrorKind::undeclared_name, "undeclared effect name '" + name + "'");
}

bool Theory::is_exception_side() const {
  return kind == TheoryKind::exceptions || (kind == TheoryKind::none && profile().side != Side::comonad);
}

bool Theory::is_state_side() const {
  return kind == TheoryKind::states || (kind == TheoryKind::none && profile().side == Side::comonad);
}

}  // namespace deckit
