#include "deckit/derivation.hpp"

#include "deckit/pretty.hpp"

namespace deckit {

std::string to_string(const Judgment& j) {
  if (const auto* eq = std::get_if<Equation>(&j)) return pretty(*eq);
  const auto& tj = std::get<TermJudgment>(j);
  return pretty(tj.term) + " : " + to_string(tj.source) + " -> " + to_string(tj.target) +
         " deco " + std::to_string(level(tj.deco));
}

std::size_t Derivation::node_count() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.node_count();
  return n;
}

}  // namespace deckit
