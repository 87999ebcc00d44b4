#include "doctest.h"

#include <cmath>

#include "deckit/enumerate.hpp"
#include "deckit/error.hpp"
#include "support.hpp"

using namespace deckit;

TEST_CASE("exception pairs and copairs exist and are unique") {
  for (const auto& r : {enumerate::exc_left_pair(), enumerate::exc_right_pair(),
                        enumerate::exc_copair()}) {
    INFO(enumerate::to_text(r));
    CHECK(r.ok());
    CHECK(r.instances == r.exhaustive_instances);
  }
}

TEST_CASE("state copair and pairs exist and are unique") {
  for (const auto& r : {enumerate::state_copair(), enumerate::state_left_pair(),
                        enumerate::state_right_pair()}) {
    INFO(enumerate::to_text(r));
    CHECK(r.ok());
    CHECK(r.exhaustive_instances > 0);
  }
}

TEST_CASE("a weak law alone leaves the packet cells free") {
  const Theory th = support::theory("demo");
  const exc::Environment env(th);
  const Type vt = Type::effect("T");
  const exc::Denotation id = env.identity(vt);
  std::vector<std::uint32_t> cells(id.table.size());
  for (std::uint32_t i = 0; i < cells.size(); ++i) cells[i] = i;
  const std::uint32_t outs = id.n_target + id.n_exc;
  const std::function<bool(const exc::Denotation&)> weak = [&](const exc::Denotation& h) {
    return exc::decide(h, id, Strength::weak, env).holds;
  };
  const std::function<bool(const exc::Denotation&)> strong = [&](const exc::Denotation& h) {
    return exc::decide(h, id, Strength::strong, env).holds;
  };
  const auto w = enumerate::count_candidates(id, cells, outs, weak, 1'000'000, &id);
  // ordinary cells fixed, each of the 4 packet cells free over 6 outputs
  CHECK(w.exhaustive);
  CHECK(w.satisfying == static_cast<std::uint64_t>(std::pow(outs, id.n_exc)));
  const auto s = enumerate::count_candidates(id, cells, outs, strong, 1'000'000, &id);
  CHECK(s.satisfying == 1);
  // the factored count agrees with full enumeration
  const auto f = enumerate::count_candidates(id, cells, outs, weak, 10, &id);
  CHECK_FALSE(f.exhaustive);
  CHECK(f.satisfying == w.satisfying);
}

TEST_CASE("no copair of two catchers: untag and the lifted initial arrow") {
  const Theory th = support::theory("demo");
  const exc::Environment env(th);
  const auto f1 = exc::eval(Term::untag("T"), env);
  const auto f2 = exc::eval(Term::initial(Type::effect("T")), env);
  const auto r = enumerate::exc_copair_solutions(f1, f2, env, 1'000'000);
  CHECK(r.candidates > 0);
  CHECK(r.solutions == 0);
  CHECK(r.conflict);
  CHECK(r.first_demand != r.second_demand);
  CHECK_THROWS_AS(enumerate::exc_copair_solutions(f1, f2, env, 2), Error);
}
