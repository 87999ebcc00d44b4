#include "deckit/enumerate.hpp"

#include <limits>
#include <optional>
#include <random>

#include "deckit/error.hpp"

namespace deckit::enumerate {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t power_sat(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = mul_sat(r, base);
  return r;
}

}  // namespace

template <class Den>
Count count_candidates(const Den& base, const std::vector<std::uint32_t>& free_cells,
                       std::uint32_t n_outputs, const std::function<bool(const Den&)>& laws,
                       std::uint64_t limit, const Den* reference) {
  Count c;
  const std::uint64_t space = power_sat(n_outputs, free_cells.size());
  if (space <= limit) {
    c.exhaustive = true;
    Den cand = base;
    std::vector<std::uint32_t> digit(free_cells.size(), 0);
    for (auto cell : free_cells) cand.table[cell] = 0;
    while (true) {
      settle(cand);
      if (laws(cand)) ++c.satisfying;
      std::size_t k = 0;
      while (k < digit.size() && ++digit[k] == n_outputs) {
        digit[k] = 0;
        cand.table[free_cells[k]] = 0;
        ++k;
      }
      if (k == digit.size()) break;
      cand.table[free_cells[k]] = digit[k];
    }
    return c;
  }
  if (!reference || !laws(*reference)) return c;
  c.satisfying = 1;
  for (auto cell : free_cells) {
    std::uint64_t ok = 0;
    Den cand = *reference;
    for (std::uint32_t o = 0; o < n_outputs; ++o) {
      cand.table[cell] = o;
      settle(cand);
      if (laws(cand)) ++ok;
    }
    c.satisfying = mul_sat(c.satisfying, ok);
  }
  return c;
}

template Count count_candidates<exc::Denotation>(
    const exc::Denotation&, const std::vector<std::uint32_t>&, std::uint32_t,
    const std::function<bool(const exc::Denotation&)>&, std::uint64_t, const exc::Denotation*);
template Count count_candidates<state::Denotation>(
    const state::Denotation&, const std::vector<std::uint32_t>&, std::uint32_t,
    const std::function<bool(const state::Denotation&)>&, std::uint64_t,
    const state::Denotation*);

namespace {

Type sized(int n) { return Type::base("C" + std::to_string(n)); }

// One base type per size 1..max, plus one effect name of size `effect_size`.
Theory fixture(TheoryKind kind, int max_size, int effect_size) {
  Theory th;
  th.name = "Enumeration";
  th.kind = kind;
  th.logic = kind == TheoryKind::states ? Logic::st_plus : Logic::exc_plus;
  for (int n = 1; n <= max_size; ++n) {
    BaseTypeDecl b{"C" + std::to_string(n), {}};
    for (int i = 0; i < n; ++i) b.atoms.push_back("c" + std::to_string(i));
    th.base_types.push_back(std::move(b));
  }
  if (effect_size > 0) {
    EffectDecl e{kind == TheoryKind::states ? "L" : "T", {}, std::nullopt};
    for (int i = 0; i < effect_size; ++i) e.atoms.push_back("s" + std::to_string(i));
    th.effects.push_back(std::move(e));
  }
  return th;
}

// Visits `count` tables of length `cells` over [0, outputs): all of them when
// the space is small enough, otherwise a seeded sample.
void tables(std::uint32_t cells, std::uint32_t outputs, std::size_t count, std::mt19937_64& rng,
            const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  std::vector<std::uint32_t> t(cells, 0);
  if (power_sat(outputs, cells) <= count) {
    while (true) {
      visit(t);
      std::size_t k = 0;
      while (k < cells && ++t[k] == outputs) t[k++] = 0;
      if (k == cells) return;
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& x : t) x = static_cast<std::uint32_t>(rng() % outputs);
    visit(t);
  }
}

void note(Report& r, const std::string& what) {
  if (r.problems.size() < 5) r.problems.push_back(what);
}

void record(Report& r, bool laws_hold, const Count& c, const std::string& where) {
  ++r.instances;
  if (c.exhaustive) ++r.exhaustive_instances;
  if (!laws_hold) {
    ++r.law_failures;
    note(r, where + ": the construction misses a law");
  }
  if (c.satisfying != 1) {
    ++r.uniqueness_failures;
    note(r, where + ": " + std::to_string(c.satisfying) + " candidates satisfy the laws");
  }
}

std::string config(std::initializer_list<std::pair<const char*, std::uint32_t>> sizes) {
  std::string s;
  for (const auto& [k, v] : sizes) s += (s.empty() ? "" : " ") + std::string(k) + "=" + std::to_string(v);
  return s;
}

std::vector<std::uint32_t> all_cells(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  for (std::uint32_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// ---- states ----------------------------------------------------------------

state::Denotation modifier(const state::Environment& env, const Type& a, const Type& b,
                           const std::vector<std::uint32_t>& table) {
  state::Denotation d;
  d.source = a;
  d.target = b;
  d.n_source = env.size(a);
  d.n_target = env.size(b);
  d.n_states = env.n_states();
  d.table = table;
  state::settle(d);
  return d;
}

// Accessor from a value table indexed by a * |S| + s.
state::Denotation accessor(const state::Environment& env, const Type& a, const Type& b,
                           const std::vector<std::uint32_t>& values) {
  return env.from_level1(a, b, values);
}

bool strong(const state::Denotation& l, const state::Denotation& r, const state::Environment& env) {
  return state::decide(l, r, Strength::strong, env).holds;
}
bool weak(const state::Denotation& l, const state::Denotation& r, const state::Environment& env) {
  return state::decide(l, r, Strength::weak, env).holds;
}

template <class F>
void for_state_sizes(F&& body) {
  for (int ns = 1; ns <= 4; ++ns) {
    Theory th = fixture(TheoryKind::states, 3, ns);
    state::Environment env(th);
    body(th, env, ns);
  }
}

}  // namespace

Report state_copair(const Budget& budget) {
  Report r;
  r.name = "state copair of modifiers";
  std::mt19937_64 rng(budget.seed);
  for_state_sizes([&](const Theory&, const state::Environment& env, int ns) {
    for (int a1 = 1; a1 <= 3; ++a1)
      for (int a2 = 1; a2 <= 3; ++a2)
        for (int b = 1; b <= 3; ++b) {
          ++r.configurations;
          const Type A1 = sized(a1), A2 = sized(a2), B = sized(b);
          const state::Denotation in1 = state::eval(Term::copr(1, A1, A2), env);
          const state::Denotation in2 = state::eval(Term::copr(2, A1, A2), env);
          const std::uint32_t outs = b * ns;
          const std::size_t per = budget.max_pairs;
          tables(a1 * ns, outs, per, rng, [&](const std::vector<std::uint32_t>& t1) {
            // One partner per first component keeps the pair count bounded.
            std::vector<std::uint32_t> t2(a2 * ns);
            for (auto& x : t2) x = static_cast<std::uint32_t>(rng() % outs);
            const auto f1 = modifier(env, A1, B, t1);
            const auto f2 = modifier(env, A2, B, t2);
            const state::Overrides ov{{"f1", f1}, {"f2", f2}};
            const auto h = state::eval(
                Term::copair(PairKind::symmetric, Term::constant("f1"), Term::constant("f2")), env, ov);
            auto laws = [&](const state::Denotation& g) {
              return strong(state::compose(g, in1), f1, env) && strong(state::compose(g, in2), f2, env);
            };
            Count c = count_candidates<state::Denotation>(
                h, all_cells(h.table.size()), outs, laws, budget.exhaustive_limit, &h);
            record(r, laws(h), c, config({{"A1", a1}, {"A2", a2}, {"B", b}, {"S", ns}}));
          });
        }
  });
  return r;
}

namespace {

Report state_pair(bool left, const Budget& budget) {
  Report r;
  r.name = left ? "state left pair" : "state right pair";
  std::mt19937_64 rng(budget.seed + (left ? 0 : 1));
  for_state_sizes([&](const Theory&, const state::Environment& env, int ns) {
    for (int a = 1; a <= 3; ++a)
      for (int b1 = 1; b1 <= 3; ++b1)
        for (int b2 = 1; b2 <= 3; ++b2) {
          ++r.configurations;
          const Type A = sized(a), B1 = sized(b1), B2 = sized(b2), P = Type::prod(B1, B2);
          const state::Denotation pr1 = state::eval(Term::proj(1, B1, B2), env);
          const state::Denotation pr2 = state::eval(Term::proj(2, B1, B2), env);
          // The accessor sits on the side named by `left`.
          const int acc_size = left ? b1 : b2;
          const int mod_size = left ? b2 : b1;
          tables(a * ns, acc_size, budget.max_pairs, rng, [&](const std::vector<std::uint32_t>& ta) {
            std::vector<std::uint32_t> tm(a * ns);
            for (auto& x : tm) x = static_cast<std::uint32_t>(rng() % (mod_size * ns));
            const auto acc = accessor(env, A, left ? B1 : B2, ta);
            const auto mod = modifier(env, A, left ? B2 : B1, tm);
            const auto h = left ? state::interp_left_pair(acc, mod, env)
                                : state::interp_right_pair(mod, acc, env);
            auto laws = [&](const state::Denotation& g) {
              if (left)
                return weak(state::compose(pr1, g), acc, env) && strong(state::compose(pr2, g), mod, env);
              return strong(state::compose(pr1, g), mod, env) && weak(state::compose(pr2, g), acc, env);
            };
            Count c = count_candidates<state::Denotation>(
                h, all_cells(h.table.size()), static_cast<std::uint32_t>(env.size(P)) * ns, laws,
                budget.exhaustive_limit, &h);
            record(r, laws(h), c, config({{"A", a}, {"B1", b1}, {"B2", b2}, {"S", ns}}));
          });
        }
  });
  return r;
}

// ---- exceptions --------------------------------------------------------------

bool holds(const exc::Denotation& l, const exc::Denotation& r, Strength s,
            const exc::Environment& env) {
  return exc::decide(l, r, s, env).holds;
}

Report exc_pair(bool left, const Budget& budget) {
  Report r;
  r.name = left ? "exception left pair" : "exception right pair";
  std::mt19937_64 rng(budget.seed + (left ? 2 : 3));
  for (int ne = 1; ne <= 2; ++ne) {
    Theory th = fixture(TheoryKind::exceptions, 2, ne);
    exc::Environment env(th);
    for (int a = 1; a <= 2; ++a)
      for (int b1 = 1; b1 <= 2; ++b1)
        for (int b2 = 1; b2 <= 2; ++b2) {
          ++r.configurations;
          const Type A = sized(a), B1 = sized(b1), B2 = sized(b2), P = Type::prod(B1, B2);
          const exc::Denotation pr1 = exc::eval(Term::proj(1, B1, B2), env);
          const exc::Denotation pr2 = exc::eval(Term::proj(2, B1, B2), env);
          const Type VT = left ? B1 : B2;  // pure side
          const Type FT = left ? B2 : B1;  // propagator side
          const std::uint32_t nv = env.size(VT), nf = env.size(FT) + ne;
          // Every (pure, propagator) pair: the spaces are tiny.
          tables(a, nv, kSaturated, rng, [&](const std::vector<std::uint32_t>& tv) {
            tables(a, nf, kSaturated, rng, [&](const std::vector<std::uint32_t>& tf) {
              const auto v = env.from_pure(A, VT, tv);
              const auto f = env.from_level1(A, FT, tf);
              const auto h = left ? exc::interp_left_pair(v, f, env) : exc::interp_right_pair(f, v, env);
              auto laws = [&](const exc::Denotation& g) {
                if (g.min_deco > Decoration::constructor) return false;
                if (left)
                  return holds(exc::compose(pr1, g), v, Strength::order, env) &&
                         holds(exc::compose(pr2, g), f, Strength::strong, env);
                return holds(exc::compose(pr1, g), f, Strength::strong, env) &&
                       holds(exc::compose(pr2, g), v, Strength::order, env);
              };
              // Candidates: every propagator A -> B1 x B2, packets propagating.
              std::vector<std::uint32_t> cells(a);
              for (int i = 0; i < a; ++i) cells[i] = i;
              Count c = count_candidates<exc::Denotation>(
                  h, cells, env.size(P) + ne, laws, budget.exhaustive_limit, &h);
              record(r, laws(h), c, config({{"A", a}, {"B1", b1}, {"B2", b2}, {"E", ne}}));
            });
          });
        }
  }
  return r;
}

}  // namespace

Report state_left_pair(const Budget& b) { return state_pair(true, b); }
Report state_right_pair(const Budget& b) { return state_pair(false, b); }
Report exc_left_pair(const Budget& b) { return exc_pair(true, b); }
Report exc_right_pair(const Budget& b) { return exc_pair(false, b); }

Report exc_copair(const Budget& budget) {
  Report r;
  r.name = "exception copair of propagators";
  std::mt19937_64 rng(budget.seed + 4);
  for (int ne = 1; ne <= 2; ++ne) {
    Theory th = fixture(TheoryKind::exceptions, 2, ne);
    exc::Environment env(th);
    for (int a1 = 1; a1 <= 2; ++a1)
      for (int a2 = 1; a2 <= 2; ++a2)
        for (int b = 1; b <= 2; ++b) {
          ++r.configurations;
          const Type A1 = sized(a1), A2 = sized(a2), B = sized(b);
          const exc::Denotation in1 = exc::eval(Term::copr(1, A1, A2), env);
          const exc::Denotation in2 = exc::eval(Term::copr(2, A1, A2), env);
          const std::uint32_t outs = b + ne;
          tables(a1, outs, kSaturated, rng, [&](const std::vector<std::uint32_t>& t1) {
            tables(a2, outs, kSaturated, rng, [&](const std::vector<std::uint32_t>& t2) {
              const auto f1 = env.from_level1(A1, B, t1);
              const auto f2 = env.from_level1(A2, B, t2);
              const exc::Overrides ov{{"f1", f1}, {"f2", f2}};
              const auto h = exc::eval(
                  Term::copair(PairKind::symmetric, Term::constant("f1"), Term::constant("f2")), env, ov);
              auto laws = [&](const exc::Denotation& g) {
                return holds(exc::compose(g, in1), f1, Strength::strong, env) &&
                       holds(exc::compose(g, in2), f2, Strength::strong, env);
              };
              // Candidates: every level-2 table (A1 + A2) + E -> B + E.
              Count c = count_candidates<exc::Denotation>(
                  h, all_cells(h.table.size()), outs, laws, budget.exhaustive_limit, &h);
              record(r, laws(h), c, config({{"A1", a1}, {"A2", a2}, {"B", b}, {"E", ne}}));
            });
          });
        }
  }
  return r;
}

CopairSearch exc_copair_solutions(const exc::Denotation& f1, const exc::Denotation& f2,
                                  const exc::Environment& env, std::uint64_t limit) {
  if (f1.target != f2.target)
    throw Error(ErrorKind::type_mismatch, "copair components need a common target");
  const exc::Denotation in1 = exc::eval(Term::copr(1, f1.source, f2.source), env);
  const exc::Denotation in2 = exc::eval(Term::copr(2, f1.source, f2.source), env);
  const std::uint32_t cells = in1.n_target + env.n_exc();
  const std::uint32_t outs = f1.n_target + env.n_exc();

  CopairSearch s;
  s.candidates = power_sat(outs, cells);
  if (s.candidates > limit)
    throw Error(ErrorKind::carrier_too_large,
                "copair search space has " + std::to_string(s.candidates) + " candidates");

  // What each law demands of h, cell by cell.
  std::vector<std::optional<std::uint32_t>> demand(cells);
  auto require = [&](const exc::Denotation& in, const exc::Denotation& f) {
    for (std::uint32_t x = 0; x < in.table.size(); ++x) {
      auto& d = demand[in.table[x]];
      if (d && *d != f.table[x] && !s.conflict) {
        s.conflict = true;
        s.conflict_input = in.table[x];
        s.first_demand = *d;
        s.second_demand = f.table[x];
      }
      if (!d) d = f.table[x];
    }
  };
  require(in1, f1);
  require(in2, f2);

  exc::Denotation h;
  h.source = in1.target;
  h.target = f1.target;
  h.n_source = in1.n_target;
  h.n_target = f1.n_target;
  h.n_exc = env.n_exc();
  h.table.assign(cells, 0);
  auto laws = [&](const exc::Denotation& g) {
    return exc::decide(exc::compose(g, in1), f1, Strength::strong, env).holds &&
           exc::decide(exc::compose(g, in2), f2, Strength::strong, env).holds;
  };
  s.solutions = count_candidates<exc::Denotation>(h, all_cells(cells), outs, laws, limit, nullptr)
                    .satisfying;
  return s;
}

std::string to_text(const Report& r) {
  std::string s = r.name + ": " + std::to_string(r.instances) + " instances over " +
                  std::to_string(r.configurations) + " size configurations (" +
                  std::to_string(r.exhaustive_instances) + " enumerated table by table), " +
                  std::to_string(r.law_failures) + " law failures, " +
                  std::to_string(r.uniqueness_failures) + " uniqueness failures";
  for (const auto& p : r.problems) s += "\n  " + p;
  return s;
}

}  // namespace deckit::enumerate
