#include <doctest.h>

#include <cmath>
#include <limits>

#include "pregret/generators.hpp"
#include "pregret/rng.hpp"

using namespace pregret;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Generator> all_families(int N) {
  std::vector<Generator> gens = {
      Generator::shannon(N),
      Generator::squared_alpha_norm(1.5, N),
      Generator::squared_alpha_norm(2.0, N),
      Generator::squared_alpha_norm(3.0, N),
      Generator::alpha_norm(2.0, N),
      Generator::alpha_norm(4.0, N),
      Generator::tsallis(1.5, N),
      Generator::tsallis(2.5, N),
      Generator::tsallis(4.0, N),
      Generator::max_power(1.5, N),
      Generator::max_power(2.0, N),
      Generator::max_power(3.0, N),
  };
  return gens;
}

// interior point with components bounded away from zero, for finite steps
ProbVec interior_sample(int N, std::uint64_t seed) {
  const ProbVec raw = sample_simplex_one(N, seed);
  std::vector<double> c(raw.components());
  for (auto& x : c) x = 0.9 * x + 0.1 / N;
  return ProbVec::create(std::move(c));
}

}  // namespace

TEST_CASE("eval_f examples") {
  CHECK(eval_f(Generator::shannon(2), ProbVec::create({0.5, 0.5})) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-12));
  CHECK(eval_f(Generator::shannon(2), ProbVec::create({1.0, 0.0})) == doctest::Approx(0.0));
  CHECK(eval_f(Generator::squared_alpha_norm(2.0, 2), ProbVec::create({0.8, 0.2})) ==
        doctest::Approx(0.68).epsilon(1e-12));
  CHECK(eval_f(Generator::max_power(2.0, 2), ProbVec::create({0.75, 0.25})) ==
        doctest::Approx(0.0625).epsilon(1e-12));
  CHECK_THROWS_AS(eval_f(Generator::shannon(3), ProbVec::create({0.5, 0.5})), InputError);
}

TEST_CASE("alpha validation") {
  CHECK_THROWS_AS(Generator::tsallis(1.0, 2), InputError);
  CHECK_THROWS_AS(Generator::squared_alpha_norm(0.7, 2), InputError);
  CHECK_THROWS_AS(Generator::max_power(1.0, 3), InputError);
}

TEST_CASE("subgradient examples") {
  const ExtendedVec v = subgradient(Generator::shannon(2), ProbVec::create({0.5, 0.5}));
  CHECK(v.v[0] == doctest::Approx(1.0 + std::log(0.5)).epsilon(1e-12));
  CHECK(v.v[1] == doctest::Approx(v.v[0]));

  const ExtendedVec b = subgradient(Generator::shannon(2), ProbVec::create({1.0, 0.0}));
  CHECK(b.v[0] == doctest::Approx(1.0));
  CHECK(b.v[1] == -kInf);

  const ExtendedVec brier = subgradient(Generator::squared_alpha_norm(2.0, 2),
                                        ProbVec::create({0.8, 0.2}));
  CHECK(brier.v[0] == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(brier.v[1] == doctest::Approx(0.4).epsilon(1e-12));

  // finite boundary slope: tsallis gradient a q^(a-1) vanishes at zero mass
  const ExtendedVec ts = subgradient(Generator::tsallis(1.5, 2), ProbVec::create({1.0, 0.0}));
  CHECK(ts.v[0] == doctest::Approx(1.5));
  CHECK(ts.v[1] == doctest::Approx(0.0));

  // max-power tie picks the lowest-index active piece
  const ExtendedVec mp = subgradient(Generator::max_power(2.0, 2), ProbVec::create({0.75, 0.25}));
  CHECK(mp.v[0] == doctest::Approx(2.0 * 0.25).epsilon(1e-12));
  CHECK(mp.v[1] == doctest::Approx(0.0));
  const ExtendedVec mp0 = subgradient(Generator::max_power(2.0, 2), ProbVec::create({0.5, 0.5}));
  CHECK(mp0.v[0] == doctest::Approx(0.0));
  CHECK(mp0.v[1] == doctest::Approx(0.0));
}

TEST_CASE("subgradient_check") {
  const auto grid = simplex_grid(2, 100);
  const Generator shannon = Generator::shannon(2);
  CHECK(subgradient_check(shannon, ProbVec::create({0.5, 0.5}), grid).ok);

  // vertex base point: probes charging the off-support index hold trivially
  CHECK(subgradient_check(shannon, ProbVec::create({1.0, 0.0}),
                          {ProbVec::create({0.0, 1.0})}).ok);

  // corrupted selector is caught with a witness
  const Generator corrupt = Generator::custom(
      "corrupt-shannon", 2, [&](const ProbVec& q) { return eval_f(shannon, q); },
      [&](const ProbVec& q) {
        ExtendedVec v = subgradient(shannon, q);
        v.v[0] += 0.1;
        return v;
      },
      true, /*validate=*/false);
  const auto res = subgradient_check(corrupt, ProbVec::create({0.5, 0.5}), grid);
  CHECK(!res.ok);
  CHECK(res.worst_probe.has_value());
  CHECK(res.worst_violation > 0.0);
}

TEST_CASE("custom hook registration validates the selector") {
  const Generator shannon = Generator::shannon(2);
  CHECK_THROWS_AS(Generator::custom(
                      "negated", 2, [&](const ProbVec& q) { return eval_f(shannon, q); },
                      [&](const ProbVec& q) {
                        ExtendedVec v = subgradient(shannon, q);
                        for (auto& x : v.v) {
                          if (x != -kInf) x = -x;
                        }
                        return v;
                      },
                      true),
                  InputError);
  // a valid pair registers fine
  const Generator ok = Generator::custom(
      "shannon-copy", 2, [&](const ProbVec& q) { return eval_f(shannon, q); },
      [&](const ProbVec& q) { return subgradient(shannon, q); }, true);
  CHECK(ok.name() == "shannon-copy");
}

TEST_CASE("gradient matches central differences on interior points") {
  const double h = 1e-6;
  for (int N : {2, 3}) {
    for (const auto& g : all_families(N)) {
      if (g.family() == Family::MaxPower) continue;  // kinked selector
      for (int trial = 0; trial < 100; ++trial) {
        const ProbVec q = interior_sample(N, mix_seed(500 + N, trial));
        const ExtendedVec v = subgradient(g, q);
        for (int i = 0; i + 1 < N; ++i) {
          std::vector<double> up(q.components()), dn(q.components());
          up[static_cast<std::size_t>(i)] += h;
          up[static_cast<std::size_t>(i + 1)] -= h;
          dn[static_cast<std::size_t>(i)] -= h;
          dn[static_cast<std::size_t>(i + 1)] += h;
          const double fd =
              (eval_f(g, ProbVec::create(up)) - eval_f(g, ProbVec::create(dn))) / (2 * h);
          const double an = v.v[static_cast<std::size_t>(i)] - v.v[static_cast<std::size_t>(i + 1)];
          CHECK(std::fabs(fd - an) <= 1e-4 * std::max(1.0, std::fabs(an)));
        }
      }
    }
  }
}

TEST_CASE("convexity along random chords") {
  Rng rng(31);
  for (const auto& g : all_families(2)) {
    for (int trial = 0; trial < 1000; ++trial) {
      const ProbVec q = sample_simplex_one(2, rng.next_u64());
      const ProbVec r = sample_simplex_one(2, rng.next_u64());
      const double t = rng.uniform(0.0, 1.0);
      std::vector<double> mix(2);
      for (int k = 0; k < 2; ++k) {
        mix[static_cast<std::size_t>(k)] = (1 - t) * q[static_cast<std::size_t>(k)] +
                                           t * r[static_cast<std::size_t>(k)];
      }
      const double lhs = eval_f(g, ProbVec::create(mix));
      const double rhs = (1 - t) * eval_f(g, q) + t * eval_f(g, r);
      CHECK(lhs <= rhs + 1e-10);
    }
  }
}

TEST_CASE("strict families have positive midpoint gaps") {
  Rng rng(37);
  for (const auto& g : all_families(2)) {
    if (!g.strictly_convex()) continue;
    for (int trial = 0; trial < 1000; ++trial) {
      const ProbVec q = sample_simplex_one(2, rng.next_u64());
      const ProbVec r = sample_simplex_one(2, rng.next_u64());
      if (distance(q, r, PNorm::finite(1.0)) < 1e-9) continue;
      std::vector<double> mid(2);
      for (int k = 0; k < 2; ++k) {
        mid[static_cast<std::size_t>(k)] =
            0.5 * (q[static_cast<std::size_t>(k)] + r[static_cast<std::size_t>(k)]);
      }
      const double gap =
          0.5 * (eval_f(g, q) + eval_f(g, r)) - eval_f(g, ProbVec::create(mid));
      CHECK(gap > 0.0);
    }
  }
}

TEST_CASE("selector passes the subgradient inequality on grids") {
  for (int N : {2, 3}) {
    const auto bases = simplex_grid(N, 50);
    const auto probes = simplex_grid(N, N == 2 ? 50 : 20);
    for (const auto& g : all_families(N)) {
      for (const auto& base : bases) {
        CAPTURE(g.name());
        CHECK(subgradient_check(g, base, probes).ok);
      }
    }
  }
}

TEST_CASE("max-power strictness flag tracks the dimension") {
  CHECK(Generator::max_power(2.0, 2).strictly_convex());
  CHECK(!Generator::max_power(2.0, 3).strictly_convex());
}
