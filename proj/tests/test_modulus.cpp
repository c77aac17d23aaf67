#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pregret/modulus.hpp"
#include "pregret/proper_loss.hpp"

using namespace pregret;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

struct TableEntry {
  Generator gen;
  const char* label;
};

std::vector<TableEntry> table_rows() {
  return {
      {Generator::shannon(2), "shannon"},
      {Generator::squared_alpha_norm(1.5, 2), "sq-1.5"},
      {Generator::squared_alpha_norm(2.0, 2), "sq-2"},
      {Generator::squared_alpha_norm(3.0, 2), "sq-3"},
      {Generator::alpha_norm(2.0, 2), "an-2"},
      {Generator::alpha_norm(4.0, 2), "an-4"},
      {Generator::tsallis(1.5, 2), "ts-1.5"},
      {Generator::tsallis(2.5, 2), "ts-2.5"},
      {Generator::tsallis(4.0, 2), "ts-4"},
      {Generator::max_power(1.5, 2), "mp-1.5"},
      {Generator::max_power(2.0, 2), "mp-2"},
      {Generator::max_power(3.0, 2), "mp-3"},
  };
}

}  // namespace

TEST_CASE("brute force oracle, binary exact scan") {
  const PNorm p1 = PNorm::finite(1.0);
  const Generator shannon = Generator::shannon(2);

  const auto at1 = modulus_brute_force(shannon, p1, 1.0);
  CHECK(at1.omega == doctest::Approx(0.130812).epsilon(1e-4));
  CHECK(!at1.heuristic);
  CHECK(at1.minimizer.q[0] == doctest::Approx(0.75).epsilon(1e-7));
  CHECK(at1.minimizer.q_check[0] == doctest::Approx(0.25).epsilon(1e-7));

  CHECK(modulus_brute_force(shannon, p1, 0.0).omega == doctest::Approx(0.0));

  const auto at2 = modulus_brute_force(shannon, p1, 2.0);
  CHECK(at2.omega == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(at2.minimizer.q[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(at2.minimizer.q_check[0] == doctest::Approx(0.0).epsilon(1e-9));

  const Generator brier = Generator::squared_alpha_norm(2.0, 2);
  for (double r : {0.2, 0.5, 1.0, 1.7}) {
    CHECK(modulus_brute_force(brier, p1, r).omega ==
          doctest::Approx(r * r / 8.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(modulus_brute_force(shannon, p1, 2.5), DomainError);
}

TEST_CASE("closed forms at pinned points") {
  const PNorm p1 = PNorm::finite(1.0);
  CHECK(modulus_closed_form(Generator::shannon(2), p1, 2.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  for (double r : {0.3, 1.0, 1.6}) {
    CHECK(modulus_closed_form(Generator::max_power(2.0, 2), p1, r) ==
          doctest::Approx(std::pow(r / 4.0, 2.0)).epsilon(1e-12));
    CHECK(modulus_closed_form(Generator::max_power(3.0, 2), p1, r) ==
          doctest::Approx(std::pow(r / 4.0, 3.0)).epsilon(1e-12));
  }
  CHECK(modulus_closed_form(Generator::shannon(3), PNorm::finite(2.0), std::sqrt(2.0)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(modulus_closed_form(Generator::squared_alpha_norm(2.0, 2), p1, 1.0) ==
        doctest::Approx(0.125).epsilon(1e-12));
  CHECK_THROWS_AS(modulus_closed_form(Generator::alpha_norm(1.5, 2), p1, 1.0),
                  UnsupportedError);
  CHECK(!closed_form_supported(Generator::alpha_norm(1.5, 2), p1));
  CHECK(!closed_form_supported(Generator::tsallis(1.5, 3), p1));
  CHECK(closed_form_supported(Generator::shannon(4), PNorm::finite(2.0)));
}

TEST_CASE("closed form against the exact scan") {
  const PNorm p1 = PNorm::finite(1.0);
  for (const auto& row : table_rows()) {
    CAPTURE(row.label);
    for (double r : linspace(0.05, 1.95, 12)) {
      const double closed = modulus_closed_form(row.gen, p1, r);
      const double brute = modulus_brute_force(row.gen, p1, r).omega;
      CHECK(std::fabs(closed - brute) < 1e-6);
    }
  }
}

TEST_CASE("printed binary forms are parameterized by half the distance") {
  const double brute = modulus_brute_force(Generator::shannon(2), PNorm::finite(1.0), 1.0).omega;
  CHECK(std::fabs(brute - table_closed_form_half_arg(Family::Shannon, 0.0, 0.5)) < 1e-6);
  CHECK(std::fabs(brute - table_closed_form_half_arg(Family::Shannon, 0.0, 1.0)) > 1e-3);
}

TEST_CASE("modulus curve and monotonicity") {
  const PNorm p1 = PNorm::finite(1.0);
  const Generator tsallis = Generator::tsallis(1.5, 2);
  const auto grid = linspace(0.0, 2.0, 21);
  const ModulusCurve closed = modulus_curve(tsallis, p1, grid, CurveMethod::ClosedForm);
  const ModulusCurve brute = modulus_curve(tsallis, p1, grid, CurveMethod::BruteForce);
  REQUIRE(closed.points.size() == brute.points.size());
  for (std::size_t i = 0; i < closed.points.size(); ++i) {
    CHECK(std::fabs(closed.points[i].omega - brute.points[i].omega) < 1e-6);
  }
  CHECK(closed.monotonicity_diagnostics().empty());
  CHECK(closed.strictly_increasing());

  const ModulusCurve empty = modulus_curve(tsallis, p1, {}, CurveMethod::ClosedForm);
  CHECK(empty.points.empty());

  // thread count must not change brute-force results
  const ModulusCurve brute4 = modulus_curve(tsallis, p1, grid, CurveMethod::BruteForce, {}, 4);
  for (std::size_t i = 0; i < brute.points.size(); ++i) {
    CHECK(brute.points[i].omega == brute4.points[i].omega);
  }
}

TEST_CASE("flat modulus of a non-strict generator is reported") {
  // max-power with N = 3 is constant along some chords, so omega vanishes
  // on an initial segment and the curve cannot be inverted
  const Generator mp3 = Generator::max_power(2.0, 3);
  SearchBudget budget;
  budget.restarts = 16;
  const ModulusCurve curve =
      modulus_curve(mp3, PNorm::finite(1.0), {0.05, 0.1, 0.2}, CurveMethod::BruteForce, budget);
  CHECK(curve.points[0].omega <= 1e-10);
  CHECK(!curve.strictly_increasing());
  CHECK(curve.monotonicity_diagnostics().empty());  // flat, not decreasing
  CHECK(!curve.flat_segments().empty());
  CHECK_THROWS_AS(inverse_modulus(curve, 0.01), NonInvertibleError);
}

TEST_CASE("inverse modulus") {
  const PNorm p1 = PNorm::finite(1.0);
  const Generator brier = Generator::squared_alpha_norm(2.0, 2);
  const auto grid = linspace(0.0, 2.0, 41);  // includes r = 1 as a knot
  const ModulusCurve curve = modulus_curve(brier, p1, grid, CurveMethod::ClosedForm);
  CHECK(inverse_modulus(curve, 0.125) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(inverse_modulus(curve, 0.0) == doctest::Approx(0.0));

  const ModulusCurve shannon =
      modulus_curve(Generator::shannon(2), p1, grid, CurveMethod::ClosedForm);
  CHECK(inverse_modulus(shannon, 1.0) == doctest::Approx(2.0));  // beyond ln 2: saturates
}

TEST_CASE("minimizer chord property") {
  const PNorm p1 = PNorm::finite(1.0);
  for (const auto& g : {Generator::shannon(2), Generator::squared_alpha_norm(2.0, 2)}) {
    for (double r : {0.6, 1.2}) {
      const auto res = modulus_brute_force(g, p1, r);
      for (double tau : {0.1, 0.25}) {
        std::vector<double> a(2), b(2);
        for (int k = 0; k < 2; ++k) {
          a[static_cast<std::size_t>(k)] = (1 - tau) * res.minimizer.q[static_cast<std::size_t>(k)] +
                                           tau * res.minimizer.q_check[static_cast<std::size_t>(k)];
          b[static_cast<std::size_t>(k)] = tau * res.minimizer.q[static_cast<std::size_t>(k)] +
                                           (1 - tau) * res.minimizer.q_check[static_cast<std::size_t>(k)];
        }
        const double j_inner = jensen_gap(g, ProbVec::create(a), ProbVec::create(b));
        const double omega_inner = modulus_brute_force(g, p1, (1 - 2 * tau) * r).omega;
        CHECK(j_inner >= omega_inner - 1e-9);
      }
    }
  }
}

TEST_CASE("heuristic search recovers the general-N two-coordinate minimizer") {
  const PNorm p2 = PNorm::finite(2.0);
  const Generator shannon3 = Generator::shannon(3);
  SearchBudget budget;
  budget.restarts = 24;
  for (double r : {0.4, 0.9}) {
    const auto res = modulus_brute_force(shannon3, p2, r, budget);
    CHECK(res.heuristic);
    const double closed = modulus_closed_form(shannon3, p2, r);
    CHECK(std::fabs(res.omega - closed) < 1e-3);
    // minimizer has the form ((1 +- b)/2, (1 -+ b)/2, 0) up to permutation
    const double b = r / std::sqrt(2.0);
    std::vector<double> want = {(1 + b) / 2, (1 - b) / 2, 0.0};
    std::vector<double> got(res.minimizer.q.components());
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    for (int k = 0; k < 3; ++k) {
      CHECK(std::fabs(got[static_cast<std::size_t>(k)] - want[static_cast<std::size_t>(k)]) < 1e-3);
    }
  }
}
