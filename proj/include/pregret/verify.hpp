#pragma once

#include <cstdint>
#include <string>

#include "pregret/downstream.hpp"
#include "pregret/io.hpp"
#include "pregret/modulus.hpp"
#include "pregret/proper_loss.hpp"
#include "pregret/rng.hpp"

namespace pregret {

// Outcome of a seeded verification sweep. worst_margin is the largest
// observed (lhs - rhs): every sample satisfies its inequality iff it stays
// below the suite tolerance.
struct SweepReport {
  std::string suite;
  std::string family;
  double alpha = 0.0;
  int N = 0;
  std::string p;
  int samples = 0;
  int violations = 0;
  double worst_margin = 0.0;
  Json example_witness;
  bool pass = false;
};

Json sweep_json(const SweepReport& report);

// r-grid used to interpolate modulus curves inside sweeps: uniform over
// [0, 2^(1/p)] with extra points near zero where curvature information
// matters for inversion.
std::vector<double> sweep_r_grid(double diameter, int uniform_points = 513);

// Builds the curve backing a sweep: closed form when supported, exact scan
// or heuristic brute force otherwise.
ModulusCurve sweep_curve(const Generator& g, const PNorm& p, std::uint64_t seed,
                         int threads = 1);

// omega(||q - q_hat||_p) <= R(q, q_hat)/2 + 1e-9 on seeded pairs, with omega
// interpolated from a brute-force curve.
SweepReport verify_regret_bound(const Generator& g, const PNorm& p, int samples,
                                std::uint64_t seed, int threads = 1);

// Strong properness at level kappa plus the 2-norm chain
// ||q - q_hat||_2 <= sqrt(2 R / kappa) + 1e-9 on the same pairs.
SweepReport verify_strong(const Generator& g, double kappa, int samples,
                          std::uint64_t seed, int threads = 1);

// Tangent-form consistency |L(q, q_hat) - (-f(q_hat) - <v, q - q_hat>)| <= 1e-10
// when finite, and the properness inequality L(q, q) <= L(q, q_hat) + 1e-10.
SweepReport verify_savage(const Generator& g, int samples, std::uint64_t seed,
                          int threads = 1);

// Jensen gaps and regrets of f and f + <u, .> + lambda agree within 1e-10.
SweepReport verify_affine(const Generator& g, int samples, std::uint64_t seed,
                          int threads = 1);

// Grid properness certificate wrapped as a sweep report.
SweepReport verify_properness(const Generator& g, int resolution);

// Draws a row-stochastic matrix with diagonal >= 0.6 (kept well-conditioned).
NoiseMatrix random_noise_matrix(int N, Rng& rng);

// Task bound sweeps: argmax and noisy-label 0-1 bounds, ranking bound;
// the noisy suite also asserts the noise round-trip at condition < 1e3.
SweepReport verify_task_bounds(Task task, int N, const PNorm& p, int samples,
                               std::uint64_t seed, int threads = 1);

// End-to-end chains task regret <= constant * omega^{-1}(R/2) per sample.
SweepReport verify_chain(const Generator& g, Task task, const PNorm& p, int samples,
                         std::uint64_t seed, int threads = 1);

}  // namespace pregret
