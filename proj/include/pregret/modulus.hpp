#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pregret/generators.hpp"
#include "pregret/interpolate.hpp"
#include "pregret/simplex.hpp"

namespace pregret {

enum class CurveMethod { ClosedForm, BruteForce };

struct CurvePoint {
  double r = 0.0;
  double omega = 0.0;
  CurveMethod method = CurveMethod::BruteForce;
  bool heuristic = false;
  std::optional<SimplexPair> minimizer;
};

// Sampled modulus-of-convexity curve r -> omega(r) with per-point provenance.
struct ModulusCurve {
  std::string family;
  double alpha = 0.0;
  int N = 0;
  PNorm p = PNorm::finite(1.0);
  std::vector<CurvePoint> points;

  // diagnostics, empty when omega is non-decreasing along the grid
  std::vector<std::string> monotonicity_diagnostics() const;
  // zero-increase runs; nonempty exactly where strictness fails
  std::vector<std::string> flat_segments() const;
  bool strictly_increasing() const;
};

struct SearchBudget {
  int restarts = 64;
  double step_init = 1e-1;
  double step_min = 1e-7;
  int scan_points = 4001;        // exact 1-D scan resolution for N = 2
  int max_evals_per_restart = 20000;  // deterministic cap on descent length
  std::uint64_t seed = 0;
};

struct BruteForceResult {
  double omega = 0.0;
  SimplexPair minimizer;
  bool heuristic = false;
};

// Minimizes the midpoint Jensen gap over pairs at exact p-distance r.
// N = 2: exact scan over chord midpoints plus golden-section refinement.
// N >= 3: multi-start projected coordinate descent over (midpoint, tangent
// direction); the result is flagged heuristic.
BruteForceResult modulus_brute_force(const Generator& g, const PNorm& p, double r,
                                     const SearchBudget& budget = {});

// True when a closed form is implemented for (family, N, p): every builtin
// family at (N, p) = (2, 1), and Shannon at p = 2 for any N.
bool closed_form_supported(const Generator& g, const PNorm& p);

// Closed-form omega in the distance convention of the curve domain
// [0, 2^(1/p)]: the binary forms take argument r/2 (half the 1-norm
// distance), the Shannon p = 2 form takes r directly.
double modulus_closed_form(const Generator& g, const PNorm& p, double r);

// Analytic d omega / d r for the supported closed forms.
double modulus_closed_form_derivative(const Generator& g, const PNorm& p, double r);

// The printed binary-case expression evaluated at its own argument
// a = |q_1 - q_check_1| (half the 1-norm distance); modulus_closed_form at
// p = 1 equals this at a = r/2.
double table_closed_form_half_arg(Family family, double alpha, double a);

// Sweeps r_grid (increasing, inside [0, 2^(1/p)]) with one method for all
// points; brute-force points are seeded per index so that thread count does
// not change the result.
ModulusCurve modulus_curve(const Generator& g, const PNorm& p,
                           const std::vector<double>& r_grid, CurveMethod method,
                           const SearchBudget& budget = {}, int threads = 1);

// Monotone interpolant through the curve (prepending (0, 0) when absent).
MonotoneCubic curve_interpolant(const ModulusCurve& curve);

// Unique r with omega(r) = rho on a strictly increasing curve, by bisection
// on the monotone interpolant to 1e-10; saturates at the simplex diameter
// when rho exceeds the curve maximum. Throws NonInvertibleError when the
// curve is not strictly increasing.
double inverse_modulus(const ModulusCurve& curve, double rho);

}  // namespace pregret
