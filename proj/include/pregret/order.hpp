#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pregret/modulus.hpp"

namespace pregret {

// A modulus r -> omega(r) presented either as an evaluable closed form
// (optionally with an analytic derivative fast path) or as a curve
// interpolant. Order analysis only needs values and left derivatives.
class ModulusFunction {
 public:
  static ModulusFunction from_closed_form(const Generator& g, const PNorm& p);
  static ModulusFunction from_curve(const ModulusCurve& curve);
  static ModulusFunction from_callable(std::function<double(double)> value,
                                       std::function<double(double)> derivative,
                                       double r_min, double r_max);

  double value(double r) const;
  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }
  double analytic_derivative(double r) const;
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }

 private:
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
  double r_min_ = 0.0;
  double r_max_ = 0.0;
};

// The default schedule for left Dini estimation, largest to smallest.
std::vector<double> default_dini_epsilons();

// Upper-left Dini derivative proxy: analytic derivative when registered,
// otherwise the max backward quotient (omega(r) - omega(r - eps))/eps over
// the last (smallest) five schedule entries.
double dini_left_derivative(const ModulusFunction& omega, double r,
                            const std::vector<double>& eps_schedule = default_dini_epsilons());

// Simonenko order r * D-omega(r) / omega(r); requires omega(r) > 1e-14.
double simonenko_order(const ModulusFunction& omega, double r,
                       const std::vector<double>& eps_schedule = default_dini_epsilons());

// Sampled order diagnostics along a grid.
struct OrderProfile {
  std::string family;
  double alpha = 0.0;
  int N = 0;
  std::optional<PNorm> p;
  std::vector<double> r;
  std::vector<double> omega;
  std::vector<double> sigma;
  std::vector<double> K;  // 8 omega(r) / r^2
  double kappa_estimate = 0.0;        // min K over the grid
  double limsup_sigma_estimate = 0.0; // max sigma over the 10 smallest r
  double liminf_sigma_estimate = 0.0; // min sigma over the 10 smallest r
  std::vector<double> dini_epsilons;
};

struct OrderConfig {
  CurveMethod method = CurveMethod::ClosedForm;
  SearchBudget budget;
  std::vector<double> eps_schedule = default_dini_epsilons();
  int threads = 1;
};

OrderProfile order_profile(const Generator& g, const PNorm& p,
                           const std::vector<double>& r_grid,
                           const OrderConfig& config = {});

// Profile of an abstract modulus (used by the oscillation example).
OrderProfile order_profile_of(const ModulusFunction& omega, const std::vector<double>& r_grid,
                              const std::string& label,
                              const std::vector<double>& eps_schedule = default_dini_epsilons());

struct SandwichReport {
  double r0 = 0.0;
  double s = 0.0;  // min sigma on (0, r0]
  double S = 0.0;  // max sigma on (0, r0]
  bool conclusive = true;  // false when S is not finite
  bool pass = false;
  double max_relative_violation = 0.0;
  bool lower_monotone = false;  // omega(r) r^-s non-decreasing on the grid
  bool upper_monotone = false;  // omega(r) r^-S non-increasing on the grid
};

// Checks [omega(r0)/r0^S] r^S <= omega(r) <= [omega(r0)/r0^s] r^s at every
// grid point r <= r0, within 1e-6 relative, plus both power-monotonicity
// claims on the grid.
SandwichReport power_sandwich_check(const OrderProfile& profile, double r0);

struct BarrierReport {
  std::string family;
  double kappa = 0.0;
  double limsup_sigma = 0.0;
  double liminf_sigma = 0.0;
  bool c1 = false;  // kappa estimate bounded away from zero
  bool c2 = false;  // K settles over the smallest grid points
  bool applicable = false;
  bool pass = false;  // the applicable estimate clears 2 - 0.05
  std::string detail;
};

// Evaluates the small-r order barrier: liminf estimate when both conditions
// hold, limsup estimate when only one does; always returns a report.
BarrierReport order_barrier_check(const OrderProfile& profile);

// Cosine integral Ci(z) = -int_z^inf cos(t)/t dt, to 1e-10 absolute.
// Power series with the Euler constant for z <= 8, continued-fraction
// evaluation of the asymptotic auxiliary functions beyond.
double cosine_integral(double z);

// The oscillating modulus r sin(1/r) - Ci(1/r) + r with analytic derivative
// 1 + sin(1/r); increasing, of asymptotic order r, yet of finite order r^2.
ModulusFunction counterexample_omega();

struct CounterexampleReport {
  ModulusCurve curve;
  OrderProfile profile;
  bool derivative_nonnegative = false;  // 1 + sin(1/r) >= 0 on the grid
  double max_sigma_small_r = 0.0;       // max sigma over grid r <= 0.1
  bool sigma_reaches_two = false;       // max_sigma_small_r >= 2 - 0.05
  double max_omega_over_r = 0.0;
  bool omega_over_r_bounded = false;
};

// Evaluates the counterexample along r_grid (inside (0, 1], min >= 1e-4).
CounterexampleReport counterexample_curve(const std::vector<double>& r_grid);

}  // namespace pregret
