#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pregret/simplex.hpp"

namespace pregret {

enum class Family { Shannon, SquaredAlphaNorm, AlphaNorm, Tsallis, MaxPower, Custom };

std::string family_name(Family f);
Family parse_family(const std::string& name);  // accepts aliases "brier", "log"

// Subgradient selector value in [-inf, inf)^N. -inf components are allowed
// only at indices outside the support of the base point.
struct ExtendedVec {
  std::vector<double> v;

  bool has_neg_inf() const;
};

// An immutable convex generator f on the simplex. The builtin families are
// the negative Shannon entropy <q, ln q>, squared alpha-norm ||q||_a^2,
// alpha-norm ||q||_a, Tsallis ||q||_a^a, and max-power max_n |q_n - 1/N|^a.
class Generator {
 public:
  static Generator shannon(int N);
  static Generator squared_alpha_norm(double alpha, int N);
  static Generator alpha_norm(double alpha, int N);
  static Generator tsallis(double alpha, int N);
  static Generator max_power(double alpha, int N);
  static Generator make(Family f, double alpha, int N);

  using EvalFn = std::function<double(const ProbVec&)>;
  using GradFn = std::function<ExtendedVec(const ProbVec&)>;

  // User-supplied (f, grad) pair. By default the selector is validated by a
  // subgradient check on a resolution-20 grid; validate=false skips it (for
  // diagnostics such as deliberately corrupted selectors).
  static Generator custom(std::string name, int N, EvalFn f, GradFn grad,
                          bool strict, bool validate = true);

  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  int dim() const { return n_; }
  bool strictly_convex() const { return strict_; }
  const std::string& name() const { return name_; }

 private:
  friend double eval_f(const Generator&, const ProbVec&);
  friend double eval_f_raw(const Generator&, std::span<const double>);
  friend ExtendedVec subgradient(const Generator&, const ProbVec&);

  Generator() = default;
  Family family_ = Family::Custom;
  double alpha_ = 0.0;
  int n_ = 0;
  bool strict_ = false;
  std::string name_;
  EvalFn custom_f_;
  GradFn custom_grad_;
};

double eval_f(const Generator& g, const ProbVec& q);

// No dimension validation; for hot loops over raw buffers. Components must
// form a simplex point. Custom generators fall back to the checked path.
double eval_f_raw(const Generator& g, std::span<const double> q);

// Deterministic selector of the subdifferential. Components are -inf exactly
// where no finite subgradient exists (Shannon off-support); the max-power
// kink picks the lowest-index active piece, with zero slope at exact ties
// of value zero.
ExtendedVec subgradient(const Generator& g, const ProbVec& q);

struct SubgradientCheckResult {
  bool ok = true;
  double worst_violation = 0.0;  // positive means f(q) < tangent by this much
  std::optional<ProbVec> worst_probe;
};

// Verifies f(q) >= f(q0) + <v, q - q0> - 1e-9 over the probes, with the
// extended-arithmetic convention that the inner product is -inf whenever a
// probe puts mass where v is -inf (the inequality then holds trivially).
SubgradientCheckResult subgradient_check(const Generator& g, const ProbVec& q0,
                                         const std::vector<ProbVec>& probes);

// Same inequality with an externally supplied selector value at q0.
SubgradientCheckResult subgradient_check_with(const Generator& g, const ProbVec& q0,
                                              const ExtendedVec& v,
                                              const std::vector<ProbVec>& probes);

// <v, q - q0> in the extended reals with 0 * (+-inf) = 0.
double extended_inner_diff(const ExtendedVec& v, const ProbVec& q, const ProbVec& q0);

}  // namespace pregret
