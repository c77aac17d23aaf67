#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pregret/generators.hpp"
#include "pregret/simplex.hpp"

namespace pregret {

// Per-label loss values of an estimate; +inf only off the estimate's support.
struct LossEval {
  std::vector<double> values;
  std::vector<int> support_of_estimate;
};

// Loss derived from the generator's tangent at q_hat:
//   l_y(q_hat) = -f(q_hat) - v_y + <v, q_hat>,   v = subgradient(g, q_hat);
// l_y = +inf exactly where v_y = -inf.
LossEval savage_loss(const Generator& g, const ProbVec& q_hat);

// sum_y q_y l_y(q_hat) with 0 * inf = 0; may be +inf.
double conditional_risk(const Generator& g, const ProbVec& q, const ProbVec& q_hat);

// Minimal conditional risk of q, equal to -f(q).
double bayes_risk(const Generator& g, const ProbVec& q);

// Bregman divergence f(q) - f(q_hat) - <v, q - q_hat> >= 0; +inf when q puts
// mass where the selector is -inf.
double surrogate_regret(const Generator& g, const ProbVec& q, const ProbVec& q_hat);

// (f(q) + f(q_check))/2 - f((q + q_check)/2), clamped into [0, inf).
double jensen_gap(const Generator& g, const ProbVec& q, const ProbVec& q_check);

struct Witness {
  ProbVec q;
  ProbVec q_hat;
  double value;
};

// Common report shape for certification sweeps; serialized by report_json().
struct CertReport {
  std::string family;
  double alpha = 0.0;
  int N = 0;
  std::optional<std::string> p;
  bool pass = false;
  std::optional<Witness> worst_witness;
  double margin = 0.0;
  std::string detail;
};

// Grid certification of properness: for every grid q the minimum of
// L(q, .) over the grid must sit at q (within 1e-9); for strict generators
// the runner-up margin is reported (its minimum over base points in
// `margin`). Fails with a witness otherwise.
CertReport properness_certificate(const Generator& g, int resolution);

struct StrongPropernessReport {
  std::string family;
  double alpha = 0.0;
  int N = 0;
  double kappa = 0.0;
  int samples = 0;
  double min_ratio = 0.0;  // min over samples of R / (||q - q_hat||_2^2 / 2)
  bool pass = false;
  std::optional<Witness> worst_witness;
};

// Samples pairs and tests R >= (kappa/2) ||q - q_hat||_2^2 with tolerance
// 1e-9 on the ratio; pairs with infinite regret hold vacuously and are
// excluded from the minimum.
StrongPropernessReport strong_properness_test(const Generator& g, double kappa,
                                              int samples, std::uint64_t seed,
                                              int threads = 1);

}  // namespace pregret
