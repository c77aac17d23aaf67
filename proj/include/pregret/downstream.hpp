#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pregret/modulus.hpp"
#include "pregret/proper_loss.hpp"
#include "pregret/simplex.hpp"

namespace pregret {

// Row-stochastic label-noise matrix with cached inverse. Construction fails
// on invalid rows or a numerically singular matrix; the 1-norm condition
// number is recorded so callers can gate round-trip accuracy claims.
class NoiseMatrix {
 public:
  static NoiseMatrix create(int N, std::vector<double> row_major);
  static NoiseMatrix identity(int N);

  int dim() const { return n_; }
  double at(int row, int col) const { return c_[static_cast<std::size_t>(row * n_ + col)]; }
  double inv_at(int row, int col) const {
    return inv_[static_cast<std::size_t>(row * n_ + col)];
  }
  double condition_number() const { return cond1_; }

  // C^T q; stays on the simplex for q on the simplex.
  ProbVec mix(const ProbVec& q) const;

 private:
  NoiseMatrix() = default;
  int n_ = 0;
  std::vector<double> c_;    // row-major C
  std::vector<double> inv_;  // row-major C^{-1}
  double cond1_ = 0.0;
};

// Smallest index attaining the maximum component.
int plugin_label(const ProbVec& q_hat);

// max_y q_y - q_{label(q_hat)}; the excess 0-1 risk of the argmax forecast.
double zero_one_regret(const ProbVec& q, const ProbVec& q_hat);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// Reg01 <= 2^(1 - 1/p) ||q - q_hat||_p  (Holder through the 0-1 loss columns).
BoundCheck zero_one_bound_check(const ProbVec& q, const ProbVec& q_hat, const PNorm& p);

// (C^T)^{-1} q_hat; may leave the simplex, consumed only through its argmax.
std::vector<double> noise_correct(const ProbVec& q_hat_noisy, const NoiseMatrix& C);

// Smallest argmax index of the noise-corrected score vector.
int noise_corrected_label(const ProbVec& q_hat_noisy, const NoiseMatrix& C);

// Reg01 of the corrected label <= ||C^T q - q_hat||_p max_y ||C^{-1}(L_label - L_y)||_p*.
BoundCheck noisy_label_bound_check(const ProbVec& q, const ProbVec& q_hat_noisy,
                                   const NoiseMatrix& C, const PNorm& p);

// |q - q'| [1{(q_hat - q_hat')(q - q') < 0} + 1/2 1{q_hat = q_hat'}].
double ranking_regret(double q, double q_prime, double q_hat, double q_hat_prime);

// Reg_rank <= |q - q_hat| + |q' - q_hat'|.
BoundCheck ranking_bound_check(double q, double q_prime, double q_hat, double q_hat_prime);

enum class Task { Classification, NoisyLabels, Ranking };

std::string task_name(Task t);

struct ChainReport {
  Task task = Task::Classification;
  double task_regret = 0.0;
  double surrogate = 0.0;      // R(q, q_hat) (noisy task: R(C^T q, q_hat))
  double p_norm_bound = 0.0;   // omega^{-1}(R / 2)
  double chained_bound = 0.0;  // task constant times the p-norm bound
  bool vacuous = false;        // curve not invertible: no finite bound exists
  bool pass = false;
};

// Full chain for the argmax task: Reg01 <= 2^(1-1/p) omega^{-1}(R/2).
ChainReport end_to_end_bound(const Generator& g, const ModulusCurve& curve,
                             const ProbVec& q, const ProbVec& q_hat, const PNorm& p);

// Noisy-label chain: the surrogate regret is measured against C^T q.
ChainReport end_to_end_bound_noisy(const Generator& g, const ModulusCurve& curve,
                                   const ProbVec& q, const ProbVec& q_hat_noisy,
                                   const NoiseMatrix& C, const PNorm& p);

// Ranking chain over two binary instances (scalar identification).
ChainReport end_to_end_bound_ranking(const Generator& g, const ModulusCurve& curve,
                                     double q, double q_prime, double q_hat,
                                     double q_hat_prime, const PNorm& p);

}  // namespace pregret
