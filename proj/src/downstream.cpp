#include "pregret/downstream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pregret {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// operator 1-norm: max absolute column sum
double one_norm(const std::vector<double>& m, int n) {
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::fabs(m[static_cast<std::size_t>(i * n + j)]);
    best = std::max(best, s);
  }
  return best;
}

// Gauss-Jordan with partial pivoting; throws on numerical singularity.
std::vector<double> invert(std::vector<double> a, int n) {
  std::vector<double> inv(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::fabs(a[static_cast<std::size_t>(row * n + col)]) >
          std::fabs(a[static_cast<std::size_t>(pivot * n + col)])) {
        pivot = row;
      }
    }
    const double pv = a[static_cast<std::size_t>(pivot * n + col)];
    if (std::fabs(pv) < 1e-12) throw InputError("NoiseMatrix: matrix is singular");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a[static_cast<std::size_t>(col * n + j)], a[static_cast<std::size_t>(pivot * n + j)]);
        std::swap(inv[static_cast<std::size_t>(col * n + j)],
                  inv[static_cast<std::size_t>(pivot * n + j)]);
      }
    }
    const double scale = 1.0 / a[static_cast<std::size_t>(col * n + col)];
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(col * n + j)] *= scale;
      inv[static_cast<std::size_t>(col * n + j)] *= scale;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const double factor = a[static_cast<std::size_t>(row * n + col)];
      if (factor == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(row * n + j)] -= factor * a[static_cast<std::size_t>(col * n + j)];
        inv[static_cast<std::size_t>(row * n + j)] -=
            factor * inv[static_cast<std::size_t>(col * n + j)];
      }
    }
  }
  return inv;
}

}  // namespace

NoiseMatrix NoiseMatrix::create(int N, std::vector<double> row_major) {
  if (N < 2) throw InputError("NoiseMatrix: N must be >= 2");
  if (static_cast<int>(row_major.size()) != N * N) {
    throw InputError("NoiseMatrix: wrong number of entries");
  }
  for (int i = 0; i < N; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < N; ++j) {
      const double v = row_major[static_cast<std::size_t>(i * N + j)];
      if (!(v >= 0.0 && v <= 1.0)) throw InputError("NoiseMatrix: entries must be in [0, 1]");
      row_sum += v;
    }
    if (std::fabs(row_sum - 1.0) > 1e-12) throw InputError("NoiseMatrix: rows must sum to 1");
  }
  NoiseMatrix m;
  m.n_ = N;
  m.inv_ = invert(row_major, N);
  m.c_ = std::move(row_major);
  m.cond1_ = one_norm(m.c_, N) * one_norm(m.inv_, N);
  return m;
}

NoiseMatrix NoiseMatrix::identity(int N) {
  std::vector<double> c(static_cast<std::size_t>(N * N), 0.0);
  for (int i = 0; i < N; ++i) c[static_cast<std::size_t>(i * N + i)] = 1.0;
  return create(N, std::move(c));
}

ProbVec NoiseMatrix::mix(const ProbVec& q) const {
  if (q.dim() != n_) throw InputError("NoiseMatrix::mix: dimension mismatch");
  std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
  for (int j = 0; j < n_; ++j) {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += at(i, j) * q[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(j)] = std::min(1.0, std::max(0.0, s));
  }
  return ProbVec::create(std::move(out));
}

int plugin_label(const ProbVec& q_hat) {
  int arg = 0;
  for (int i = 1; i < q_hat.dim(); ++i) {
    if (q_hat[static_cast<std::size_t>(i)] > q_hat[static_cast<std::size_t>(arg)]) arg = i;
  }
  return arg;
}

double zero_one_regret(const ProbVec& q, const ProbVec& q_hat) {
  if (q.dim() != q_hat.dim()) throw InputError("zero_one_regret: dimension mismatch");
  const int label = plugin_label(q_hat);
  double qmax = 0.0;
  for (int i = 0; i < q.dim(); ++i) qmax = std::max(qmax, q[static_cast<std::size_t>(i)]);
  return qmax - q[static_cast<std::size_t>(label)];
}

BoundCheck zero_one_bound_check(const ProbVec& q, const ProbVec& q_hat, const PNorm& p) {
  BoundCheck check;
  check.lhs = zero_one_regret(q, q_hat);
  check.rhs = std::pow(2.0, 1.0 - p.inv()) * distance(q, q_hat, p);
  check.pass = check.lhs <= check.rhs + 1e-12;
  return check;
}

std::vector<double> noise_correct(const ProbVec& q_hat_noisy, const NoiseMatrix& C) {
  if (q_hat_noisy.dim() != C.dim()) throw InputError("noise_correct: dimension mismatch");
  const int n = C.dim();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  // (C^T)^{-1} = (C^{-1})^T, so row i of the result uses column i of C^{-1}
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += C.inv_at(j, i) * q_hat_noisy[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

int noise_corrected_label(const ProbVec& q_hat_noisy, const NoiseMatrix& C) {
  const std::vector<double> corrected = noise_correct(q_hat_noisy, C);
  int arg = 0;
  for (int i = 1; i < C.dim(); ++i) {
    if (corrected[static_cast<std::size_t>(i)] > corrected[static_cast<std::size_t>(arg)]) arg = i;
  }
  return arg;
}

namespace {

double zero_one_regret_of_label(const ProbVec& q, int label) {
  double qmax = 0.0;
  for (int i = 0; i < q.dim(); ++i) qmax = std::max(qmax, q[static_cast<std::size_t>(i)]);
  return qmax - q[static_cast<std::size_t>(label)];
}

// max_y || C^{-1} (L_label - L_y) ||_p*  with L_label - L_y = e_y - e_label,
// i.e. column differences of C^{-1}.
double noisy_task_constant(const NoiseMatrix& C, int label, const PNorm& p_conj) {
  const int n = C.dim();
  double best = 0.0;
  std::vector<double> col(static_cast<std::size_t>(n));
  for (int y = 0; y < n; ++y) {
    for (int i = 0; i < n; ++i) {
      col[static_cast<std::size_t>(i)] = C.inv_at(i, y) - C.inv_at(i, label);
    }
    best = std::max(best, p_norm(col, p_conj));
  }
  return best;
}

}  // namespace

BoundCheck noisy_label_bound_check(const ProbVec& q, const ProbVec& q_hat_noisy,
                                   const NoiseMatrix& C, const PNorm& p) {
  const int label = noise_corrected_label(q_hat_noisy, C);
  BoundCheck check;
  check.lhs = zero_one_regret_of_label(q, label);
  const ProbVec q_tilde = C.mix(q);
  check.rhs = distance(q_tilde, q_hat_noisy, p) * noisy_task_constant(C, label, p.conjugate());
  check.pass = check.lhs <= check.rhs + 1e-12;
  return check;
}

double ranking_regret(double q, double q_prime, double q_hat, double q_hat_prime) {
  for (double v : {q, q_prime, q_hat, q_hat_prime}) {
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("ranking_regret: inputs must be in [0, 1]");
  }
  double penalty = 0.0;
  if ((q_hat - q_hat_prime) * (q - q_prime) < 0.0) penalty += 1.0;
  if (q_hat == q_hat_prime) penalty += 0.5;
  return std::fabs(q - q_prime) * penalty;
}

BoundCheck ranking_bound_check(double q, double q_prime, double q_hat, double q_hat_prime) {
  BoundCheck check;
  check.lhs = ranking_regret(q, q_prime, q_hat, q_hat_prime);
  check.rhs = std::fabs(q - q_hat) + std::fabs(q_prime - q_hat_prime);
  check.pass = check.lhs <= check.rhs + 1e-12;
  return check;
}

std::string task_name(Task t) {
  switch (t) {
    case Task::Classification: return "argmax";
    case Task::NoisyLabels: return "noisy";
    case Task::Ranking: return "ranking";
  }
  return "argmax";
}

namespace {

// Inversion slack: the chained bound goes through a curve interpolant whose
// discretization error must not turn a true inequality into a failure.
constexpr double kChainTol = 1e-9;

ChainReport make_chain(Task task, double task_regret, double surrogate, double constant,
                       const ModulusCurve& curve) {
  ChainReport report;
  report.task = task;
  report.task_regret = task_regret;
  report.surrogate = surrogate;
  try {
    report.p_norm_bound = inverse_modulus(curve, 0.5 * surrogate);
  } catch (const NonInvertibleError&) {
    report.vacuous = true;
    report.pass = false;
    return report;
  }
  report.chained_bound = constant * report.p_norm_bound;
  report.pass = task_regret <= report.chained_bound + kChainTol;
  return report;
}

}  // namespace

ChainReport end_to_end_bound(const Generator& g, const ModulusCurve& curve,
                             const ProbVec& q, const ProbVec& q_hat, const PNorm& p) {
  const double regret01 = zero_one_regret(q, q_hat);
  const double surrogate = surrogate_regret(g, q, q_hat);
  const double constant = std::pow(2.0, 1.0 - p.inv());
  return make_chain(Task::Classification, regret01, surrogate, constant, curve);
}

ChainReport end_to_end_bound_noisy(const Generator& g, const ModulusCurve& curve,
                                   const ProbVec& q, const ProbVec& q_hat_noisy,
                                   const NoiseMatrix& C, const PNorm& p) {
  const int label = noise_corrected_label(q_hat_noisy, C);
  const double task_regret = zero_one_regret_of_label(q, label);
  const ProbVec q_tilde = C.mix(q);
  const double surrogate = surrogate_regret(g, q_tilde, q_hat_noisy);
  const double constant = noisy_task_constant(C, label, p.conjugate());
  return make_chain(Task::NoisyLabels, task_regret, surrogate, constant, curve);
}

ChainReport end_to_end_bound_ranking(const Generator& g, const ModulusCurve& curve,
                                     double q, double q_prime, double q_hat,
                                     double q_hat_prime, const PNorm& p) {
  if (g.dim() != 2) throw InputError("end_to_end_bound_ranking: binary generators only");
  const double task_regret = ranking_regret(q, q_prime, q_hat, q_hat_prime);
  const ProbVec qv = ProbVec::create({q, 1.0 - q});
  const ProbVec qv_hat = ProbVec::create({q_hat, 1.0 - q_hat});
  const ProbVec qv2 = ProbVec::create({q_prime, 1.0 - q_prime});
  const ProbVec qv2_hat = ProbVec::create({q_hat_prime, 1.0 - q_hat_prime});
  const double r1 = surrogate_regret(g, qv, qv_hat);
  const double r2 = surrogate_regret(g, qv2, qv2_hat);

  ChainReport report;
  report.task = Task::Ranking;
  report.task_regret = task_regret;
  report.surrogate = r1 + r2;
  try {
    // |q - q_hat| = 2^(-1/p) ||q - q_hat||_p on the binary simplex
    const double scale = std::pow(2.0, -p.inv());
    report.p_norm_bound =
        scale * (inverse_modulus(curve, 0.5 * r1) + inverse_modulus(curve, 0.5 * r2));
  } catch (const NonInvertibleError&) {
    report.vacuous = true;
    report.pass = false;
    return report;
  }
  report.chained_bound = report.p_norm_bound;
  report.pass = task_regret <= report.chained_bound + kChainTol;
  return report;
}

}  // namespace pregret
