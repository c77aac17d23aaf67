#include "pregret/proper_loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pregret/parallel.hpp"
#include "pregret/rng.hpp"

namespace pregret {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LossEval savage_loss(const Generator& g, const ProbVec& q_hat) {
  const ExtendedVec v = subgradient(g, q_hat);
  const double f_hat = eval_f(g, q_hat);
  double inner = 0.0;  // <v, q_hat> with 0 * (-inf) = 0 off the support
  for (int i = 0; i < q_hat.dim(); ++i) {
    const double qi = q_hat[static_cast<std::size_t>(i)];
    if (qi > 0.0) inner += v.v[static_cast<std::size_t>(i)] * qi;
  }
  LossEval out;
  out.support_of_estimate = q_hat.support();
  out.values.resize(static_cast<std::size_t>(q_hat.dim()));
  for (int i = 0; i < q_hat.dim(); ++i) {
    const double vi = v.v[static_cast<std::size_t>(i)];
    out.values[static_cast<std::size_t>(i)] = (vi == -kInf) ? kInf : -f_hat - vi + inner;
  }
  return out;
}

double conditional_risk(const Generator& g, const ProbVec& q, const ProbVec& q_hat) {
  const LossEval l = savage_loss(g, q_hat);
  double s = 0.0;
  for (int i = 0; i < q.dim(); ++i) {
    const double qi = q[static_cast<std::size_t>(i)];
    if (qi == 0.0) continue;  // 0 * inf = 0
    const double li = l.values[static_cast<std::size_t>(i)];
    if (li == kInf) return kInf;
    s += qi * li;
  }
  return s;
}

double bayes_risk(const Generator& g, const ProbVec& q) { return -eval_f(g, q); }

double surrogate_regret(const Generator& g, const ProbVec& q, const ProbVec& q_hat) {
  const ExtendedVec v = subgradient(g, q_hat);
  const double inner = extended_inner_diff(v, q, q_hat);
  if (inner == -kInf) return kInf;
  double r = eval_f(g, q) - eval_f(g, q_hat) - inner;
  if (r < 0.0) {
    if (r < -1e-9) throw InputError("surrogate_regret: negative Bregman value (invalid selector?)");
    r = 0.0;
  }
  return r;
}

double jensen_gap(const Generator& g, const ProbVec& q, const ProbVec& q_check) {
  if (q.dim() != q_check.dim()) throw InputError("jensen_gap: dimension mismatch");
  std::vector<double> mid(static_cast<std::size_t>(q.dim()));
  for (int i = 0; i < q.dim(); ++i) {
    mid[static_cast<std::size_t>(i)] =
        0.5 * (q[static_cast<std::size_t>(i)] + q_check[static_cast<std::size_t>(i)]);
  }
  double j = 0.5 * (eval_f(g, q) + eval_f(g, q_check)) - eval_f(g, ProbVec::create(std::move(mid)));
  if (j < 0.0) {
    if (j < -1e-12) throw InputError("jensen_gap: negative gap (generator not convex?)");
    j = 0.0;
  }
  return j;
}

CertReport properness_certificate(const Generator& g, int resolution) {
  if (resolution < 10) throw InputError("properness_certificate: resolution must be >= 10");
  const auto grid = simplex_grid(g.dim(), resolution);  // throws BudgetError past the cap

  CertReport report;
  report.family = g.name();
  report.alpha = g.alpha();
  report.N = g.dim();
  report.pass = true;
  report.margin = kInf;

  // precompute the losses of every candidate estimate once
  std::vector<LossEval> losses;
  losses.reserve(grid.size());
  for (const auto& q_hat : grid) losses.push_back(savage_loss(g, q_hat));

  for (std::size_t iq = 0; iq < grid.size(); ++iq) {
    const ProbVec& q = grid[iq];
    double best = kInf, second = kInf;
    std::size_t arg = 0;
    for (std::size_t ih = 0; ih < grid.size(); ++ih) {
      double L = 0.0;
      for (int i = 0; i < q.dim(); ++i) {
        const double qi = q[static_cast<std::size_t>(i)];
        if (qi == 0.0) continue;
        const double li = losses[ih].values[static_cast<std::size_t>(i)];
        if (li == kInf) {
          L = kInf;
          break;
        }
        L += qi * li;
      }
      if (L < best) {
        second = best;
        best = L;
        arg = ih;
      } else if (L < second) {
        second = L;
      }
    }
    const double self = -eval_f(g, q);  // L(q, q)
    if (!(self <= best + 1e-9)) {
      report.pass = false;
      report.worst_witness = Witness{q, grid[arg], self - best};
      report.detail = "minimum of L(q, .) is not at q";
      return report;
    }
    if (g.strictly_convex()) {
      if (arg != iq) {
        report.pass = false;
        report.worst_witness = Witness{q, grid[arg], best - self};
        report.detail = "grid argmin differs from q for a strict generator";
        return report;
      }
      if (second < kInf) report.margin = std::min(report.margin, second - best);
    }
  }
  if (!std::isfinite(report.margin)) report.margin = 0.0;
  report.detail = g.strictly_convex() ? "strict" : "proper (strictness not asserted)";
  return report;
}

StrongPropernessReport strong_properness_test(const Generator& g, double kappa,
                                              int samples, std::uint64_t seed,
                                              int threads) {
  if (samples < 1) throw InputError("strong_properness_test: samples must be >= 1");
  if (!(kappa > 0.0)) throw InputError("strong_properness_test: kappa must be positive");
  StrongPropernessReport report;
  report.family = g.name();
  report.alpha = g.alpha();
  report.N = g.dim();
  report.kappa = kappa;
  report.samples = samples;

  std::vector<double> ratios(static_cast<std::size_t>(samples), kInf);
  std::vector<std::pair<ProbVec, ProbVec>> pairs(
      static_cast<std::size_t>(samples),
      {ProbVec::create({0.5, 0.5}), ProbVec::create({0.5, 0.5})});
  const PNorm two = PNorm::finite(2.0);
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t i) {
    const ProbVec q = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i));
    const ProbVec q_hat = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i + 1));
    const double d = distance(q, q_hat, two);
    // resolution floor: below it the Bregman value is cancellation noise of
    // the O(1) terms in f, and the ratio carries no information
    if (0.5 * d * d < 1e-6) return;
    const double r = surrogate_regret(g, q, q_hat);
    if (r == kInf) return;  // bound holds vacuously
    ratios[i] = r / (0.5 * d * d);
    pairs[i] = {q, q_hat};
  });
  double min_ratio = kInf;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (ratios[i] < min_ratio) {
      min_ratio = ratios[i];
      arg = i;
    }
  }
  report.min_ratio = min_ratio;
  report.pass = min_ratio >= kappa - 1e-9;
  if (min_ratio < kInf) {
    report.worst_witness = Witness{pairs[arg].first, pairs[arg].second, min_ratio};
  }
  return report;
}

}  // namespace pregret
