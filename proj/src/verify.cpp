#include "pregret/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pregret/parallel.hpp"
#include "pregret/rng.hpp"

namespace pregret {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SampleOutcome {
  double margin = -kInf;  // lhs - rhs, worst over the sample's checks
  bool violated = false;
  Json witness;
};

// deterministic reduction in index order
SweepReport reduce(std::string suite, const Generator* g, std::string p, int samples,
                   const std::vector<SampleOutcome>& outcomes) {
  SweepReport report;
  report.suite = std::move(suite);
  if (g) {
    report.family = g->name();
    report.alpha = g->alpha();
    report.N = g->dim();
  }
  report.p = std::move(p);
  report.samples = samples;
  report.worst_margin = -kInf;
  std::size_t arg = outcomes.size();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].violated) ++report.violations;
    if (outcomes[i].margin > report.worst_margin) {
      report.worst_margin = outcomes[i].margin;
      arg = i;
    }
  }
  if (arg < outcomes.size()) report.example_witness = outcomes[arg].witness;
  report.pass = report.violations == 0;
  return report;
}

Json pair_witness(const ProbVec& q, const ProbVec& q_hat, double lhs, double rhs) {
  Json j;
  Json qa = Json::array(), qb = Json::array();
  for (double x : q.components()) qa.push_back(x);
  for (double x : q_hat.components()) qb.push_back(x);
  j["q"] = qa;
  j["q_hat"] = qb;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  return j;
}

}  // namespace

Json sweep_json(const SweepReport& report) {
  Json j;
  j["task"] = report.suite;
  j["p"] = report.p.empty() ? Json(nullptr) : Json(report.p);
  j["family"] = report.family.empty() ? Json(nullptr) : Json(report.family);
  if (!report.family.empty()) {
    j["alpha"] = report.alpha;
    j["N"] = report.N;
  }
  j["samples"] = report.samples;
  j["violations"] = report.violations;
  j["worst_margin"] = std::isfinite(report.worst_margin) ? Json(report.worst_margin) : Json(nullptr);
  j["example_witness"] = report.example_witness;
  j["pass"] = report.pass;
  return j;
}

std::vector<double> sweep_r_grid(double diameter, int uniform_points) {
  std::vector<double> grid;
  grid.push_back(0.0);
  for (double frac : {1e-6, 1e-5, 1e-4, 3e-4, 1e-3}) grid.push_back(diameter * frac);
  const double step = diameter / (uniform_points - 1);
  for (int i = 1; i < uniform_points; ++i) grid.push_back(step * i);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

ModulusCurve sweep_curve(const Generator& g, const PNorm& p, std::uint64_t seed, int threads) {
  const std::vector<double> grid = sweep_r_grid(p.simplex_diameter());
  if (closed_form_supported(g, p)) {
    return modulus_curve(g, p, grid, CurveMethod::ClosedForm, {}, threads);
  }
  SearchBudget budget;
  budget.seed = seed;
  budget.scan_points = 1001;  // bracket only; golden section does the polishing
  if (g.dim() > 2) budget.restarts = 24;
  return modulus_curve(g, p, grid, CurveMethod::BruteForce, budget, threads);
}

SweepReport verify_regret_bound(const Generator& g, const PNorm& p, int samples,
                                std::uint64_t seed, int threads) {
  SearchBudget budget;
  budget.seed = mix_seed(seed, 0xC0);
  budget.scan_points = 1001;
  if (g.dim() > 2) budget.restarts = 24;
  const ModulusCurve curve =
      modulus_curve(g, p, sweep_r_grid(p.simplex_diameter()), CurveMethod::BruteForce,
                    budget, threads);
  const MonotoneCubic omega = curve_interpolant(curve);

  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(samples));
  parallel_for(outcomes.size(), threads, [&](std::size_t i) {
    const ProbVec q = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i));
    const ProbVec q_hat = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i + 1));
    const double r = distance(q, q_hat, p);
    const double regret = surrogate_regret(g, q, q_hat);
    if (regret == kInf) return;  // bound holds trivially
    const double lhs = std::max(0.0, omega(r));
    const double rhs = 0.5 * regret;
    outcomes[i].margin = lhs - rhs;
    outcomes[i].violated = lhs > rhs + 1e-9;
    outcomes[i].witness = pair_witness(q, q_hat, lhs, rhs);
  });
  return reduce("regret-bound", &g, p.to_string(), samples, outcomes);
}

SweepReport verify_strong(const Generator& g, double kappa, int samples,
                          std::uint64_t seed, int threads) {
  const PNorm two = PNorm::finite(2.0);
  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(samples));
  parallel_for(outcomes.size(), threads, [&](std::size_t i) {
    const ProbVec q = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i));
    const ProbVec q_hat = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i + 1));
    const double d = distance(q, q_hat, two);
    // same resolution floor as strong_properness_test: the regret of
    // near-coincident pairs is cancellation noise
    if (0.5 * d * d < 1e-6) return;
    const double regret = surrogate_regret(g, q, q_hat);
    if (regret == kInf) return;
    // strong properness at level kappa
    const double lhs = 0.5 * kappa * d * d;
    double margin = lhs - regret;
    bool violated = lhs > regret + 1e-9;
    // the derived 1/2-order chain
    const double chain_rhs = std::sqrt(2.0 * regret / kappa);
    margin = std::max(margin, d - chain_rhs);
    violated = violated || d > chain_rhs + 1e-9;
    outcomes[i].margin = margin;
    outcomes[i].violated = violated;
    outcomes[i].witness = pair_witness(q, q_hat, lhs, regret);
  });
  SweepReport report = reduce("strong", &g, "2", samples, outcomes);
  return report;
}

SweepReport verify_savage(const Generator& g, int samples, std::uint64_t seed, int threads) {
  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(samples));
  parallel_for(outcomes.size(), threads, [&](std::size_t i) {
    const ProbVec q = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i));
    const ProbVec q_hat = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i + 1));
    const double risk = conditional_risk(g, q, q_hat);
    const ExtendedVec v = subgradient(g, q_hat);
    const double tangent = -eval_f(g, q_hat) - extended_inner_diff(v, q, q_hat);
    double margin = -kInf;
    bool violated = false;
    if (std::isfinite(risk) && std::isfinite(tangent)) {
      margin = std::fabs(risk - tangent) - 1e-10;
      violated = margin > 0.0;
    } else if (std::isfinite(risk) != std::isfinite(tangent)) {
      margin = kInf;
      violated = true;
    }
    const double self_risk = conditional_risk(g, q, q);
    if (std::isfinite(risk)) {
      const double properness = self_risk - risk - 1e-10;
      if (properness > margin) margin = properness;
      violated = violated || properness > 0.0;
    }
    outcomes[i].margin = margin;
    outcomes[i].violated = violated;
    outcomes[i].witness = pair_witness(q, q_hat, risk, tangent);
  });
  return reduce("savage", &g, "", samples, outcomes);
}

SweepReport verify_affine(const Generator& g, int samples, std::uint64_t seed, int threads) {
  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(samples));
  parallel_for(outcomes.size(), threads, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    std::vector<double> u(static_cast<std::size_t>(g.dim()));
    for (auto& x : u) x = rng.uniform(-1.0, 1.0);
    const double lambda = rng.uniform(-1.0, 1.0);
    const Generator base = g;
    Generator shifted = Generator::custom(
        g.name() + "+affine", g.dim(),
        [base, u, lambda](const ProbVec& q) {
          double s = eval_f(base, q) + lambda;
          for (int k = 0; k < q.dim(); ++k) s += u[static_cast<std::size_t>(k)] * q[static_cast<std::size_t>(k)];
          return s;
        },
        [base, u](const ProbVec& q) {
          ExtendedVec v = subgradient(base, q);
          for (std::size_t k = 0; k < v.v.size(); ++k) {
            if (v.v[k] != -kInf) v.v[k] += u[k];
          }
          return v;
        },
        base.strictly_convex(), /*validate=*/false);

    const ProbVec q = sample_simplex_one(g.dim(), mix_seed(seed, 3 * i + 1));
    const ProbVec q_check = sample_simplex_one(g.dim(), mix_seed(seed, 3 * i + 2));
    double margin = std::fabs(jensen_gap(g, q, q_check) - jensen_gap(shifted, q, q_check));
    const double r0 = surrogate_regret(g, q, q_check);
    const double r1 = surrogate_regret(shifted, q, q_check);
    if (std::isfinite(r0) && std::isfinite(r1)) {
      margin = std::max(margin, std::fabs(r0 - r1));
    } else if (std::isfinite(r0) != std::isfinite(r1)) {
      margin = kInf;
    }
    outcomes[i].margin = margin - 1e-10;
    outcomes[i].violated = outcomes[i].margin > 0.0;
    outcomes[i].witness = pair_witness(q, q_check, margin, 1e-10);
  });
  return reduce("affine", &g, "", samples, outcomes);
}

SweepReport verify_properness(const Generator& g, int resolution) {
  const CertReport cert = properness_certificate(g, resolution);
  SweepReport report;
  report.suite = "properness";
  report.family = cert.family;
  report.alpha = cert.alpha;
  report.N = cert.N;
  report.samples = resolution;
  report.violations = cert.pass ? 0 : 1;
  report.worst_margin = cert.pass ? -cert.margin : (cert.worst_witness ? cert.worst_witness->value : 0.0);
  if (cert.worst_witness) report.example_witness = witness_json(*cert.worst_witness);
  report.pass = cert.pass;
  return report;
}

NoiseMatrix random_noise_matrix(int N, Rng& rng) {
  std::vector<double> c(static_cast<std::size_t>(N * N), 0.0);
  for (int i = 0; i < N; ++i) {
    const double diag = 0.6 + 0.3 * rng.uniform_open();
    double rest = 1.0 - diag;
    std::vector<double> w(static_cast<std::size_t>(N - 1));
    double wsum = 0.0;
    for (auto& x : w) {
      x = rng.uniform_open();
      wsum += x;
    }
    int k = 0;
    for (int j = 0; j < N; ++j) {
      if (j == i) {
        c[static_cast<std::size_t>(i * N + j)] = diag;
      } else {
        c[static_cast<std::size_t>(i * N + j)] = rest * w[static_cast<std::size_t>(k++)] / wsum;
      }
    }
  }
  return NoiseMatrix::create(N, std::move(c));
}

SweepReport verify_task_bounds(Task task, int N, const PNorm& p, int samples,
                               std::uint64_t seed, int threads) {
  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(samples));
  parallel_for(outcomes.size(), threads, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    switch (task) {
      case Task::Classification: {
        const ProbVec q = sample_simplex_one(N, mix_seed(seed, 2 * i));
        const ProbVec q_hat = sample_simplex_one(N, mix_seed(seed, 2 * i + 1));
        const BoundCheck check = zero_one_bound_check(q, q_hat, p);
        outcomes[i].margin = check.lhs - check.rhs;
        outcomes[i].violated = !check.pass;
        outcomes[i].witness = pair_witness(q, q_hat, check.lhs, check.rhs);
        break;
      }
      case Task::NoisyLabels: {
        const NoiseMatrix C = random_noise_matrix(N, rng);
        const ProbVec q = sample_simplex_one(N, mix_seed(seed, 2 * i));
        const ProbVec q_hat = sample_simplex_one(N, mix_seed(seed, 2 * i + 1));
        const BoundCheck check = noisy_label_bound_check(q, q_hat, C, p);
        double margin = check.lhs - check.rhs;
        bool violated = !check.pass;
        if (C.condition_number() < 1e3) {
          const std::vector<double> back = noise_correct(C.mix(q), C);
          double err = 0.0;
          for (int k = 0; k < N; ++k) {
            err = std::max(err, std::fabs(back[static_cast<std::size_t>(k)] -
                                          q[static_cast<std::size_t>(k)]));
          }
          margin = std::max(margin, err - 1e-10);
          violated = violated || err > 1e-10;
        }
        outcomes[i].margin = margin;
        outcomes[i].violated = violated;
        outcomes[i].witness = pair_witness(q, q_hat, check.lhs, check.rhs);
        break;
      }
      case Task::Ranking: {
        const double q = rng.uniform(0.0, 1.0);
        const double qp = rng.uniform(0.0, 1.0);
        const double qh = rng.uniform(0.0, 1.0);
        const double qhp = rng.uniform(0.0, 1.0);
        const BoundCheck check = ranking_bound_check(q, qp, qh, qhp);
        outcomes[i].margin = check.lhs - check.rhs;
        outcomes[i].violated = !check.pass;
        Json w;
        w["q"] = q;
        w["q_prime"] = qp;
        w["q_hat"] = qh;
        w["q_hat_prime"] = qhp;
        w["lhs"] = check.lhs;
        w["rhs"] = check.rhs;
        outcomes[i].witness = w;
        break;
      }
    }
  });
  SweepReport report = reduce(std::string("downstream-") + task_name(task), nullptr,
                              p.to_string(), samples, outcomes);
  report.N = N;
  return report;
}

SweepReport verify_chain(const Generator& g, Task task, const PNorm& p, int samples,
                         std::uint64_t seed, int threads) {
  const ModulusCurve curve = sweep_curve(g, p, mix_seed(seed, 0xCE), threads);
  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(samples));
  parallel_for(outcomes.size(), threads, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    ChainReport chain;
    Json extra;
    switch (task) {
      case Task::Classification: {
        const ProbVec q = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i));
        const ProbVec q_hat = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i + 1));
        chain = end_to_end_bound(g, curve, q, q_hat, p);
        extra = pair_witness(q, q_hat, chain.task_regret, chain.chained_bound);
        break;
      }
      case Task::NoisyLabels: {
        const NoiseMatrix C = random_noise_matrix(g.dim(), rng);
        const ProbVec q = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i));
        const ProbVec q_hat = sample_simplex_one(g.dim(), mix_seed(seed, 2 * i + 1));
        chain = end_to_end_bound_noisy(g, curve, q, q_hat, C, p);
        extra = pair_witness(q, q_hat, chain.task_regret, chain.chained_bound);
        break;
      }
      case Task::Ranking: {
        const double q = rng.uniform(0.0, 1.0);
        const double qp = rng.uniform(0.0, 1.0);
        const double qh = rng.uniform(0.0, 1.0);
        const double qhp = rng.uniform(0.0, 1.0);
        chain = end_to_end_bound_ranking(g, curve, q, qp, qh, qhp, p);
        extra["q"] = q;
        extra["q_prime"] = qp;
        extra["q_hat"] = qh;
        extra["q_hat_prime"] = qhp;
        break;
      }
    }
    outcomes[i].margin = chain.task_regret - chain.chained_bound;
    outcomes[i].violated = !chain.pass;
    extra["vacuous"] = chain.vacuous;
    outcomes[i].witness = extra;
  });
  SweepReport report = reduce(std::string("chain-") + task_name(task), &g, p.to_string(),
                              samples, outcomes);
  return report;
}

}  // namespace pregret
