// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 11 shells out to the CLI whose path is argv[1].

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pregret/order.hpp"
#include "pregret/verify.hpp"

using namespace pregret;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::pair<Family, double>> table1_rows() {
  return {{Family::Shannon, 0.0},          {Family::SquaredAlphaNorm, 1.5},
          {Family::SquaredAlphaNorm, 2.0}, {Family::SquaredAlphaNorm, 3.0},
          {Family::AlphaNorm, 2.0},        {Family::AlphaNorm, 4.0},
          {Family::Tsallis, 1.5},          {Family::Tsallis, 2.5},
          {Family::Tsallis, 4.0},          {Family::MaxPower, 1.5},
          {Family::MaxPower, 2.0},         {Family::MaxPower, 3.0}};
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(n);
  const double ratio = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out.push_back(lo * std::exp(ratio * i));
  out.back() = hi;
  return out;
}

void criterion1_table_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  const PNorm p1 = PNorm::finite(1.0);
  double worst = 0.0;
  std::string worst_label;
  for (const auto& [family, alpha] : table1_rows()) {
    const Generator gen = Generator::make(family, alpha, 2);
    for (int i = 0; i < 40; ++i) {
      const double r = 0.05 + (1.95 - 0.05) * i / 39.0;
      const double closed = modulus_closed_form(gen, p1, r);
      const double brute = modulus_brute_force(gen, p1, r).omega;
      const double err = std::fabs(closed - brute);
      if (err > worst) {
        worst = err;
        worst_label = gen.name() + "(alpha=" + std::to_string(alpha) + ")";
      }
    }
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream detail;
  detail << "max |closed - brute| = " << worst << " (worst: " << worst_label << "), "
         << elapsed << " s";
  report(1, "binary closed forms vs exact-scan oracle (< 1e-6, < 30 s)",
         worst < 1e-6 && elapsed < 30.0, detail.str());
}

void criterion2_general_n_shannon() {
  const auto t0 = std::chrono::steady_clock::now();
  const PNorm p2 = PNorm::finite(2.0);
  const Generator shannon3 = Generator::shannon(3);
  SearchBudget budget;
  budget.seed = 2024;
  double worst_omega = 0.0, worst_minimizer = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double r = 0.07 + (1.33 - 0.07) * i / 19.0;
    const auto res = modulus_brute_force(shannon3, p2, r, budget);
    worst_omega = std::max(worst_omega, std::fabs(res.omega - modulus_closed_form(shannon3, p2, r)));
    const double b = r / std::sqrt(2.0);
    std::vector<double> want = {(1 + b) / 2, (1 - b) / 2, 0.0};
    std::sort(want.begin(), want.end());
    for (const ProbVec* endpoint : {&res.minimizer.q, &res.minimizer.q_check}) {
      std::vector<double> got(endpoint->components());
      std::sort(got.begin(), got.end());
      for (int k = 0; k < 3; ++k) {
        const double dev = std::fabs(got[static_cast<std::size_t>(k)] -
                                     (endpoint == &res.minimizer.q ? want[static_cast<std::size_t>(k)]
                                                                   : want[static_cast<std::size_t>(k)]));
        worst_minimizer = std::max(worst_minimizer, dev);
      }
    }
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream detail;
  detail << "max omega gap = " << worst_omega << ", max minimizer deviation = " << worst_minimizer
         << ", " << elapsed << " s";
  report(2, "general-N Shannon modulus at p=2: heuristic vs closed form (< 1e-3, < 120 s)",
         worst_omega < 1e-3 && worst_minimizer < 1e-3 && elapsed < 120.0, detail.str());
}

void criterion3_regret_bound_sweep() {
  bool pass = true;
  double worst = -1e300;
  std::string worst_label;
  for (const auto& [family, alpha] : table1_rows()) {
    const Generator gen = Generator::make(family, alpha, 2);
    for (double p : {1.0, 2.0}) {
      const SweepReport rep = verify_regret_bound(gen, PNorm::finite(p), 10000, 42, 4);
      pass = pass && rep.pass;
      if (rep.worst_margin > worst) {
        worst = rep.worst_margin;
        worst_label = gen.name() + " p=" + std::to_string(static_cast<int>(p));
      }
    }
  }
  std::ostringstream detail;
  detail << "worst (omega - R/2) = " << worst << " (" << worst_label
         << "), tolerance 1e-9, 10^4 pairs per family per p in {1,2}";
  report(3, "omega(||q - q_hat||_p) <= R/2 sweep, zero violations", pass, detail.str());
}

void criterion4_strong_properness() {
  const SweepReport shannon = verify_strong(Generator::shannon(2), 1.0, 10000, 42, 4);
  const auto brier = strong_properness_test(Generator::squared_alpha_norm(2.0, 2), 2.0, 10000, 42, 4);
  const SweepReport brier_chain = verify_strong(Generator::squared_alpha_norm(2.0, 2), 2.0, 10000, 42, 4);
  const bool ratio_ok = brier.min_ratio >= 2.0 - 1e-9 && brier.min_ratio <= 2.0 + 1e-6;
  std::ostringstream detail;
  detail << "shannon(kappa=1) pass=" << shannon.pass << ", brier min ratio = "
         << std::setprecision(17) << brier.min_ratio << ", chain pass=" << brier_chain.pass;
  report(4, "strong properness: shannon kappa=1, brier kappa=2 with ratio in [2, 2+1e-6]",
         shannon.pass && brier.pass && ratio_ok && brier_chain.pass, detail.str());
}

void criterion5_order_barrier() {
  const PNorm p1 = PNorm::finite(1.0);
  const auto grid = logspace(1e-3, 1.9, 80);
  bool pass = true;
  std::ostringstream detail;
  for (const auto& [family, alpha] : std::vector<std::pair<Family, double>>{
           {Family::Shannon, 0.0},
           {Family::SquaredAlphaNorm, 2.0},
           {Family::Tsallis, 1.5},
           {Family::Tsallis, 2.5},
           {Family::SquaredAlphaNorm, 1.5}}) {
    const Generator gen = Generator::make(family, alpha, 2);
    const OrderProfile profile = order_profile(gen, p1, grid);
    double sigma_small = -1e300;
    for (std::size_t i = 0; i < 10 && i < profile.sigma.size(); ++i) {
      sigma_small = std::max(sigma_small, profile.sigma[i]);
    }
    if (sigma_small < 1.95) pass = false;
    detail << gen.name() << (alpha > 0 ? "(" + std::to_string(alpha).substr(0, 3) + ")" : "")
           << " sigma=" << sigma_small << " ";
  }
  // exact powers reproduce their exponent
  for (const auto& [gen, exponent] : std::vector<std::pair<Generator, double>>{
           {Generator::squared_alpha_norm(2.0, 2), 2.0},
           {Generator::max_power(2.0, 2), 2.0},
           {Generator::max_power(3.0, 2), 3.0}}) {
    const OrderProfile profile = order_profile(gen, p1, grid);
    double worst = 0.0;
    for (double s : profile.sigma) worst = std::max(worst, std::fabs(s - exponent));
    if (worst > 1e-4) pass = false;
    detail << gen.name() << " |sigma-" << exponent << "|=" << worst << " ";
  }
  report(5, "order barrier: sigma estimates >= 1.95 near 0; exact powers within 1e-4", pass,
         detail.str());
}

void criterion6_kappa_diagnostics() {
  const PNorm p1 = PNorm::finite(1.0);
  const auto grid = logspace(1e-3, 1.9, 80);
  bool pass = true;
  std::ostringstream detail;
  for (const auto& [family, alpha] : std::vector<std::pair<Family, double>>{
           {Family::Shannon, 0.0},
           {Family::SquaredAlphaNorm, 1.5},
           {Family::SquaredAlphaNorm, 2.0},
           {Family::SquaredAlphaNorm, 3.0},
           {Family::Tsallis, 1.5},
           {Family::Tsallis, 2.5},
           {Family::Tsallis, 4.0},
           {Family::AlphaNorm, 2.0}}) {
    const Generator gen = Generator::make(family, alpha, 2);
    const OrderProfile profile = order_profile(gen, p1, grid);
    double liminf_est = 1e300;
    for (std::size_t i = 0; i < 10 && i < profile.K.size(); ++i) {
      liminf_est = std::min(liminf_est, profile.K[i]);
    }
    const double gap = std::fabs(profile.kappa_estimate - liminf_est);
    if (gap >= 1e-2) {
      pass = false;
      detail << gen.name() << " gap=" << gap << " ";
    }
  }
  // 4-norm generator: kappa collapses (condition C1 fails)
  const OrderProfile an4 =
      order_profile(Generator::alpha_norm(4.0, 2), p1, logspace(1e-2, 1.9, 80));
  if (!(an4.kappa_estimate < 1e-2)) pass = false;
  detail << "alpha-norm(4) kappa=" << an4.kappa_estimate;
  report(6, "kappa = min K reproduces the r->0 limit (1e-2); 4-norm kappa < 1e-2", pass,
         detail.str());
}

void criterion7_counterexample() {
  const CounterexampleReport rep = counterexample_curve(logspace(1e-3, 1.0, 200));
  std::ostringstream detail;
  detail << "omega' >= 0: " << rep.derivative_nonnegative
         << ", max sigma on (0, 0.1] = " << rep.max_sigma_small_r
         << ", omega/r bounded: " << rep.omega_over_r_bounded;
  report(7, "oscillating modulus: monotone on the log grid, sigma reaches 2 - 0.05",
         rep.derivative_nonnegative && rep.max_sigma_small_r >= 1.95 && rep.omega_over_r_bounded,
         detail.str());
}

void criterion8_affine_invariance() {
  bool pass = true;
  double worst = 0.0;
  for (const auto& [family, alpha] : table1_rows()) {
    const Generator gen = Generator::make(family, alpha, 2);
    const SweepReport rep = verify_affine(gen, 1000, 77, 4);
    pass = pass && rep.pass;
    worst = std::max(worst, rep.worst_margin + 1e-10);
  }
  std::ostringstream detail;
  detail << "max |gap(f) - gap(f + affine)| = " << worst << " over 10^3 pairs per family";
  report(8, "jensen gaps and regrets invariant under affine shifts (1e-10)", pass, detail.str());
}

void criterion9_downstream() {
  bool pass = true;
  std::ostringstream detail;
  for (double p : {1.0, 2.0}) {
    const SweepReport argmax = verify_task_bounds(Task::Classification, 3, PNorm::finite(p),
                                                  10000, 31, 4);
    const SweepReport noisy = verify_task_bounds(Task::NoisyLabels, 3, PNorm::finite(p),
                                                 10000, 32, 4);
    const SweepReport ranking = verify_task_bounds(Task::Ranking, 2, PNorm::finite(p),
                                                   10000, 33, 4);
    pass = pass && argmax.pass && noisy.pass && ranking.pass;
    detail << "p=" << static_cast<int>(p) << " violations: " << argmax.violations << "/"
           << noisy.violations << "/" << ranking.violations << " ";
  }
  report(9, "task bounds (argmax, noisy labels + round-trip, ranking) on 10^4 samples", pass,
         detail.str());
}

void criterion10_properness_certification() {
  bool pass = true;
  std::ostringstream detail;
  for (const auto& [family, alpha] : table1_rows()) {
    const Generator gen = Generator::make(family, alpha, 2);
    const CertReport rep = properness_certificate(gen, 100);
    if (!rep.pass) {
      pass = false;
      detail << gen.name() << "(N=2) failed ";
    }
  }
  for (const auto& [family, alpha] : table1_rows()) {
    if (family == Family::MaxPower) continue;  // not strict for N >= 3
    const Generator gen = Generator::make(family, alpha, 3);
    const CertReport rep = properness_certificate(gen, 30);
    if (!rep.pass) {
      pass = false;
      detail << gen.name() << "(N=3) failed ";
    }
  }
  // a corrupted selector must be caught with a witness
  const Generator shannon = Generator::shannon(2);
  const Generator corrupted = Generator::custom(
      "corrupted", 2, [&](const ProbVec& q) { return eval_f(shannon, q); },
      [&](const ProbVec& q) {
        ExtendedVec v = subgradient(shannon, q);
        for (auto& x : v.v) {
          if (std::isfinite(x)) x = -x;
        }
        return v;
      },
      true, /*validate=*/false);
  const CertReport bad = properness_certificate(corrupted, 40);
  const bool caught = !bad.pass && bad.worst_witness.has_value();
  if (!caught) {
    pass = false;
    detail << "corrupted selector not caught ";
  }
  detail << "grid certificates at resolution 100 (N=2) and 30 (N=3); corrupted selector caught="
         << caught;
  report(10, "properness certification for all strict generators", pass, detail.str());
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion11_determinism(const std::string& cli) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "proper_regret_acceptance";
  fs::create_directories(dir);
  struct Cmd {
    std::string args;
    const char* label;
  };
  const std::vector<Cmd> cmds = {
      {"modulus --family shannon --N 3 --p 2 --method brute --r 0.1:1.3:0.3 --seed 7", "modulus-heuristic"},
      {"modulus --family tsallis --alpha 1.5 --N 2 --p 1 --method both --r 0:2:0.1", "modulus-both"},
      {"verify regret-bound --family tsallis --alpha 1.5 --samples 3000 --seed 42", "verify-regret"},
      {"verify downstream --task all --N 3 --samples 3000 --seed 9", "verify-downstream"},
  };
  bool pass = true;
  std::ostringstream detail;
  for (const auto& cmd : cmds) {
    std::vector<std::string> outputs;
    for (const auto& [run, threads] : std::vector<std::pair<int, int>>{{0, 1}, {1, 1}, {2, 4}}) {
      const fs::path out = dir / (std::string(cmd.label) + "_" + std::to_string(run) + ".out");
      const std::string full = cli + " " + cmd.args + " --threads " + std::to_string(threads) +
                               " --out " + out.string() + " >/dev/null 2>&1";
      const int rc = std::system(full.c_str());
      if (rc != 0) {
        pass = false;
        detail << cmd.label << " exited " << rc << " ";
      }
      outputs.push_back(slurp(out));
    }
    if (outputs[0].empty() || outputs[0] != outputs[1] || outputs[0] != outputs[2]) {
      pass = false;
      detail << cmd.label << " outputs differ ";
    }
  }
  if (pass) detail << "4 commands, re-run and 1-vs-4-thread outputs byte-identical";
  report(11, "CLI determinism across runs and thread counts", pass, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "./proper-regret";
  criterion1_table_reproduction();
  criterion2_general_n_shannon();
  criterion3_regret_bound_sweep();
  criterion4_strong_properness();
  criterion5_order_barrier();
  criterion6_kappa_diagnostics();
  criterion7_counterexample();
  criterion8_affine_invariance();
  criterion9_downstream();
  criterion10_properness_certification();
  criterion11_determinism(cli);
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", g_failures);
  return 1;
}
