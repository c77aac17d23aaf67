// proper-regret: proper losses on the probability simplex, their moduli of
// convexity, order diagnostics, and regret-bound verification sweeps.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pregret/io.hpp"
#include "pregret/order.hpp"
#include "pregret/verify.hpp"

namespace {

using namespace pregret;

struct Options {
  std::string family = "shannon";
  double alpha = 2.0;
  int N = 2;
  std::string p = "1";
  std::string r;
  int samples = 10000;
  std::uint64_t seed = 0;
  std::string method = "closed";
  std::string order_method = "auto";
  std::string out;
  std::string format = "csv";
  int restarts = 64;
  int grid_res = 0;
  int threads = 1;
  double kappa = 1.0;
  std::string task = "all";
  std::string suite;
};

std::vector<double> parse_r_grid(const std::string& text, double diameter) {
  if (text.empty()) {
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(diameter * i / 40.0);
    return grid;
  }
  std::vector<double> grid;
  if (text.find(',') != std::string::npos) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t comma = text.find(',', pos);
      const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                           : comma - pos);
      if (!item.empty()) grid.push_back(std::stod(item));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return grid;
  }
  const std::size_t c1 = text.find(':');
  if (c1 == std::string::npos) return {std::stod(text)};
  const std::size_t c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw InputError("r grid must be start:stop:step or start:stop:logK");
  const double start = std::stod(text.substr(0, c1));
  const double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const std::string tail = text.substr(c2 + 1);
  if (tail.rfind("log", 0) == 0) {
    const int k = std::stoi(tail.substr(3));
    if (k < 2) throw InputError("log grid needs at least 2 points");
    if (!(start > 0.0) || !(stop > start)) throw InputError("log grid needs 0 < start < stop");
    const double ratio = std::log(stop / start) / (k - 1);
    for (int i = 0; i < k; ++i) grid.push_back(start * std::exp(ratio * i));
    grid.back() = stop;
    return grid;
  }
  const double step = std::stod(tail);
  if (!(step > 0.0)) throw InputError("r grid step must be positive");
  for (double r = start; r <= stop + 1e-12; r += step) grid.push_back(std::min(r, stop));
  if (grid.empty() || std::fabs(grid.back() - stop) > 1e-9) grid.push_back(stop);
  return grid;
}

Generator make_generator(const Options& opt) {
  return Generator::make(parse_family(opt.family), opt.alpha, opt.N);
}

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file '" + path + "'");
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

int cmd_modulus(const Options& opt) {
  const Generator gen = make_generator(opt);
  const PNorm p = PNorm::parse(opt.p);
  const std::vector<double> grid = parse_r_grid(opt.r, p.simplex_diameter());
  SearchBudget budget;
  budget.restarts = opt.restarts;
  budget.seed = opt.seed;

  if ((opt.method == "closed" || opt.method == "both") && !closed_form_supported(gen, p)) {
    std::cerr << "error: no closed-form modulus for " << gen.name() << " at (N=" << gen.dim()
              << ", p=" << p.to_string() << "); rerun with --method brute\n";
    return 2;
  }
  std::string payload;
  if (opt.method == "closed" || opt.method == "brute") {
    const CurveMethod method =
        opt.method == "closed" ? CurveMethod::ClosedForm : CurveMethod::BruteForce;
    const ModulusCurve curve = modulus_curve(gen, p, grid, method, budget, opt.threads);
    payload = opt.format == "json" ? curve_json(curve).dump(2) + "\n" : curve_csv(curve);
  } else if (opt.method == "both") {
    const ModulusCurve closed = modulus_curve(gen, p, grid, CurveMethod::ClosedForm, budget,
                                              opt.threads);
    const ModulusCurve brute = modulus_curve(gen, p, grid, CurveMethod::BruteForce, budget,
                                             opt.threads);
    if (opt.format == "json") {
      double max_diff = 0.0;
      for (std::size_t i = 0; i < closed.points.size(); ++i) {
        max_diff = std::max(max_diff, std::fabs(closed.points[i].omega - brute.points[i].omega));
      }
      Json j;
      j["closed"] = curve_json(closed);
      j["brute"] = curve_json(brute);
      j["max_abs_diff"] = max_diff;
      payload = j.dump(2) + "\n";
    } else {
      payload = curve_comparison_csv(closed, brute);
    }
  } else {
    std::cerr << "error: unknown --method '" << opt.method << "'\n";
    return 2;
  }
  write_output(opt.out, payload);
  return 0;
}

int cmd_order(const Options& opt) {
  if (opt.family == "counterexample") {
    std::vector<double> grid = opt.r.empty() ? parse_r_grid("1e-3:1:log200", 1.0)
                                             : parse_r_grid(opt.r, 1.0);
    const CounterexampleReport report = counterexample_curve(grid);
    Json summary = barrier_json(order_barrier_check(report.profile));
    const bool pass = report.derivative_nonnegative && report.sigma_reaches_two &&
                      report.omega_over_r_bounded;
    summary["pass"] = pass;
    summary["omega_monotone"] = report.derivative_nonnegative;
    summary["max_sigma_small_r"] = report.max_sigma_small_r;
    summary["omega_over_r_bounded"] = report.omega_over_r_bounded;
    if (opt.format == "json") {
      Json j;
      j["summary"] = summary;
      j["curve"] = curve_json(report.curve);
      write_output(opt.out, j.dump(2) + "\n");
    } else {
      write_output(opt.out, profile_csv(report.profile));
      write_output(opt.out.empty() ? "" : opt.out + ".summary.json", summary.dump(2) + "\n");
    }
    return pass ? 0 : 1;
  }

  const Generator gen = make_generator(opt);
  const PNorm p = PNorm::parse(opt.p);
  const double diameter = p.simplex_diameter();
  const std::vector<double> grid = opt.r.empty()
                                       ? parse_r_grid("1e-3:" + format_double(diameter) + ":log200",
                                                      diameter)
                                       : parse_r_grid(opt.r, diameter);
  if (opt.order_method == "closed" && !closed_form_supported(gen, p)) {
    std::cerr << "error: no closed-form modulus for " << gen.name() << " at (N=" << gen.dim()
              << ", p=" << p.to_string() << "); rerun with --method brute\n";
    return 2;
  }
  OrderConfig config;
  config.method = closed_form_supported(gen, p) && opt.order_method != "brute"
                      ? CurveMethod::ClosedForm
                      : CurveMethod::BruteForce;
  config.budget.restarts = opt.restarts;
  config.budget.seed = opt.seed;
  config.threads = opt.threads;
  const OrderProfile profile = order_profile(gen, p, grid, config);
  const BarrierReport barrier = order_barrier_check(profile);
  Json summary = barrier_json(barrier);
  if (opt.format == "json") {
    Json j;
    j["family"] = gen.name();
    j["alpha"] = gen.alpha();
    j["N"] = gen.dim();
    j["p"] = p.to_string();
    j["summary"] = summary;
    Json points = Json::array();
    for (std::size_t i = 0; i < profile.r.size(); ++i) {
      Json pt;
      pt["r"] = profile.r[i];
      pt["omega"] = profile.omega[i];
      pt["sigma"] = profile.sigma[i];
      pt["K"] = profile.K[i];
      points.push_back(pt);
    }
    j["points"] = points;
    write_output(opt.out, j.dump(2) + "\n");
  } else {
    write_output(opt.out, profile_csv(profile));
    write_output(opt.out.empty() ? "" : opt.out + ".summary.json", summary.dump(2) + "\n");
  }
  const bool fail = barrier.applicable && !barrier.pass;
  return fail ? 1 : 0;
}

int cmd_verify(const Options& opt) {
  const PNorm p = PNorm::parse(opt.p);
  std::vector<SweepReport> reports;
  if (opt.suite == "properness") {
    const int res = opt.grid_res > 0 ? opt.grid_res : (opt.N == 2 ? 100 : 30);
    reports.push_back(verify_properness(make_generator(opt), res));
  } else if (opt.suite == "regret-bound") {
    reports.push_back(verify_regret_bound(make_generator(opt), p, opt.samples, opt.seed,
                                          opt.threads));
  } else if (opt.suite == "strong") {
    reports.push_back(verify_strong(make_generator(opt), opt.kappa, opt.samples, opt.seed,
                                    opt.threads));
  } else if (opt.suite == "savage") {
    reports.push_back(verify_savage(make_generator(opt), opt.samples, opt.seed, opt.threads));
  } else if (opt.suite == "affine") {
    reports.push_back(verify_affine(make_generator(opt), opt.samples, opt.seed, opt.threads));
  } else if (opt.suite == "downstream") {
    std::vector<Task> tasks;
    if (opt.task == "argmax") tasks = {Task::Classification};
    else if (opt.task == "noisy") tasks = {Task::NoisyLabels};
    else if (opt.task == "ranking") tasks = {Task::Ranking};
    else if (opt.task == "all") tasks = {Task::Classification, Task::NoisyLabels, Task::Ranking};
    else {
      std::cerr << "error: unknown --task '" << opt.task << "'\n";
      return 2;
    }
    for (Task task : tasks) {
      reports.push_back(verify_task_bounds(task, opt.N, p, opt.samples, opt.seed, opt.threads));
    }
  } else {
    std::cerr << "error: unknown verify suite '" << opt.suite << "'\n";
    return 2;
  }
  Json j = Json::array();
  bool pass = true;
  for (const auto& report : reports) {
    j.push_back(sweep_json(report));
    pass = pass && report.pass;
  }
  write_output(opt.out, j.dump(2) + "\n");
  return pass ? 0 : 1;
}

int cmd_table1(const Options& opt) {
  struct Row {
    Family family;
    double alpha;
  };
  const std::vector<Row> rows = {
      {Family::Shannon, 0.0},          {Family::SquaredAlphaNorm, 1.5},
      {Family::SquaredAlphaNorm, 2.0}, {Family::SquaredAlphaNorm, 3.0},
      {Family::AlphaNorm, 1.5},        {Family::AlphaNorm, 2.0},
      {Family::AlphaNorm, 4.0},        {Family::Tsallis, 1.5},
      {Family::Tsallis, 2.5},          {Family::Tsallis, 4.0},
      {Family::MaxPower, 1.5},         {Family::MaxPower, 2.0},
      {Family::MaxPower, 3.0},
  };
  const PNorm p1 = PNorm::finite(1.0);
  SearchBudget budget;
  budget.restarts = opt.restarts;
  budget.seed = opt.seed;
  std::vector<double> grid;
  for (int i = 0; i < 40; ++i) grid.push_back(0.05 + (1.95 - 0.05) * i / 39.0);

  std::string csv = "family,alpha,check,value,status\n";
  Json rows_json = Json::array();
  for (const auto& row : rows) {
    const Generator gen = Generator::make(row.family, row.alpha, 2);
    Json rj;
    rj["family"] = gen.name();
    rj["alpha"] = row.alpha;
    if (!closed_form_supported(gen, p1)) {
      csv += gen.name() + "," + format_double(row.alpha) + ",closed_vs_brute,,brute-force-only\n";
      rj["check"] = "closed_vs_brute";
      rj["value"] = nullptr;
      rj["status"] = "brute-force-only";
      rows_json.push_back(rj);
      continue;
    }
    double max_err = 0.0;
    for (double r : grid) {
      const double closed = modulus_closed_form(gen, p1, r);
      const double brute = modulus_brute_force(gen, p1, r, budget).omega;
      max_err = std::max(max_err, std::fabs(closed - brute));
    }
    csv += gen.name() + "," + format_double(row.alpha) + ",closed_vs_brute," +
           format_double(max_err) + "," + (max_err < 1e-6 ? "ok" : "mismatch") + "\n";
    rj["check"] = "closed_vs_brute";
    rj["value"] = max_err;
    rj["status"] = max_err < 1e-6 ? "ok" : "mismatch";
    rows_json.push_back(rj);
  }

  // loss-name cross-check: the Shannon generator induces the log loss
  const Generator shannon = Generator::shannon(2);
  double max_dev = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double x = i / 11.0;
    const ProbVec q_hat = ProbVec::create({x, 1.0 - x});
    const LossEval l = savage_loss(shannon, q_hat);
    max_dev = std::max(max_dev, std::fabs(l.values[0] + std::log(x)));
    max_dev = std::max(max_dev, std::fabs(l.values[1] + std::log(1.0 - x)));
  }
  csv += "shannon,0,log_loss_crosscheck," + format_double(max_dev) + "," +
         (max_dev < 1e-10 ? "ok" : "mismatch") + "\n";
  Json cj;
  cj["family"] = "shannon";
  cj["alpha"] = 0.0;
  cj["check"] = "log_loss_crosscheck";
  cj["value"] = max_dev;
  cj["status"] = max_dev < 1e-10 ? "ok" : "mismatch";
  rows_json.push_back(cj);

  write_output(opt.out, opt.format == "json" ? rows_json.dump(2) + "\n" : csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Proper losses, moduli of convexity, and surrogate regret diagnostics"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--family", opt.family,
                    "shannon|sq-alpha-norm|alpha-norm|tsallis|max-power (aliases: brier, log)");
    sub->add_option("--alpha", opt.alpha, "family parameter (> 1)");
    sub->add_option("--N", opt.N, "simplex dimension (>= 2)");
    sub->add_option("--p", opt.p, "p-norm index: 1, 2, inf, or a decimal >= 1");
    sub->add_option("--seed", opt.seed, "sweep / search seed");
    sub->add_option("--out", opt.out, "output path (default: stdout)");
    sub->add_option("--format", opt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", opt.threads, "worker threads (results are thread-count independent)");
    sub->add_option("--restarts", opt.restarts, "restarts for the N >= 3 search");
  };

  CLI::App* modulus = app.add_subcommand("modulus", "modulus-of-convexity curves");
  add_common(modulus);
  modulus->add_option("--r", opt.r, "r grid: start:stop:step, start:stop:logK, or comma list");
  modulus->add_option("--method", opt.method, "closed|brute|both")
      ->check(CLI::IsMember({"closed", "brute", "both"}));

  CLI::App* order = app.add_subcommand("order", "Simonenko order / strong-convexity profile");
  add_common(order);
  order->add_option("--r", opt.r, "r grid (needs resolution near 0)");
  order->add_option("--method", opt.order_method, "auto|closed|brute")
      ->check(CLI::IsMember({"auto", "closed", "brute"}));

  CLI::App* verify = app.add_subcommand("verify", "verification sweeps");
  add_common(verify);
  verify->add_option("suite", opt.suite,
                     "properness|regret-bound|strong|savage|affine|downstream")
      ->required();
  verify->add_option("--samples", opt.samples, "sweep sample count");
  verify->add_option("--kappa", opt.kappa, "strong properness level");
  verify->add_option("--grid-res", opt.grid_res, "properness grid resolution");
  verify->add_option("--task", opt.task, "argmax|noisy|ranking|all");

  CLI::App* table1 = app.add_subcommand("table1", "closed-form vs oracle reproduction");
  add_common(table1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(modulus)) return cmd_modulus(opt);
    if (app.got_subcommand(order)) return cmd_order(opt);
    if (app.got_subcommand(verify)) return cmd_verify(opt);
    if (app.got_subcommand(table1)) return cmd_table1(opt);
  } catch (const pregret::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
