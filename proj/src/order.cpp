#include "pregret/order.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>

namespace pregret {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.57721566490153286060651209008240;
}  // namespace

ModulusFunction ModulusFunction::from_closed_form(const Generator& g, const PNorm& p) {
  if (!closed_form_supported(g, p)) {
    throw UnsupportedError("ModulusFunction: no closed form for this combination");
  }
  ModulusFunction fn;
  fn.value_ = [g, p](double r) { return modulus_closed_form(g, p, r); };
  fn.derivative_ = [g, p](double r) { return modulus_closed_form_derivative(g, p, r); };
  fn.r_min_ = 0.0;
  fn.r_max_ = p.simplex_diameter();
  return fn;
}

ModulusFunction ModulusFunction::from_curve(const ModulusCurve& curve) {
  if (curve.points.size() < 2) throw InputError("ModulusFunction: curve too short");
  auto interp = std::make_shared<MonotoneCubic>(curve_interpolant(curve));
  auto xs = std::make_shared<std::vector<double>>();
  auto ys = std::make_shared<std::vector<double>>();
  if (curve.points.front().r > 0.0) {
    xs->push_back(0.0);
    ys->push_back(0.0);
  }
  for (const auto& pt : curve.points) {
    xs->push_back(pt.r);
    ys->push_back(pt.omega);
  }
  ModulusFunction fn;
  fn.value_ = [interp](double r) { return std::max(0.0, (*interp)(r)); };
  // Registered slope estimator for sampled curves: symmetric secants of the
  // raw values at interior knots (second-order accurate on smooth moduli,
  // where the interpolant slope and backward quotients are first-order on
  // uneven grids), one-sided at the ends, interpolant derivative off-knot.
  fn.derivative_ = [interp, xs, ys](double r) {
    const auto& x = *xs;
    const auto& y = *ys;
    auto it = std::lower_bound(x.begin(), x.end(), r - 1e-12 * std::max(1.0, r));
    if (it != x.end()) {
      const std::size_t k = static_cast<std::size_t>(it - x.begin());
      if (std::fabs(x[k] - r) <= 1e-12 * std::max(1.0, r)) {
        if (k + 1 < x.size() && k > 0) return (y[k + 1] - y[k - 1]) / (x[k + 1] - x[k - 1]);
        if (k > 0) return (y[k] - y[k - 1]) / (x[k] - x[k - 1]);
        return (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
      }
    }
    return interp->left_derivative(r);
  };
  fn.r_min_ = 0.0;
  fn.r_max_ = curve.points.back().r;
  return fn;
}

ModulusFunction ModulusFunction::from_callable(std::function<double(double)> value,
                                               std::function<double(double)> derivative,
                                               double r_min, double r_max) {
  if (!value) throw InputError("ModulusFunction: value callable required");
  ModulusFunction fn;
  fn.value_ = std::move(value);
  fn.derivative_ = std::move(derivative);
  fn.r_min_ = r_min;
  fn.r_max_ = r_max;
  return fn;
}

double ModulusFunction::value(double r) const { return value_(r); }

double ModulusFunction::analytic_derivative(double r) const {
  if (!derivative_) throw UnsupportedError("ModulusFunction: no analytic derivative");
  return derivative_(r);
}

std::vector<double> default_dini_epsilons() {
  return {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
}

double dini_left_derivative(const ModulusFunction& omega, double r,
                            const std::vector<double>& eps_schedule) {
  if (omega.has_analytic_derivative()) return omega.analytic_derivative(r);
  if (eps_schedule.empty()) throw InputError("dini_left_derivative: empty schedule");
  for (std::size_t i = 0; i + 1 < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > eps_schedule[i + 1])) {
      throw InputError("dini_left_derivative: schedule must be decreasing");
    }
  }
  if (!(eps_schedule.back() >= 1e-7)) {
    throw InputError("dini_left_derivative: schedule must stay >= 1e-7");
  }
  const std::size_t tail = std::min<std::size_t>(5, eps_schedule.size());
  const std::size_t first = eps_schedule.size() - tail;
  double best = -kInf;
  const double omega_r = omega.value(r);
  for (std::size_t i = first; i < eps_schedule.size(); ++i) {
    const double eps = eps_schedule[i];
    if (r - eps < omega.r_min()) {
      throw DomainError("dini_left_derivative: r - eps leaves the domain");
    }
    best = std::max(best, (omega_r - omega.value(r - eps)) / eps);
  }
  return best;
}

double simonenko_order(const ModulusFunction& omega, double r,
                       const std::vector<double>& eps_schedule) {
  const double w = omega.value(r);
  if (!(w > 1e-14)) throw DegenerateError("simonenko_order: omega(r) is numerically zero");
  return r * dini_left_derivative(omega, r, eps_schedule) / w;
}

namespace {

void finalize_profile(OrderProfile& profile) {
  const std::size_t n = profile.r.size();
  profile.kappa_estimate = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    profile.kappa_estimate = std::min(profile.kappa_estimate, profile.K[i]);
  }
  const std::size_t head = std::min<std::size_t>(10, n);
  profile.limsup_sigma_estimate = -kInf;
  profile.liminf_sigma_estimate = kInf;
  for (std::size_t i = 0; i < head; ++i) {  // grid is increasing: smallest first
    profile.limsup_sigma_estimate = std::max(profile.limsup_sigma_estimate, profile.sigma[i]);
    profile.liminf_sigma_estimate = std::min(profile.liminf_sigma_estimate, profile.sigma[i]);
  }
}

// The largest schedule entries can overshoot the domain at small grid r;
// the sweep keeps the feasible tail (eps <= r/2) and falls back to the
// single quotient at r/2 when nothing fits.
std::vector<double> clip_schedule(const std::vector<double>& eps_schedule, double r) {
  std::vector<double> out;
  for (double eps : eps_schedule) {
    if (eps <= 0.5 * r) out.push_back(eps);
  }
  if (out.empty()) {
    const double eps = std::max(0.5 * r, 1e-7);
    if (eps >= r) throw DomainError("order_profile: grid point too small for Dini estimation");
    out.push_back(eps);
  }
  return out;
}

OrderProfile profile_from_function(const ModulusFunction& fn, const std::vector<double>& r_grid,
                                   const std::vector<double>& eps_schedule) {
  if (r_grid.empty()) throw InputError("order_profile: empty grid");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0)) throw InputError("order_profile: grid must be positive");
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) {
      throw InputError("order_profile: grid must be strictly increasing");
    }
  }
  OrderProfile profile;
  profile.r = r_grid;
  profile.dini_epsilons = eps_schedule;
  profile.omega.resize(r_grid.size());
  profile.sigma.resize(r_grid.size());
  profile.K.resize(r_grid.size());
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    profile.omega[i] = fn.value(r);
    profile.K[i] = 8.0 * profile.omega[i] / (r * r);
    profile.sigma[i] = fn.has_analytic_derivative()
                           ? simonenko_order(fn, r, eps_schedule)
                           : simonenko_order(fn, r, clip_schedule(eps_schedule, r));
  }
  finalize_profile(profile);
  return profile;
}

}  // namespace

OrderProfile order_profile(const Generator& g, const PNorm& p,
                           const std::vector<double>& r_grid, const OrderConfig& config) {
  ModulusFunction fn = [&] {
    if (config.method == CurveMethod::ClosedForm) {
      return ModulusFunction::from_closed_form(g, p);
    }
    // Dini estimation needs omega left of the smallest grid point; pad the
    // curve there so slopes at the left edge have two-sided support. The
    // mirror point makes the first grid point's neighbors log-symmetric.
    std::vector<double> grid = r_grid;
    std::vector<double> pads = {0.25 * r_grid.front(), 0.5 * r_grid.front(),
                                0.75 * r_grid.front()};
    if (r_grid.size() > 1) pads.push_back(r_grid[0] * r_grid[0] / r_grid[1]);
    for (double left : pads) {
      if (left > 1e-6 && left < r_grid.front()) grid.push_back(left);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    ModulusCurve curve = modulus_curve(g, p, grid, CurveMethod::BruteForce, config.budget,
                                       config.threads);
    if (!curve.strictly_increasing()) {
      throw NonInvertibleError("order_profile: modulus curve is not strictly increasing");
    }
    return ModulusFunction::from_curve(curve);
  }();
  OrderProfile profile = profile_from_function(fn, r_grid, config.eps_schedule);
  profile.family = g.name();
  profile.alpha = g.alpha();
  profile.N = g.dim();
  profile.p = p;
  return profile;
}

OrderProfile order_profile_of(const ModulusFunction& fn, const std::vector<double>& r_grid,
                              const std::string& label,
                              const std::vector<double>& eps_schedule) {
  OrderProfile profile = profile_from_function(fn, r_grid, eps_schedule);
  profile.family = label;
  return profile;
}

SandwichReport power_sandwich_check(const OrderProfile& profile, double r0) {
  SandwichReport report;
  report.r0 = r0;
  if (profile.r.empty() || r0 < profile.r.front() || r0 > profile.r.back() + 1e-12) {
    throw InputError("power_sandwich_check: r0 outside profile range");
  }
  double s = kInf, S = -kInf;
  std::size_t last = 0;
  for (std::size_t i = 0; i < profile.r.size() && profile.r[i] <= r0 + 1e-15; ++i) {
    s = std::min(s, profile.sigma[i]);
    S = std::max(S, profile.sigma[i]);
    last = i;
  }
  report.s = s;
  report.S = S;
  if (!std::isfinite(S)) {
    report.conclusive = false;
    report.pass = false;
    return report;
  }
  const double omega_r0 = profile.omega[last];
  const double rr0 = profile.r[last];
  const double c_low = omega_r0 / std::pow(rr0, S);
  const double c_high = omega_r0 / std::pow(rr0, s);
  double worst = 0.0;
  bool lower_monotone = true, upper_monotone = true;
  double prev_low = -kInf, prev_up = kInf;
  for (std::size_t i = 0; i <= last; ++i) {
    const double r = profile.r[i];
    const double w = profile.omega[i];
    const double lower = c_low * std::pow(r, S);
    const double upper = c_high * std::pow(r, s);
    if (w > 0.0) {
      worst = std::max(worst, (lower - w) / w);
      worst = std::max(worst, (w - upper) / w);
    }
    const double low_ratio = w / std::pow(r, s);   // should be non-decreasing
    const double up_ratio = w / std::pow(r, S);    // should be non-increasing
    if (low_ratio + 1e-6 * std::fabs(low_ratio) < prev_low) lower_monotone = false;
    if (up_ratio - 1e-6 * std::fabs(up_ratio) > prev_up) upper_monotone = false;
    prev_low = low_ratio;
    prev_up = up_ratio;
  }
  report.max_relative_violation = worst;
  report.lower_monotone = lower_monotone;
  report.upper_monotone = upper_monotone;
  report.pass = worst <= 1e-6 && lower_monotone && upper_monotone;
  return report;
}

BarrierReport order_barrier_check(const OrderProfile& profile) {
  BarrierReport report;
  report.family = profile.family;
  report.kappa = profile.kappa_estimate;
  report.limsup_sigma = profile.limsup_sigma_estimate;
  report.liminf_sigma = profile.liminf_sigma_estimate;
  report.c1 = profile.kappa_estimate > 1e-2;
  const std::size_t head = std::min<std::size_t>(10, profile.K.size());
  double kmin = kInf, kmax = -kInf;
  for (std::size_t i = 0; i < head; ++i) {
    kmin = std::min(kmin, profile.K[i]);
    kmax = std::max(kmax, profile.K[i]);
  }
  report.c2 = head > 0 && (kmax - kmin) < 1e-2;
  report.applicable = report.c1 || report.c2;
  const double threshold = 2.0 - 0.05;
  if (report.c1 && report.c2) {
    report.pass = report.liminf_sigma >= threshold;
    report.detail = "liminf estimate against threshold (both conditions detected)";
  } else if (report.applicable) {
    report.pass = report.limsup_sigma >= threshold;
    report.detail = "limsup estimate against threshold (one condition detected)";
  } else {
    report.pass = true;
    report.detail = "inconclusive: neither condition detected numerically";
  }
  return report;
}

double cosine_integral(double z) {
  if (!(z > 0.0)) throw DomainError("cosine_integral: z must be positive");
  if (z <= 8.0) {
    // Ci(z) = gamma + ln z + sum_{k>=1} (-1)^k z^(2k) / (2k (2k)!)
    double sum = 0.0;
    double term = 1.0;  // running z^(2k) / (2k)!
    for (int k = 1; k <= 60; ++k) {
      term *= -z * z / ((2 * k - 1) * (2 * k));
      const double add = term / (2 * k);
      sum += add;
      if (std::fabs(add) < 1e-18 * std::max(1.0, std::fabs(sum))) break;
    }
    return kEulerGamma + std::log(z) + sum;
  }
  // Ci(z) = f(z) sin z - g(z) cos z with the auxiliary functions obtained
  // from the continued fraction of E1(iz) (Lentz), which evaluates the
  // asymptotic series to full precision where the truncated series cannot.
  const std::complex<double> iz(0.0, z);
  std::complex<double> b = 1.0 + iz;
  std::complex<double> c = 1e300;
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 1; i <= 200; ++i) {
    const double a = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const std::complex<double> del = c * d;
    h *= del;
    if (std::fabs(del.real() - 1.0) + std::fabs(del.imag()) < 1e-16) break;
  }
  // h = E1(iz) * exp(iz); Ci(z) = -Re(E1(iz))
  const std::complex<double> e1 = h * std::complex<double>(std::cos(z), -std::sin(z));
  return -e1.real();
}

ModulusFunction counterexample_omega() {
  auto value = [](double r) {
    if (!(r > 0.0)) return 0.0;
    return r * std::sin(1.0 / r) - cosine_integral(1.0 / r) + r;
  };
  auto derivative = [](double r) { return 1.0 + std::sin(1.0 / r); };
  return ModulusFunction::from_callable(value, derivative, 0.0, 1.0);
}

CounterexampleReport counterexample_curve(const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw InputError("counterexample_curve: empty grid");
  if (!(r_grid.front() >= 1e-4) || !(r_grid.back() <= 1.0)) {
    throw InputError("counterexample_curve: grid must lie in [1e-4, 1]");
  }
  const ModulusFunction fn = counterexample_omega();
  CounterexampleReport report;
  report.curve.family = "counterexample";
  report.curve.N = 0;
  report.curve.p = PNorm::finite(1.0);
  report.curve.points.reserve(r_grid.size());
  report.derivative_nonnegative = true;
  report.max_sigma_small_r = -kInf;
  report.max_omega_over_r = 0.0;
  for (double r : r_grid) {
    CurvePoint pt;
    pt.r = r;
    pt.omega = fn.value(r);
    pt.method = CurveMethod::ClosedForm;
    report.curve.points.push_back(pt);
    if (fn.analytic_derivative(r) < 0.0) report.derivative_nonnegative = false;
    report.max_omega_over_r = std::max(report.max_omega_over_r, pt.omega / r);
  }
  report.profile = order_profile_of(fn, r_grid, "counterexample");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (r_grid[i] <= 0.1) {
      report.max_sigma_small_r = std::max(report.max_sigma_small_r, report.profile.sigma[i]);
    }
  }
  report.sigma_reaches_two = report.max_sigma_small_r >= 2.0 - 0.05;
  // omega(r)/r <= 2 + |Ci(1/r)|/r; the Ci term is O(r), so ~3 bounds the grid
  report.omega_over_r_bounded = report.max_omega_over_r <= 3.0;
  return report;
}

}  // namespace pregret
