#include "pregret/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pregret/parallel.hpp"
#include "pregret/rng.hpp"

namespace pregret {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// binary entropy gap term shared by the Shannon forms
double binary_entropy_form(double a) {
  return xlogx(0.5 * (1.0 + a)) + xlogx(0.5 * (1.0 - a)) + std::log(2.0);
}

double binary_entropy_form_deriv(double a) {
  if (a >= 1.0) return kInf;
  return 0.5 * std::log((1.0 + a) / (1.0 - a));
}

double pow_sum2(double x, double y, double alpha) {
  return std::pow(x, alpha) + std::pow(y, alpha);
}

}  // namespace

double table_closed_form_half_arg(Family family, double alpha, double a) {
  switch (family) {
    case Family::Shannon:
      return binary_entropy_form(a);
    case Family::SquaredAlphaNorm: {
      if (alpha < 2.0) {
        const double s = pow_sum2(1.0 + a, 1.0 - a, alpha);
        return 0.25 * std::pow(s, 2.0 / alpha) - std::pow(4.0, 1.0 / alpha - 1.0);
      }
      const double u = pow_sum2(a, 1.0 - a, alpha);
      const double v = pow_sum2(a, 2.0 - a, alpha);
      return 0.5 * std::pow(u, 2.0 / alpha) - 0.25 * std::pow(v, 2.0 / alpha) + 0.5;
    }
    case Family::AlphaNorm: {
      if (alpha < 2.0) throw UnsupportedError("alpha-norm with alpha < 2 has no closed form");
      const double u = pow_sum2(a, 1.0 - a, alpha);
      const double v = pow_sum2(a, 2.0 - a, alpha);
      return 0.5 * std::pow(u, 1.0 / alpha) - 0.5 * std::pow(v, 1.0 / alpha) + 0.5;
    }
    case Family::Tsallis: {
      if (alpha >= 2.0 && alpha <= 3.0) {
        return 0.5 * pow_sum2(a, 1.0 - a, alpha) -
               std::pow(2.0, -alpha) * pow_sum2(a, 2.0 - a, alpha) + 0.5;
      }
      return std::pow(2.0, -alpha) * pow_sum2(1.0 + a, 1.0 - a, alpha) -
             std::pow(2.0, 1.0 - alpha);
    }
    case Family::MaxPower: {
      if (alpha < 2.0) {
        return 0.5 * std::pow(std::fabs(a - 0.5), alpha) -
               std::pow(2.0, -alpha) * std::pow(std::fabs(a - 1.0), alpha) +
               std::pow(2.0, -(1.0 + alpha));
      }
      return std::pow(0.5 * a, alpha);
    }
    case Family::Custom:
      break;
  }
  throw UnsupportedError("no closed form for this generator");
}

namespace {

double table_closed_form_half_arg_deriv(Family family, double alpha, double a) {
  switch (family) {
    case Family::Shannon:
      return binary_entropy_form_deriv(a);
    case Family::SquaredAlphaNorm: {
      if (alpha < 2.0) {
        const double s = pow_sum2(1.0 + a, 1.0 - a, alpha);
        const double ds = alpha * (std::pow(1.0 + a, alpha - 1.0) - std::pow(1.0 - a, alpha - 1.0));
        return 0.25 * (2.0 / alpha) * std::pow(s, 2.0 / alpha - 1.0) * ds;
      }
      const double u = pow_sum2(a, 1.0 - a, alpha);
      const double v = pow_sum2(a, 2.0 - a, alpha);
      const double du = alpha * (std::pow(a, alpha - 1.0) - std::pow(1.0 - a, alpha - 1.0));
      const double dv = alpha * (std::pow(a, alpha - 1.0) - std::pow(2.0 - a, alpha - 1.0));
      return 0.5 * (2.0 / alpha) * std::pow(u, 2.0 / alpha - 1.0) * du -
             0.25 * (2.0 / alpha) * std::pow(v, 2.0 / alpha - 1.0) * dv;
    }
    case Family::AlphaNorm: {
      if (alpha < 2.0) throw UnsupportedError("alpha-norm with alpha < 2 has no closed form");
      const double u = pow_sum2(a, 1.0 - a, alpha);
      const double v = pow_sum2(a, 2.0 - a, alpha);
      const double du = alpha * (std::pow(a, alpha - 1.0) - std::pow(1.0 - a, alpha - 1.0));
      const double dv = alpha * (std::pow(a, alpha - 1.0) - std::pow(2.0 - a, alpha - 1.0));
      return 0.5 * (1.0 / alpha) * std::pow(u, 1.0 / alpha - 1.0) * du -
             0.5 * (1.0 / alpha) * std::pow(v, 1.0 / alpha - 1.0) * dv;
    }
    case Family::Tsallis: {
      if (alpha >= 2.0 && alpha <= 3.0) {
        const double du = alpha * (std::pow(a, alpha - 1.0) - std::pow(1.0 - a, alpha - 1.0));
        const double dv = alpha * (std::pow(a, alpha - 1.0) - std::pow(2.0 - a, alpha - 1.0));
        return 0.5 * du - std::pow(2.0, -alpha) * dv;
      }
      return std::pow(2.0, -alpha) * alpha *
             (std::pow(1.0 + a, alpha - 1.0) - std::pow(1.0 - a, alpha - 1.0));
    }
    case Family::MaxPower: {
      if (alpha < 2.0) {
        const double d = a - 0.5;
        const double kink = (d == 0.0) ? 0.0
                                       : 0.5 * alpha * std::pow(std::fabs(d), alpha - 1.0) *
                                             (d > 0.0 ? 1.0 : -1.0);
        return kink + std::pow(2.0, -alpha) * alpha * std::pow(1.0 - a, alpha - 1.0);
      }
      return 0.5 * alpha * std::pow(0.5 * a, alpha - 1.0);
    }
    case Family::Custom:
      break;
  }
  throw UnsupportedError("no closed form for this generator");
}

bool is_p(const PNorm& p, double v) { return !p.is_inf() && p.value() == v; }

}  // namespace

bool closed_form_supported(const Generator& g, const PNorm& p) {
  if (g.family() == Family::Custom) return false;
  if (g.family() == Family::Shannon && is_p(p, 2.0)) return true;  // any N
  if (g.dim() != 2 || !is_p(p, 1.0)) return false;
  if (g.family() == Family::AlphaNorm && g.alpha() < 2.0) return false;
  return true;
}

double modulus_closed_form(const Generator& g, const PNorm& p, double r) {
  if (r < 0.0 || r > p.simplex_diameter() + 1e-12) {
    throw DomainError("modulus_closed_form: r outside [0, 2^(1/p)]");
  }
  if (g.family() == Family::Shannon && is_p(p, 2.0)) {
    return binary_entropy_form(std::min(1.0, r / std::sqrt(2.0)));
  }
  if (g.dim() == 2 && is_p(p, 1.0) && g.family() != Family::Custom) {
    return table_closed_form_half_arg(g.family(), g.alpha(), std::min(1.0, 0.5 * r));
  }
  throw UnsupportedError("no closed form for this (family, N, p) combination");
}

double modulus_closed_form_derivative(const Generator& g, const PNorm& p, double r) {
  if (r < 0.0 || r > p.simplex_diameter() + 1e-12) {
    throw DomainError("modulus_closed_form_derivative: r outside [0, 2^(1/p)]");
  }
  if (g.family() == Family::Shannon && is_p(p, 2.0)) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return inv_sqrt2 * binary_entropy_form_deriv(std::min(1.0, r * inv_sqrt2));
  }
  if (g.dim() == 2 && is_p(p, 1.0) && g.family() != Family::Custom) {
    return 0.5 * table_closed_form_half_arg_deriv(g.family(), g.alpha(), std::min(1.0, 0.5 * r));
  }
  throw UnsupportedError("no closed form for this (family, N, p) combination");
}

namespace {

// Golden-section minimization; the bracket comes from a dense scan, so local
// unimodality is a safe assumption.
template <typename F>
double golden_section(F&& f, double a, double b, double tol) {
  constexpr double invphi = 0.6180339887498948482;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

BruteForceResult brute_force_n2(const Generator& g, const PNorm& p, double r,
                                const SearchBudget& budget) {
  // every pair of binary simplex points at p-distance r has first-coordinate
  // gap d = r * 2^(-1/p); the pair is determined by its midpoint
  const double d = std::min(1.0, r * std::pow(2.0, -p.inv()));
  auto geval = [&](double x) {
    const double c[2] = {x, 1.0 - x};
    return eval_f_raw(g, c);
  };
  auto jensen = [&](double m) {
    return 0.5 * (geval(m + 0.5 * d) + geval(m - 0.5 * d)) - geval(m);
  };
  const double lo = 0.5 * d;
  const double hi = 1.0 - 0.5 * d;
  double m_star = 0.5;
  if (hi > lo) {
    const int n_scan = std::max(3, budget.scan_points);
    const double step = (hi - lo) / (n_scan - 1);
    double best = kInf;
    int best_i = 0;
    for (int i = 0; i < n_scan; ++i) {
      const double m = lo + step * i;
      const double j = jensen(m);
      if (j < best) {
        best = j;
        best_i = i;
      }
    }
    const double ga = std::max(lo, lo + step * (best_i - 1));
    const double gb = std::min(hi, lo + step * (best_i + 1));
    m_star = golden_section(jensen, ga, gb, 1e-11);
  }
  const double omega = std::max(0.0, jensen(m_star));
  ProbVec q = ProbVec::create({m_star + 0.5 * d, 1.0 - (m_star + 0.5 * d)});
  ProbVec q_check = ProbVec::create({m_star - 0.5 * d, 1.0 - (m_star - 0.5 * d)});
  return BruteForceResult{omega, SimplexPair{std::move(q), std::move(q_check), r, p}, false};
}

// State of one N >= 3 search: midpoint on the simplex plus a unit tangent.
struct ChordState {
  std::vector<double> mid;
  std::vector<double> dir;
};

// Places the chord of p-length r along dir inside the simplex (sliding the
// window off-center when needed) and evaluates the Jensen gap. Returns +inf
// when the feasible segment is shorter than r.
double chord_jensen(const Generator& g, const PNorm& p, double r,
                    const std::vector<double>& mid, const std::vector<double>& dir,
                    std::vector<double>& e1, std::vector<double>& e2,
                    std::vector<double>& mid_buf) {
  const std::size_t n = mid.size();
  const double nd = p_norm(dir, p);
  if (nd <= 0.0) return kInf;
  const double span = r / nd;
  double lo = -kInf, hi = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double di = dir[i];
    if (di > 0.0) lo = std::max(lo, -mid[i] / di);
    if (di < 0.0) hi = std::min(hi, mid[i] / (-di));
  }
  if (!(hi - lo >= span)) return kInf;
  double s1 = 0.5 * span;
  double s2 = -0.5 * span;
  if (s1 > hi) {
    s1 = hi;
    s2 = s1 - span;
  }
  if (s2 < lo) {
    s2 = lo;
    s1 = s2 + span;
  }
  for (std::size_t i = 0; i < n; ++i) {
    e1[i] = std::max(0.0, mid[i] + s1 * dir[i]);
    e2[i] = std::max(0.0, mid[i] + s2 * dir[i]);
    mid_buf[i] = 0.5 * (e1[i] + e2[i]);
  }
  return 0.5 * (eval_f_raw(g, e1) + eval_f_raw(g, e2)) - eval_f_raw(g, mid_buf);
}

BruteForceResult brute_force_heuristic(const Generator& g, const PNorm& p, double r,
                                       const SearchBudget& budget) {
  const int n = g.dim();
  const std::size_t nu = static_cast<std::size_t>(n);
  std::vector<double> e1(nu), e2(nu), mid_buf(nu), dir_cand(nu);

  double best_val = kInf;
  ChordState best_state;

  for (int restart = 0; restart < budget.restarts; ++restart) {
    Rng rng(mix_seed(budget.seed, static_cast<std::uint64_t>(restart)));
    ChordState st;
    st.mid.resize(nu);
    st.dir.resize(nu);
    double ok = kInf;
    for (int attempt = 0; attempt < 32 && ok == kInf; ++attempt) {
      const int kind = restart % 3;
      double sum = 0.0;
      for (auto& x : st.mid) {
        x = rng.exponential();
        sum += x;
      }
      for (auto& x : st.mid) x /= sum;
      if (kind == 1) {
        // sharpen toward the boundary: minimizers of boundary-flat
        // generators live on low-dimensional faces
        sum = 0.0;
        for (auto& x : st.mid) {
          x *= x;
          sum += x;
        }
        for (auto& x : st.mid) x /= sum;
      }
      double mean = 0.0;
      for (auto& x : st.dir) {
        x = rng.gaussian();
        mean += x;
      }
      mean /= n;
      for (auto& x : st.dir) x -= mean;
      if (kind == 2) {
        // coordinate-pair start: only chords close to a two-coordinate edge
        // can reach distances near the diameter when N is large
        const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
        if (j >= i) ++j;
        const double eta = 0.1 * rng.uniform_open();
        for (auto& x : st.mid) x *= eta;
        st.mid[static_cast<std::size_t>(i)] += 0.5 * (1.0 - eta);
        st.mid[static_cast<std::size_t>(j)] += 0.5 * (1.0 - eta);
        for (auto& x : st.dir) x *= 0.05;
        st.dir[static_cast<std::size_t>(i)] += 1.0;
        st.dir[static_cast<std::size_t>(j)] -= 1.0;
        double dsum = 0.0;
        for (double x : st.dir) dsum += x;
        for (auto& x : st.dir) x -= dsum / n;
      }
      const double nd = p_norm(st.dir, p);
      if (nd < 1e-12) continue;
      for (auto& x : st.dir) x /= nd;
      ok = chord_jensen(g, p, r, st.mid, st.dir, e1, e2, mid_buf);
    }
    if (ok == kInf) continue;
    double current = ok;
    int evals = 0;

    // projected coordinate descent with a shrinking step schedule; moves are
    // applied in place and reverted on rejection
    for (double step = budget.step_init;
         step >= budget.step_min && evals < budget.max_evals_per_restart; step *= 0.5) {
      bool improved = true;
      while (improved && evals < budget.max_evals_per_restart) {
        improved = false;
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            // move mass step from mid[j] to mid[i], stopping at the face
            const double t = std::min(step, st.mid[static_cast<std::size_t>(j)]);
            if (t > 0.0) {
              st.mid[static_cast<std::size_t>(i)] += t;
              st.mid[static_cast<std::size_t>(j)] -= t;
              const double val = chord_jensen(g, p, r, st.mid, st.dir, e1, e2, mid_buf);
              ++evals;
              if (val < current - 1e-15) {
                current = val;
                improved = true;
              } else {
                st.mid[static_cast<std::size_t>(i)] -= t;
                st.mid[static_cast<std::size_t>(j)] += t;
              }
            }
            // tilt the tangent direction and renormalize
            dir_cand = st.dir;
            dir_cand[static_cast<std::size_t>(i)] += step;
            dir_cand[static_cast<std::size_t>(j)] -= step;
            const double nd = p_norm(dir_cand, p);
            if (nd < 1e-12) continue;
            for (auto& x : dir_cand) x /= nd;
            const double val = chord_jensen(g, p, r, st.mid, dir_cand, e1, e2, mid_buf);
            ++evals;
            if (val < current - 1e-15) {
              std::swap(st.dir, dir_cand);
              current = val;
              improved = true;
            }
          }
        }
      }
    }
    if (current < best_val) {
      best_val = current;
      best_state = st;
    }
  }
  if (best_val == kInf) {
    throw InfeasiblePairError("modulus_brute_force: no feasible chord found at this r");
  }
  // rebuild the winning pair
  chord_jensen(g, p, r, best_state.mid, best_state.dir, e1, e2, mid_buf);
  ProbVec q = ProbVec::create(std::vector<double>(e1.begin(), e1.end()));
  ProbVec q_check = ProbVec::create(std::vector<double>(e2.begin(), e2.end()));
  if (q_check.components() > q.components()) std::swap(q, q_check);
  const double achieved = distance(q, q_check, p);
  return BruteForceResult{std::max(0.0, best_val),
                          SimplexPair{std::move(q), std::move(q_check), achieved, p}, true};
}

}  // namespace

BruteForceResult modulus_brute_force(const Generator& g, const PNorm& p, double r,
                                     const SearchBudget& budget) {
  if (r < 0.0 || r > p.simplex_diameter() + 1e-12) {
    throw DomainError("modulus_brute_force: r outside [0, 2^(1/p)]");
  }
  if (r == 0.0) {
    std::vector<double> uniform(static_cast<std::size_t>(g.dim()), 1.0 / g.dim());
    ProbVec u = ProbVec::create(uniform);
    return BruteForceResult{0.0, SimplexPair{u, u, 0.0, p}, g.dim() > 2};
  }
  if (g.dim() == 2) return brute_force_n2(g, p, std::min(r, p.simplex_diameter()), budget);
  return brute_force_heuristic(g, p, std::min(r, p.simplex_diameter()), budget);
}

std::vector<std::string> ModulusCurve::monotonicity_diagnostics() const {
  std::vector<std::string> diags;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1].omega + 1e-12 < points[i].omega) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "omega decreases between r=%.17g (%.17g) and r=%.17g (%.17g)",
                    points[i].r, points[i].omega, points[i + 1].r, points[i + 1].omega);
      diags.emplace_back(buf);
    }
  }
  return diags;
}

std::vector<std::string> ModulusCurve::flat_segments() const {
  std::vector<std::string> diags;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1].omega > points[i].omega) &&
        points[i + 1].omega + 1e-12 >= points[i].omega) {
      char buf[120];
      std::snprintf(buf, sizeof(buf), "omega flat between r=%.17g and r=%.17g (%.17g)",
                    points[i].r, points[i + 1].r, points[i].omega);
      diags.emplace_back(buf);
    }
  }
  return diags;
}

bool ModulusCurve::strictly_increasing() const {
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1].omega > points[i].omega)) return false;
  }
  return true;
}

ModulusCurve modulus_curve(const Generator& g, const PNorm& p,
                           const std::vector<double>& r_grid, CurveMethod method,
                           const SearchBudget& budget, int threads) {
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (r_grid[i] < 0.0 || r_grid[i] > p.simplex_diameter() + 1e-12) {
      throw DomainError("modulus_curve: grid point outside [0, 2^(1/p)]");
    }
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) {
      throw InputError("modulus_curve: r grid must be strictly increasing");
    }
  }
  if (method == CurveMethod::ClosedForm && !closed_form_supported(g, p)) {
    throw UnsupportedError("modulus_curve: no closed form for this combination");
  }
  ModulusCurve curve;
  curve.family = g.name();
  curve.alpha = g.alpha();
  curve.N = g.dim();
  curve.p = p;
  curve.points.resize(r_grid.size());
  parallel_for(r_grid.size(), threads, [&](std::size_t i) {
    CurvePoint pt;
    pt.r = r_grid[i];
    pt.method = method;
    if (method == CurveMethod::ClosedForm) {
      pt.omega = modulus_closed_form(g, p, r_grid[i]);
      pt.heuristic = false;
    } else {
      SearchBudget local = budget;
      local.seed = mix_seed(budget.seed, i);  // schedule-independent
      BruteForceResult res = modulus_brute_force(g, p, r_grid[i], local);
      pt.omega = res.omega;
      pt.heuristic = res.heuristic;
      pt.minimizer = std::move(res.minimizer);
    }
    curve.points[i] = std::move(pt);
  });
  return curve;
}

MonotoneCubic curve_interpolant(const ModulusCurve& curve) {
  std::vector<double> xs, ys;
  xs.reserve(curve.points.size() + 1);
  ys.reserve(curve.points.size() + 1);
  if (curve.points.empty() || curve.points.front().r > 0.0) {
    xs.push_back(0.0);
    ys.push_back(0.0);
  }
  for (const auto& pt : curve.points) {
    xs.push_back(pt.r);
    ys.push_back(pt.omega);
  }
  return MonotoneCubic(std::move(xs), std::move(ys));
}

double inverse_modulus(const ModulusCurve& curve, double rho) {
  if (rho < 0.0) throw InputError("inverse_modulus: rho must be nonnegative");
  if (curve.points.size() < 2) throw InputError("inverse_modulus: curve too short");
  if (!curve.strictly_increasing() ||
      (curve.points.front().r > 0.0 && !(curve.points.front().omega > 0.0))) {
    throw NonInvertibleError("inverse_modulus: curve is not strictly increasing");
  }
  if (rho == 0.0) return 0.0;
  const double omega_max = curve.points.back().omega;
  if (rho >= omega_max) return curve.p.simplex_diameter();
  const MonotoneCubic interp = curve_interpolant(curve);
  double lo = 0.0, hi = curve.points.back().r;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (interp(mid) < rho) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace pregret
