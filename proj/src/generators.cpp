#include "pregret/generators.hpp"

#include <cmath>
#include <limits>

namespace pregret {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_alpha(double alpha) {
  if (!(alpha > 1.0)) throw InputError("generator alpha must satisfy alpha > 1");
}

void require_dim(int N) {
  if (N < 2) throw InputError("generator dimension must be >= 2");
}

double sum_pow(std::span<const double> q, double alpha) {
  double s = 0.0;
  for (double x : q) s += std::pow(x, alpha);
  return s;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Shannon: return "shannon";
    case Family::SquaredAlphaNorm: return "sq-alpha-norm";
    case Family::AlphaNorm: return "alpha-norm";
    case Family::Tsallis: return "tsallis";
    case Family::MaxPower: return "max-power";
    case Family::Custom: return "custom";
  }
  return "custom";
}

Family parse_family(const std::string& name) {
  if (name == "shannon" || name == "log") return Family::Shannon;
  if (name == "sq-alpha-norm" || name == "brier") return Family::SquaredAlphaNorm;
  if (name == "alpha-norm") return Family::AlphaNorm;
  if (name == "tsallis") return Family::Tsallis;
  if (name == "max-power") return Family::MaxPower;
  throw InputError("unknown generator family '" + name + "'");
}

bool ExtendedVec::has_neg_inf() const {
  for (double x : v) {
    if (x == -kInf) return true;
  }
  return false;
}

Generator Generator::shannon(int N) {
  require_dim(N);
  Generator g;
  g.family_ = Family::Shannon;
  g.n_ = N;
  g.strict_ = true;
  g.name_ = "shannon";
  return g;
}

Generator Generator::squared_alpha_norm(double alpha, int N) {
  require_alpha(alpha);
  require_dim(N);
  Generator g;
  g.family_ = Family::SquaredAlphaNorm;
  g.alpha_ = alpha;
  g.n_ = N;
  g.strict_ = true;
  g.name_ = "sq-alpha-norm";
  return g;
}

Generator Generator::alpha_norm(double alpha, int N) {
  require_alpha(alpha);
  require_dim(N);
  Generator g;
  g.family_ = Family::AlphaNorm;
  g.alpha_ = alpha;
  g.n_ = N;
  g.strict_ = true;  // the norm restricted to the simplex is strictly convex
  g.name_ = "alpha-norm";
  return g;
}

Generator Generator::tsallis(double alpha, int N) {
  require_alpha(alpha);
  require_dim(N);
  Generator g;
  g.family_ = Family::Tsallis;
  g.alpha_ = alpha;
  g.n_ = N;
  g.strict_ = true;
  g.name_ = "tsallis";
  return g;
}

Generator Generator::max_power(double alpha, int N) {
  require_alpha(alpha);
  require_dim(N);
  Generator g;
  g.family_ = Family::MaxPower;
  g.alpha_ = alpha;
  g.n_ = N;
  // On the 1-D simplex the active piece is strictly convex along the chord;
  // for N >= 3 segments with a constant max exist, so strictness is off.
  g.strict_ = (N == 2);
  g.name_ = "max-power";
  return g;
}

Generator Generator::make(Family f, double alpha, int N) {
  switch (f) {
    case Family::Shannon: return shannon(N);
    case Family::SquaredAlphaNorm: return squared_alpha_norm(alpha, N);
    case Family::AlphaNorm: return alpha_norm(alpha, N);
    case Family::Tsallis: return tsallis(alpha, N);
    case Family::MaxPower: return max_power(alpha, N);
    case Family::Custom: break;
  }
  throw InputError("Generator::make: custom generators need Generator::custom");
}

Generator Generator::custom(std::string name, int N, EvalFn f, GradFn grad,
                            bool strict, bool validate) {
  require_dim(N);
  if (!f || !grad) throw InputError("custom generator needs both f and grad");
  Generator g;
  g.family_ = Family::Custom;
  g.n_ = N;
  g.strict_ = strict;
  g.name_ = std::move(name);
  g.custom_f_ = std::move(f);
  g.custom_grad_ = std::move(grad);
  if (validate) {
    const auto grid = simplex_grid(N, 20);
    for (const auto& q0 : grid) {
      const auto res = subgradient_check(g, q0, grid);
      if (!res.ok) {
        throw InputError("custom generator '" + g.name_ +
                         "' rejected: selector fails the subgradient inequality");
      }
    }
  }
  return g;
}

double eval_f_raw(const Generator& g, std::span<const double> q) {
  switch (g.family_) {
    case Family::Shannon: {
      double s = 0.0;
      for (double x : q) {
        if (x > 0.0) s += x * std::log(x);  // 0 ln 0 = 0
      }
      return s;
    }
    case Family::SquaredAlphaNorm: {
      const double s = sum_pow(q, g.alpha_);
      return std::pow(s, 2.0 / g.alpha_);
    }
    case Family::AlphaNorm: {
      const double s = sum_pow(q, g.alpha_);
      return std::pow(s, 1.0 / g.alpha_);
    }
    case Family::Tsallis:
      return sum_pow(q, g.alpha_);
    case Family::MaxPower: {
      const double c = 1.0 / static_cast<double>(q.size());
      double m = 0.0;
      for (double x : q) m = std::max(m, std::fabs(x - c));
      return std::pow(m, g.alpha_);
    }
    case Family::Custom:
      return g.custom_f_(ProbVec::create(std::vector<double>(q.begin(), q.end())));
  }
  throw InputError("eval_f_raw: bad family");
}

double eval_f(const Generator& g, const ProbVec& q) {
  if (q.dim() != g.dim()) throw InputError("eval_f: dimension mismatch");
  if (g.family_ == Family::Custom) return g.custom_f_(q);
  return eval_f_raw(g, q.span());
}

ExtendedVec subgradient(const Generator& g, const ProbVec& q) {
  if (q.dim() != g.dim()) throw InputError("subgradient: dimension mismatch");
  const int n = q.dim();
  ExtendedVec out;
  out.v.assign(static_cast<std::size_t>(n), 0.0);
  switch (g.family_) {
    case Family::Shannon: {
      // no finite subgradient off the support: slope of x ln x is -inf at 0
      for (int i = 0; i < n; ++i) {
        const double x = q[static_cast<std::size_t>(i)];
        out.v[static_cast<std::size_t>(i)] = (x > 0.0) ? 1.0 + std::log(x) : -kInf;
      }
      return out;
    }
    case Family::SquaredAlphaNorm: {
      const double a = g.alpha_;
      const double s = sum_pow(q.span(), a);
      const double scale = 2.0 * std::pow(s, 2.0 / a - 1.0);
      for (int i = 0; i < n; ++i) {
        out.v[static_cast<std::size_t>(i)] = scale * std::pow(q[static_cast<std::size_t>(i)], a - 1.0);
      }
      return out;
    }
    case Family::AlphaNorm: {
      const double a = g.alpha_;
      const double s = sum_pow(q.span(), a);
      const double scale = std::pow(s, 1.0 / a - 1.0);
      for (int i = 0; i < n; ++i) {
        out.v[static_cast<std::size_t>(i)] = scale * std::pow(q[static_cast<std::size_t>(i)], a - 1.0);
      }
      return out;
    }
    case Family::Tsallis: {
      // gradient of sum q^a is finite on the whole closed simplex for a > 1
      const double a = g.alpha_;
      for (int i = 0; i < n; ++i) {
        out.v[static_cast<std::size_t>(i)] = a * std::pow(q[static_cast<std::size_t>(i)], a - 1.0);
      }
      return out;
    }
    case Family::MaxPower: {
      const double c = 1.0 / static_cast<double>(n);
      int arg = 0;
      double best = -1.0;
      for (int i = 0; i < n; ++i) {
        const double d = std::fabs(q[static_cast<std::size_t>(i)] - c);
        if (d > best) {
          best = d;
          arg = i;
        }
      }
      if (best > 0.0) {
        const double d = q[static_cast<std::size_t>(arg)] - c;
        out.v[static_cast<std::size_t>(arg)] =
            g.alpha_ * std::pow(std::fabs(d), g.alpha_ - 1.0) * (d > 0.0 ? 1.0 : -1.0);
      }
      return out;
    }
    case Family::Custom: {
      ExtendedVec v = g.custom_grad_(q);
      if (static_cast<int>(v.v.size()) != n) throw InputError("custom grad: dimension mismatch");
      for (int i = 0; i < n; ++i) {
        if (v.v[static_cast<std::size_t>(i)] == -kInf && q.in_support(i)) {
          throw InputError("custom grad: -inf component inside the support");
        }
      }
      return v;
    }
  }
  throw InputError("subgradient: bad family");
}

double extended_inner_diff(const ExtendedVec& v, const ProbVec& q, const ProbVec& q0) {
  if (q.dim() != q0.dim() || static_cast<int>(v.v.size()) != q.dim()) {
    throw InputError("extended_inner_diff: dimension mismatch");
  }
  double finite = 0.0;
  bool neg_inf = false;
  for (int i = 0; i < q.dim(); ++i) {
    const double w = v.v[static_cast<std::size_t>(i)];
    const double d = q[static_cast<std::size_t>(i)] - q0[static_cast<std::size_t>(i)];
    if (w == -kInf) {
      if (d > 0.0) neg_inf = true;  // positive mass against -inf slope
      // d == 0 contributes nothing (0 * inf = 0); d < 0 cannot occur since
      // -inf only appears off the support where q0 is exactly 0
    } else {
      finite += w * d;
    }
  }
  return neg_inf ? -kInf : finite;
}

SubgradientCheckResult subgradient_check_with(const Generator& g, const ProbVec& q0,
                                              const ExtendedVec& v,
                                              const std::vector<ProbVec>& probes) {
  const double f0 = eval_f(g, q0);
  SubgradientCheckResult res;
  for (const auto& q : probes) {
    const double inner = extended_inner_diff(v, q, q0);
    if (inner == -kInf) continue;  // inequality trivially satisfied
    const double violation = (f0 + inner) - eval_f(g, q);
    if (violation > res.worst_violation) {
      res.worst_violation = violation;
      res.worst_probe = q;
    }
  }
  res.ok = res.worst_violation <= 1e-9;
  return res;
}

SubgradientCheckResult subgradient_check(const Generator& g, const ProbVec& q0,
                                         const std::vector<ProbVec>& probes) {
  return subgradient_check_with(g, q0, subgradient(g, q0), probes);
}

}  // namespace pregret
