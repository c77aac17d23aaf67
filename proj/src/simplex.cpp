#include "pregret/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "pregret/rng.hpp"

namespace pregret {

PNorm PNorm::parse(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") return PNorm::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw InputError("cannot parse p-norm index '" + text + "'");
  }
  if (pos != text.size()) throw InputError("cannot parse p-norm index '" + text + "'");
  return PNorm::finite(v);
}

double PNorm::simplex_diameter() const {
  return inf_ ? 1.0 : std::pow(2.0, 1.0 / p_);
}

PNorm PNorm::conjugate() const {
  if (inf_) return PNorm::finite(1.0);
  if (p_ == 1.0) return PNorm::infinity();
  return PNorm::finite(p_ / (p_ - 1.0));
}

std::string PNorm::to_string() const {
  if (inf_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", p_);
  return buf;
}

PNorm holder_conjugate(const PNorm& p) { return p.conjugate(); }

double p_norm(std::span<const double> v, const PNorm& p) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError("p_norm: non-finite component");
  }
  if (p.is_inf()) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  const double pv = p.value();
  if (pv == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
  }
  if (pv == 2.0) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  // scale by the max to avoid overflow/underflow for large p
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x) / m, pv);
  return m * std::pow(s, 1.0 / pv);
}

ProbVec ProbVec::create(std::vector<double> components) {
  const std::size_t n = components.size();
  if (n < 2) throw InputError("ProbVec: dimension must be >= 2");
  double sum = 0.0;
  for (double x : components) {
    if (!std::isfinite(x)) throw InputError("ProbVec: non-finite component");
    if (x < 0.0) throw InputError("ProbVec: negative component");
    sum += x;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw InputError("ProbVec: components do not sum to 1");
  // push the rounding residual onto the largest component (first on ties)
  const double residual = 1.0 - sum;
  if (residual != 0.0) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (components[i] > components[arg]) arg = i;
    }
    components[arg] += residual;
    if (components[arg] < 0.0) components[arg] = 0.0;
  }
  std::vector<int> support;
  for (std::size_t i = 0; i < n; ++i) {
    if (components[i] > 0.0) support.push_back(static_cast<int>(i));
  }
  return ProbVec(std::move(components), std::move(support));
}

ProbVec ProbVec::unchecked(std::vector<double> components) {
  std::vector<int> support;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i] > 0.0) support.push_back(static_cast<int>(i));
  }
  return ProbVec(std::move(components), std::move(support));
}

bool ProbVec::in_support(int i) const { return comps_[static_cast<std::size_t>(i)] > 0.0; }

double distance(const ProbVec& a, const ProbVec& b, const PNorm& p) {
  if (a.dim() != b.dim()) throw InputError("distance: dimension mismatch");
  std::vector<double> diff(a.dim());
  for (int i = 0; i < a.dim(); ++i) diff[i] = a[i] - b[i];
  return p_norm(diff, p);
}

SimplexPair SimplexPair::create(ProbVec q, ProbVec q_check, const PNorm& p) {
  const double d = pregret::distance(q, q_check, p);
  if (d > p.simplex_diameter() + 1e-12) throw DomainError("SimplexPair: distance exceeds diameter");
  return SimplexPair{std::move(q), std::move(q_check), d, p};
}

SimplexPair pair_at_distance(const ProbVec& base, std::span<const double> direction,
                             double r, const PNorm& p) {
  const int n = base.dim();
  if (static_cast<int>(direction.size()) != n) {
    throw InputError("pair_at_distance: dimension mismatch");
  }
  double dsum = 0.0;
  for (double x : direction) {
    if (!std::isfinite(x)) throw InputError("pair_at_distance: non-finite direction");
    dsum += x;
  }
  if (std::fabs(dsum) > 1e-12) throw InputError("pair_at_distance: direction must sum to 0");
  if (r < 0.0) throw DomainError("pair_at_distance: negative distance");
  if (r > p.simplex_diameter() + 1e-12) throw DomainError("pair_at_distance: r exceeds diameter");
  if (r == 0.0) return SimplexPair{base, base, 0.0, p};

  const double norm_d = p_norm(direction, p);
  if (norm_d == 0.0) throw InputError("pair_at_distance: zero direction");
  const double span_needed = r / norm_d;  // |s1 - s2|

  // feasible parameter range for base + s * direction staying in the simplex
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double di = direction[static_cast<std::size_t>(i)];
    if (di > 0.0) lo = std::max(lo, -base[static_cast<std::size_t>(i)] / di);
    if (di < 0.0) hi = std::min(hi, base[static_cast<std::size_t>(i)] / (-di));
  }
  if (!(hi - lo + 1e-15 >= span_needed)) {
    throw InfeasiblePairError("pair_at_distance: r unreachable along direction");
  }
  double s1 = span_needed / 2.0;
  double s2 = -span_needed / 2.0;
  if (s1 > hi) {
    s1 = hi;
    s2 = s1 - span_needed;
  }
  if (s2 < lo) {
    s2 = lo;
    s1 = s2 + span_needed;
    if (s1 > hi) s1 = hi;  // tolerance-level overshoot only
  }
  auto endpoint = [&](double s) {
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double v = base[static_cast<std::size_t>(i)] + s * direction[static_cast<std::size_t>(i)];
      if (v < 0.0 && v > -1e-12) v = 0.0;
      c[static_cast<std::size_t>(i)] = v;
    }
    return ProbVec::create(std::move(c));
  };
  ProbVec q = endpoint(s1);
  ProbVec q_check = endpoint(s2);
  const double achieved = distance(q, q_check, p);
  return SimplexPair{std::move(q), std::move(q_check), achieved, p};
}

std::uint64_t budget_cap() {
  static const std::uint64_t cap = [] {
    if (const char* env = std::getenv("PROPER_REGRET_BUDGET_CAP")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{20000000};
  }();
  return cap;
}

std::uint64_t simplex_grid_size(int N, int resolution) {
  // C(resolution + N - 1, N - 1)
  std::uint64_t result = 1;
  for (int i = 1; i <= N - 1; ++i) {
    const double projected = static_cast<double>(result) * (resolution + i) / i;
    if (projected > 1e18) return std::numeric_limits<std::uint64_t>::max();
    result = result * static_cast<std::uint64_t>(resolution + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::vector<ProbVec> simplex_grid(int N, int resolution) {
  if (N < 2) throw InputError("simplex_grid: N must be >= 2");
  if (resolution < 1) throw InputError("simplex_grid: resolution must be >= 1");
  const std::uint64_t count = simplex_grid_size(N, resolution);
  if (count > budget_cap()) throw BudgetError("simplex_grid: grid size exceeds budget cap");

  std::vector<ProbVec> out;
  out.reserve(count);
  std::vector<int> ks(static_cast<std::size_t>(N), 0);
  const double inv_res = 1.0 / resolution;
  // lexicographic enumeration of compositions of `resolution` into N parts
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == N - 1) {
      ks[static_cast<std::size_t>(pos)] = remaining;
      std::vector<double> c(static_cast<std::size_t>(N));
      for (int i = 0; i < N; ++i) c[static_cast<std::size_t>(i)] = ks[static_cast<std::size_t>(i)] * inv_res;
      out.push_back(ProbVec::create(std::move(c)));
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      ks[static_cast<std::size_t>(pos)] = k;
      self(self, pos + 1, remaining - k);
    }
  };
  rec(rec, 0, resolution);
  return out;
}

ProbVec sample_simplex_one(int N, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> c(static_cast<std::size_t>(N));
  double sum = 0.0;
  for (auto& x : c) {
    x = rng.exponential();
    sum += x;
  }
  if (sum <= 0.0) {  // unreachable in practice; exponential() is > 0
    for (auto& x : c) x = 1.0 / N;
    return ProbVec::create(std::move(c));
  }
  for (auto& x : c) x /= sum;
  return ProbVec::create(std::move(c));
}

std::vector<ProbVec> sample_simplex(int N, int count, std::uint64_t seed) {
  if (N < 2) throw InputError("sample_simplex: N must be >= 2");
  if (count < 1) throw InputError("sample_simplex: count must be >= 1");
  std::vector<ProbVec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(sample_simplex_one(N, mix_seed(seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

}  // namespace pregret
