#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pregret/errors.hpp"

namespace pregret {

// Index of a p-norm, p in [1, inf]. Infinity is an explicit flag, never an
// IEEE infinity fed into arithmetic comparisons.
class PNorm {
 public:
  static PNorm finite(double p) {
    if (!(p >= 1.0)) throw InputError("p-norm index must satisfy p >= 1");
    return PNorm(p, false);
  }
  static PNorm infinity() { return PNorm(0.0, true); }

  // Accepts "1", "2", "inf", or a decimal >= 1.
  static PNorm parse(const std::string& text);

  bool is_inf() const { return inf_; }
  double value() const { return p_; }  // only meaningful when !is_inf()

  // 1/p with the p = inf convention 1/inf = 0.
  double inv() const { return inf_ ? 0.0 : 1.0 / p_; }

  // Diameter of the probability simplex under this norm: 2^(1/p).
  double simplex_diameter() const;

  PNorm conjugate() const;

  std::string to_string() const;

  bool operator==(const PNorm& o) const {
    return inf_ == o.inf_ && (inf_ || p_ == o.p_);
  }

 private:
  PNorm(double p, bool inf) : p_(p), inf_(inf) {}
  double p_;
  bool inf_;
};

double p_norm(std::span<const double> v, const PNorm& p);

PNorm holder_conjugate(const PNorm& p);

// A point of the probability simplex with exact-zero support bookkeeping.
// Components are >= 0 and sum to 1 within 1e-12 after construction; inputs
// off by more than 1e-9 are rejected rather than silently renormalized.
class ProbVec {
 public:
  static ProbVec create(std::vector<double> components);

  // Skips validation/renormalization; caller guarantees the invariants.
  static ProbVec unchecked(std::vector<double> components);

  int dim() const { return static_cast<int>(comps_.size()); }
  double operator[](std::size_t i) const { return comps_[i]; }
  const std::vector<double>& components() const { return comps_; }
  std::span<const double> span() const { return comps_; }
  const std::vector<int>& support() const { return support_; }
  bool in_support(int i) const;

  bool operator==(const ProbVec& o) const { return comps_ == o.comps_; }

 private:
  ProbVec(std::vector<double> c, std::vector<int> s)
      : comps_(std::move(c)), support_(std::move(s)) {}
  std::vector<double> comps_;
  std::vector<int> support_;
};

// Two simplex points with their recorded p-norm distance.
struct SimplexPair {
  ProbVec q;
  ProbVec q_check;
  double distance;
  PNorm p;

  static SimplexPair create(ProbVec q, ProbVec q_check, const PNorm& p);
};

double distance(const ProbVec& a, const ProbVec& b, const PNorm& p);

// Builds a pair at exact p-norm distance r on the chord through `base` along
// `direction` (which must sum to zero). The window slides inside the simplex
// when the symmetric placement around `base` is infeasible; throws
// InfeasiblePairError if the whole feasible segment is shorter than r.
SimplexPair pair_at_distance(const ProbVec& base, std::span<const double> direction,
                             double r, const PNorm& p);

// Global cap on enumeration sizes; overridable via PROPER_REGRET_BUDGET_CAP.
std::uint64_t budget_cap();

// Number of lattice points of simplex_grid(N, resolution).
std::uint64_t simplex_grid_size(int N, int resolution);

// All points {k/resolution} with k a composition of `resolution` into N
// nonnegative parts, in lexicographic order of (k_1, ..., k_N).
std::vector<ProbVec> simplex_grid(int N, int resolution);

// Flat-Dirichlet samples; output depends only on (N, count, seed), with each
// sample seeded independently so parallel callers can reproduce any slice.
std::vector<ProbVec> sample_simplex(int N, int count, std::uint64_t seed);

// Single uniform sample for index-seeded sweeps.
ProbVec sample_simplex_one(int N, std::uint64_t seed);

}  // namespace pregret
