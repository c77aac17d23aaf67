#pragma once

#include <cstddef>
#include <vector>

#include "pregret/errors.hpp"

namespace pregret {

// Monotone piecewise-cubic interpolant (Fritsch--Carlson). If the data are
// monotone the interpolant is monotone, which is what curve inversion needs.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n) throw InputError("MonotoneCubic: need >= 2 knots");
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!(xs_[i + 1] > xs_[i])) throw InputError("MonotoneCubic: x not increasing");
    }
    slopes_.resize(n);
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    slopes_[0] = d[0];
    slopes_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0) {
        slopes_[i] = 0.0;
      } else {
        // weighted harmonic mean keeps the interpolant monotone
        const double w1 = 2.0 * (xs_[i + 1] - xs_[i]) + (xs_[i] - xs_[i - 1]);
        const double w2 = (xs_[i + 1] - xs_[i]) + 2.0 * (xs_[i] - xs_[i - 1]);
        slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
      }
    }
    // clamp endpoint slopes (Fritsch--Carlson condition at the boundary)
    for (std::size_t i : {std::size_t{0}, n - 1}) {
      const double di = d[i == 0 ? 0 : n - 2];
      if (di == 0.0) {
        slopes_[i] = 0.0;
      } else if (slopes_[i] / di < 0.0) {
        slopes_[i] = 0.0;
      } else if (slopes_[i] / di > 3.0) {
        slopes_[i] = 3.0 * di;
      }
    }
  }

  double operator()(double x) const {
    const std::size_t n = xs_.size();
    if (x <= xs_.front()) return ys_.front() + slopes_.front() * (x - xs_.front());
    if (x >= xs_.back()) return ys_.back() + slopes_.back() * (x - xs_.back());
    const std::size_t lo = segment_left(x);
    const double h = xs_[lo + 1] - xs_[lo];
    const double t = (x - xs_[lo]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * ys_[lo] + h10 * h * slopes_[lo] + h01 * ys_[lo + 1] + h11 * h * slopes_[lo + 1];
  }

  // Left derivative of the interpolant (the two one-sided derivatives agree
  // everywhere except possibly at knots, where the left segment is used).
  double left_derivative(double x) const {
    if (x <= xs_.front()) return slopes_.front();
    if (x >= xs_.back()) return slopes_.back();
    std::size_t lo = segment_left(x);
    if (x == xs_[lo] && lo > 0) --lo;  // approach from the left
    const double h = xs_[lo + 1] - xs_[lo];
    const double t = (x - xs_[lo]) / h;
    const double t2 = t * t;
    const double d00 = (6 * t2 - 6 * t) / h;
    const double d10 = 3 * t2 - 4 * t + 1;
    const double d01 = (-6 * t2 + 6 * t) / h;
    const double d11 = 3 * t2 - 2 * t;
    return d00 * ys_[lo] + d10 * slopes_[lo] + d01 * ys_[lo + 1] + d11 * slopes_[lo + 1];
  }

  double x_min() const { return xs_.front(); }
  double x_max() const { return xs_.back(); }
  double y_min() const { return ys_.front(); }
  double y_max() const { return ys_.back(); }

 private:
  std::size_t segment_left(double x) const {
    std::size_t lo = 0, hi = xs_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (xs_[mid] <= x) lo = mid; else hi = mid;
    }
    return lo;
  }

  std::vector<double> xs_, ys_, slopes_;
};

}  // namespace pregret
