#include "subdep/numerics/interp.hpp"

#include <algorithm>
#include <cmath>

#include "subdep/errors.hpp"

namespace subdep::numerics {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  validate();
  estimate_slopes();
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y,
                             std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(slopes)) {
  validate();
  if (d_.size() != x_.size()) {
    fail(ErrorCode::Config, "interpolant: slope count does not match knots");
  }
  limit_slopes();
}

void MonotoneCubic::validate() const {
  if (x_.empty() || x_.size() != y_.size()) {
    fail(ErrorCode::Config, "interpolant: need matching, non-empty knots");
  }
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) {
      fail(ErrorCode::Config, "interpolant: knots must be strictly increasing");
    }
  }
}

void MonotoneCubic::estimate_slopes() {
  const std::size_t m = x_.size();
  d_.assign(m, 0.0);
  if (m < 2) return;
  std::vector<double> h(m - 1), delta(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (m == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  // one-sided three-point ends, clipped to keep the end intervals monotone
  auto end_slope = [](double h0, double h1, double del0, double del1) {
    double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if (d * del0 <= 0.0) {
      d = 0.0;
    } else if (del0 * del1 <= 0.0 && std::abs(d) > 3.0 * std::abs(del0)) {
      d = 3.0 * del0;
    }
    return d;
  };
  d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d_[m - 1] = end_slope(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
}

void MonotoneCubic::limit_slopes() {
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
    const double delta = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    if (delta == 0.0) {
      d_[i] = d_[i + 1] = 0.0;
      continue;
    }
    const double a = d_[i] / delta;
    const double b = d_[i + 1] / delta;
    if (a < 0.0 || b < 0.0) continue;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double s = 3.0 / std::sqrt(r2);
      d_[i] = s * a * delta;
      d_[i + 1] = s * b * delta;
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  if (x < x_.front() || x > x_.back() || std::isnan(x)) {
    fail(ErrorCode::OutOfRange, "interpolant evaluated outside its knot range");
  }
  if (x_.size() == 1) return y_.front();
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  if (i + 1 >= x_.size()) i = x_.size() - 2;

  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  if (s == 0.0) return y_[i];
  if (s == 1.0) return y_[i + 1];
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

}  // namespace subdep::numerics
