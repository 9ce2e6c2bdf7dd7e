#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "subdep/errors.hpp"

namespace subdep::numerics {

/// Gauss-Legendre rule on [-1, 1]; nodes from Newton iteration on P_n.
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      sum += weights_[i] * f(mid + half * nodes_[i]);
    }
    return half * sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Shared 16-point rule used by the adaptive driver.
const GaussLegendre& gauss_legendre_16();

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_panels = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Globally adaptive composite Gauss-Legendre quadrature over the intervals
/// delimited by `breaks` (sorted, at least two entries). Each panel carries
/// the two-half estimate and |whole - halves| as its error; the panel with
/// the largest error is bisected until the summed error meets the tolerance.
/// Throws Error(QuadratureNonConvergence) once max_panels is exceeded.
template <class F>
QuadratureResult adaptive_gauss_legendre(F&& f, std::span<const double> breaks,
                                         const QuadratureOptions& opts) {
  struct Panel {
    double a, b, value, error, left, right;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  const GaussLegendre& rule = gauss_legendre_16();
  auto make_panel = [&](double a, double b, double whole) {
    const double m = 0.5 * (a + b);
    const double left = rule.integrate(f, a, m);
    const double right = rule.integrate(f, m, b);
    const double halves = left + right;
    return Panel{a, b, halves, std::abs(halves - whole), left, right};
  };

  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_error = 0.0;
  double magnitude = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (!(b > a)) continue;
    Panel p = make_panel(a, b, rule.integrate(f, a, b));
    total += p.value;
    total_error += p.error;
    magnitude += std::abs(p.value);
    heap.push(p);
  }

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  auto tolerance = [&] {
    return std::max({opts.abs_tol, opts.rel_tol * std::abs(total),
                     64.0 * kEps * magnitude});
  };
  while (!heap.empty() && total_error > tolerance()) {
    if (static_cast<int>(heap.size()) >= opts.max_panels) {
      fail(ErrorCode::QuadratureNonConvergence,
           "adaptive quadrature exceeded " + std::to_string(opts.max_panels) +
               " panels (estimated error " + std::to_string(total_error) + ")");
    }
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      fail(ErrorCode::QuadratureNonConvergence,
           "adaptive quadrature panel collapsed below machine resolution");
    }
    Panel left = make_panel(p.a, m, p.left);
    Panel right = make_panel(m, p.b, p.right);
    total += left.value + right.value - p.value;
    total_error += left.error + right.error - p.error;
    magnitude += std::abs(left.value) + std::abs(right.value) - std::abs(p.value);
    heap.push(left);
    heap.push(right);
  }
  // final re-summation avoids the drift of the running add/subtract updates
  QuadratureResult result;
  result.panels = static_cast<int>(heap.size());
  while (!heap.empty()) {
    result.value += heap.top().value;
    result.error += heap.top().error;
    heap.pop();
  }
  return result;
}

}  // namespace subdep::numerics
