#pragma once

#include <span>
#include <vector>

namespace subdep::numerics {

/// Piecewise cubic Hermite interpolant that preserves monotonicity of the
/// data on every interval where the data are monotone.
///
/// Knot slopes are either supplied (exact derivatives, e.g. from an ODE
/// right-hand side) or estimated with the Fritsch-Butland harmonic mean.
/// Supplied slopes are limited with the Fritsch-Carlson condition
/// alpha^2 + beta^2 <= 9 wherever both agree in sign with the secant; an
/// interval whose end slopes straddle zero holds an interior extremum and
/// keeps its slopes as given.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  MonotoneCubic(std::vector<double> x, std::vector<double> y,
                std::vector<double> slopes);

  double operator()(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }
  std::span<const double> knots() const { return x_; }
  std::span<const double> values() const { return y_; }

 private:
  void validate() const;
  void estimate_slopes();
  void limit_slopes();

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

}  // namespace subdep::numerics
