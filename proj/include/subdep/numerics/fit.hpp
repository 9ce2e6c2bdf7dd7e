#pragma once

#include <span>

namespace subdep::numerics {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs >= 2 points with
/// distinct x. r2 is clamped to [0, 1]; a perfectly flat y gives r2 = 1.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least squares of log y against log x after dropping the leading
/// `burn_in` fraction of the samples. Non-positive or non-finite y values
/// are skipped. Returns points = number of samples actually used.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y,
                   double burn_in = 0.0);

}  // namespace subdep::numerics
