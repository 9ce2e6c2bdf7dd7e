#include "subdep/numerics/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "subdep/errors.hpp"

namespace subdep::numerics {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    fail(ErrorCode::DegenerateGrid, "line fit needs at least two (x, y) pairs");
  }
  const double count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) {
    fail(ErrorCode::DegenerateGrid, "line fit needs distinct abscissae");
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.points = static_cast<int>(x.size());
  return fit;
}

LineFit fit_loglog(std::span<const double> x, std::span<const double> y,
                   double burn_in) {
  if (x.size() != y.size()) {
    fail(ErrorCode::DegenerateGrid, "log-log fit needs matching arrays");
  }
  const auto skip = static_cast<std::size_t>(
      std::floor(std::clamp(burn_in, 0.0, 1.0) * static_cast<double>(x.size())));
  std::vector<double> lx, ly;
  for (std::size_t i = skip; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_line(lx, ly);
}

}  // namespace subdep::numerics
