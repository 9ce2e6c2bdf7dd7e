#include "subdep/numerics/special.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "subdep/errors.hpp"

namespace subdep::numerics {

double log_poisson_weight(double m, double tau) {
  if (tau == 0.0) {
    return m == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return m * std::log(tau) - tau - std::lgamma(m + 1.0);
}

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) {
    fail(ErrorCode::Config, "hurwitz_zeta requires s > 1 and q > 0");
  }
  // B_{2m} / (2m)!
  static constexpr std::array<double, 8> kBernoulliOverFactorial = {
      1.0 / 6.0 / 2.0,
      -1.0 / 30.0 / 24.0,
      1.0 / 42.0 / 720.0,
      -1.0 / 30.0 / 40320.0,
      5.0 / 66.0 / 3628800.0,
      -691.0 / 2730.0 / 479001600.0,
      7.0 / 6.0 / 87178291200.0,
      -3617.0 / 510.0 / 20922789888000.0,
  };
  constexpr int kDirect = 16;

  double direct = 0.0;
  double a = q;
  for (int k = 0; a < kDirect; ++k, a = q + k) direct += std::pow(a, -s);

  const double inv_a2 = 1.0 / (a * a);
  double result = direct + std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  // rising factorial (s)_{2m-1} times a^{-s-2m+1}
  double rising = s;
  double power = std::pow(a, -s - 1.0);
  for (std::size_t m = 0; m < kBernoulliOverFactorial.size(); ++m) {
    const double term = kBernoulliOverFactorial[m] * rising * power;
    result += term;
    if (std::abs(term) < 1e-18 * std::abs(result)) break;
    const double k = 2.0 * static_cast<double>(m + 1);
    rising *= (s + k - 1.0) * (s + k);
    power *= inv_a2;
  }
  return result;
}

}  // namespace subdep::numerics
