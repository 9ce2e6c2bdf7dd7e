#pragma once

namespace subdep::numerics {

/// log(tau^m e^-tau / Gamma(m+1)) for real m >= 0, tau >= 0. Returns -inf for
/// tau == 0 and m > 0, and 0 for tau == 0 and m == 0.
double log_poisson_weight(double m, double tau);

/// Hurwitz zeta sum_{k>=0} (q+k)^(-s) for s > 1, q > 0, via Euler-Maclaurin.
/// Accurate to a few ulp-scale relative error for the tail sums used here.
double hurwitz_zeta(double s, double q);

}  // namespace subdep::numerics
