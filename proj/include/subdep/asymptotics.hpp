#pragma once

// Long-time expansions of the monomer-bulk pair and of the two time scales,
// plus the center-manifold polynomial of the transformed (x, v) system and a
// residual check of its invariance.

#include <span>
#include <vector>

#include "subdep/core.hpp"
#include "subdep/numerics/fit.hpp"

namespace subdep {

struct AsymptoticConstants {
  double beta = 0.0;  // 1/(n+2)
  double A = 0.0;     // n(n-1)/2
  double B = 0.0;     // ((n+1)/n) (alpha/(n+1))^(1/(n+1))
  double D = 0.0;     // n(n-1)/(n+1)

  static AsymptoticConstants of(const ModelParams& params);
};

/// (alpha/(n+1))^(1/(n+1)) t^(-1/(n+1)).
double monomer_leading(double t, const ModelParams& params);
/// Leading term plus n(n-1)/(n+1) t^-1. This second coefficient replaces an
/// older published value; the acceptance suite checks it against the ODE.
double monomer_asymptote(double t, const ModelParams& params);

/// B t^(n/(n+1)).
double tau_of_t_leading(double t, const ModelParams& params);
/// B t^(n/(n+1)) + D log t.
double tau_of_t_asymptote(double t, const ModelParams& params);

/// (n/(n+1))^((n+1)/n) ((n+1)/alpha)^(1/n) tau^((n+1)/n).
double t_of_tau_leading(double tau, const ModelParams& params);
/// Leading term minus (n-1) times the same constant times tau^(1/n) log tau.
double t_of_tau_asymptote(double tau, const ModelParams& params);

/// 1 + (n-1)(1-1/n) log(tau)/tau, the large-tau form of
/// (n tau/alpha)^((n-1)/n) c1(tau)^(n-1).
double scaled_monomer_asymptote(double tau, const ModelParams& params);

/// ((1-b)/(alpha b)^b)^(1/(1-b)) t^(1/(1-b)), b = beta.
double zeta_of_t_leading(double t, const ModelParams& params);
/// Leading term minus A ((1-b)/(alpha b))^(2b/(1-b)) t^(2b/(1-b)).
double zeta_of_t_asymptote(double t, const ModelParams& params);
/// (alpha b)^b/(1-b) zeta^(1-b) + A/(alpha b)^b zeta^b.
double t_of_zeta_asymptote(double zeta, const ModelParams& params);

/// n x^n - x^(n+2)/alpha + n(n-1) x^(2n+2)/alpha^2 - (n+1) x^(2n+4)/alpha^3,
/// keeping the first `terms` (1..4) monomials.
double center_manifold_phi(double x, const ModelParams& params, int terms = 4);
double center_manifold_phi_derivative(double x, const ModelParams& params, int terms = 4);

/// Invariance defect of v = phi(x) for the transformed system
///   x' = v x - n x^(n+1)
///   v' = -alpha v - x^(n+2) + v^2 + alpha n x^n - n v x^n
/// i.e. R = phi'(x) (phi x - n x^(n+1)) - (right side of v').
/// Straight floating-point evaluation; loses all digits once R falls below
/// about 1e-16 times the individual terms.
double manifold_residual_direct(double x, const ModelParams& params, int terms = 4);

/// Coefficients r_k of R(x) = sum_k r_k x^k, assembled by exact polynomial
/// products. Coefficients that cancel to rounding level are set to zero.
std::vector<double> manifold_residual_coefficients(const ModelParams& params,
                                                   int terms = 4);

/// R(x) from the coefficient form; accurate for arbitrarily small x.
double manifold_residual(double x, const ModelParams& params, int terms = 4);

/// Log-log fit of |R| against x over the grid. Points where R vanishes are
/// skipped; throws DegenerateGrid if fewer than 4 remain.
numerics::LineFit manifold_residual_fit(const ModelParams& params,
                                        std::span<const double> x_grid, int terms = 4);

/// Slope of manifold_residual_fit.
double manifold_residual_order(const ModelParams& params, std::span<const double> x_grid,
                               int terms = 4);

}  // namespace subdep
