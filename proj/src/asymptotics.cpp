#include "subdep/asymptotics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace subdep {

namespace {

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::Config, std::string(name) + " must be a positive finite number");
  }
}

void check_terms(int terms) {
  if (terms < 1 || terms > 4) fail(ErrorCode::Config, "manifold terms must be in 1..4");
}

struct Monomial {
  int power;
  double coeff;
};

std::array<Monomial, 4> phi_monomials(const ModelParams& params) {
  const int n = params.n();
  const double a = params.alpha();
  return {{{n, static_cast<double>(n)},
           {n + 2, -1.0 / a},
           {2 * n + 2, n * (n - 1.0) / (a * a)},
           {2 * n + 4, -(n + 1.0) / (a * a * a)}}};
}

// Dense polynomial that also tracks sum |contribution| per coefficient, so
// rounding-level leftovers of exact cancellations can be recognised.
struct Poly {
  std::vector<double> c;
  std::vector<double> mag;

  explicit Poly(std::size_t degree = 0) : c(degree + 1, 0.0), mag(degree + 1, 0.0) {}

  void grow(std::size_t size) {
    if (c.size() < size) {
      c.resize(size, 0.0);
      mag.resize(size, 0.0);
    }
  }

  void add_term(std::size_t power, double value, double magnitude) {
    grow(power + 1);
    c[power] += value;
    mag[power] += magnitude;
  }

  Poly& axpy(double s, const Poly& o) {
    grow(o.c.size());
    for (std::size_t k = 0; k < o.c.size(); ++k) {
      c[k] += s * o.c[k];
      mag[k] += std::abs(s) * o.mag[k];
    }
    return *this;
  }

  Poly operator*(const Poly& o) const {
    Poly r(c.size() + o.c.size() - 2);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      for (std::size_t j = 0; j < o.c.size(); ++j) {
        r.c[i + j] += c[i] * o.c[j];
        r.mag[i + j] += mag[i] * o.mag[j];
      }
    }
    return r;
  }

  static Poly monomial(std::size_t power, double coeff) {
    Poly p(power);
    p.c[power] = coeff;
    p.mag[power] = std::abs(coeff);
    return p;
  }
};

}  // namespace

AsymptoticConstants AsymptoticConstants::of(const ModelParams& params) {
  const double n = params.n();
  AsymptoticConstants k;
  k.beta = 1.0 / (n + 2.0);
  k.A = n * (n - 1.0) / 2.0;
  k.B = (n + 1.0) / n * std::pow(params.alpha() / (n + 1.0), 1.0 / (n + 1.0));
  k.D = n * (n - 1.0) / (n + 1.0);
  return k;
}

double monomer_leading(double t, const ModelParams& params) {
  check_positive(t, "t");
  const double n = params.n();
  return std::pow(params.alpha() / (n + 1.0), 1.0 / (n + 1.0)) * std::pow(t, -1.0 / (n + 1.0));
}

double monomer_asymptote(double t, const ModelParams& params) {
  const double n = params.n();
  return monomer_leading(t, params) + n * (n - 1.0) / (n + 1.0) / t;
}

double tau_of_t_leading(double t, const ModelParams& params) {
  check_positive(t, "t");
  const double n = params.n();
  return AsymptoticConstants::of(params).B * std::pow(t, n / (n + 1.0));
}

double tau_of_t_asymptote(double t, const ModelParams& params) {
  return tau_of_t_leading(t, params) + AsymptoticConstants::of(params).D * std::log(t);
}

namespace {
double t_of_tau_constant(const ModelParams& params) {
  const double n = params.n();
  return std::pow(n / (n + 1.0), (n + 1.0) / n) *
         std::pow((n + 1.0) / params.alpha(), 1.0 / n);
}
}  // namespace

double t_of_tau_leading(double tau, const ModelParams& params) {
  check_positive(tau, "tau");
  const double n = params.n();
  return t_of_tau_constant(params) * std::pow(tau, (n + 1.0) / n);
}

double t_of_tau_asymptote(double tau, const ModelParams& params) {
  const double n = params.n();
  return t_of_tau_leading(tau, params) -
         (n - 1.0) * t_of_tau_constant(params) * std::pow(tau, 1.0 / n) * std::log(tau);
}

double scaled_monomer_asymptote(double tau, const ModelParams& params) {
  check_positive(tau, "tau");
  const double n = params.n();
  return 1.0 + (n - 1.0) * (1.0 - 1.0 / n) * std::log(tau) / tau;
}

double zeta_of_t_leading(double t, const ModelParams& params) {
  check_positive(t, "t");
  const double b = AsymptoticConstants::of(params).beta;
  const double ab = params.alpha() * b;
  return std::pow((1.0 - b) / std::pow(ab, b), 1.0 / (1.0 - b)) * std::pow(t, 1.0 / (1.0 - b));
}

double zeta_of_t_asymptote(double t, const ModelParams& params) {
  const AsymptoticConstants k = AsymptoticConstants::of(params);
  const double b = k.beta;
  const double e = 2.0 * b / (1.0 - b);
  return zeta_of_t_leading(t, params) -
         k.A * std::pow((1.0 - b) / (params.alpha() * b), e) * std::pow(t, e);
}

double t_of_zeta_asymptote(double zeta, const ModelParams& params) {
  check_positive(zeta, "zeta");
  const AsymptoticConstants k = AsymptoticConstants::of(params);
  const double b = k.beta;
  const double ab_b = std::pow(params.alpha() * b, b);
  return ab_b / (1.0 - b) * std::pow(zeta, 1.0 - b) + k.A / ab_b * std::pow(zeta, b);
}

double center_manifold_phi(double x, const ModelParams& params, int terms) {
  check_terms(terms);
  const auto mono = phi_monomials(params);
  double sum = 0.0;
  for (int i = 0; i < terms; ++i) sum += mono[i].coeff * std::pow(x, mono[i].power);
  return sum;
}

double center_manifold_phi_derivative(double x, const ModelParams& params, int terms) {
  check_terms(terms);
  const auto mono = phi_monomials(params);
  double sum = 0.0;
  for (int i = 0; i < terms; ++i) {
    sum += mono[i].coeff * mono[i].power * std::pow(x, mono[i].power - 1);
  }
  return sum;
}

double manifold_residual_direct(double x, const ModelParams& params, int terms) {
  const double n = params.n();
  const double a = params.alpha();
  const double phi = center_manifold_phi(x, params, terms);
  const double dphi = center_manifold_phi_derivative(x, params, terms);
  const double xn = std::pow(x, n);
  const double lhs = dphi * (phi * x - n * xn * x);
  const double rhs = -a * phi - xn * x * x + phi * phi + a * n * xn - n * phi * xn;
  return lhs - rhs;
}

std::vector<double> manifold_residual_coefficients(const ModelParams& params, int terms) {
  check_terms(terms);
  const auto mono = phi_monomials(params);
  const auto n = static_cast<std::size_t>(params.n());
  const double a = params.alpha();

  Poly phi;
  Poly dphi;
  for (int i = 0; i < terms; ++i) {
    const auto p = static_cast<std::size_t>(mono[i].power);
    phi.add_term(p, mono[i].coeff, std::abs(mono[i].coeff));
    const double d = mono[i].coeff * mono[i].power;
    dphi.add_term(p - 1, d, std::abs(d));
  }
  const Poly x1 = Poly::monomial(1, 1.0);
  const Poly xn = Poly::monomial(n, 1.0);

  Poly flow = phi * x1;  // x' = phi x - n x^(n+1)
  flow.axpy(-static_cast<double>(n), Poly::monomial(n + 1, 1.0));
  Poly residual = dphi * flow;

  Poly vdot = phi * phi;
  vdot.axpy(-a, phi);
  vdot.axpy(-1.0, Poly::monomial(n + 2, 1.0));
  vdot.axpy(a * static_cast<double>(n), xn);
  vdot.axpy(-static_cast<double>(n), phi * xn);
  residual.axpy(-1.0, vdot);

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (std::size_t k = 0; k < residual.c.size(); ++k) {
    if (std::abs(residual.c[k]) <= 64.0 * kEps * residual.mag[k]) residual.c[k] = 0.0;
  }
  return residual.c;
}

namespace {
double eval_poly(const std::vector<double>& c, double x, double* abs_sum) {
  double value = 0.0;
  double mag = 0.0;
  double xp = 1.0;
  for (double ck : c) {
    value += ck * xp;
    mag += std::abs(ck * xp);
    xp *= x;
  }
  if (abs_sum) *abs_sum = mag;
  return value;
}
}  // namespace

double manifold_residual(double x, const ModelParams& params, int terms) {
  return eval_poly(manifold_residual_coefficients(params, terms), x, nullptr);
}

numerics::LineFit manifold_residual_fit(const ModelParams& params,
                                        std::span<const double> x_grid, int terms) {
  const std::vector<double> coeffs = manifold_residual_coefficients(params, terms);
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  std::vector<double> lx;
  std::vector<double> lr;
  for (double x : x_grid) {
    if (!(x > 0.0) || !std::isfinite(x)) continue;
    double mag = 0.0;
    const double r = eval_poly(coeffs, x, &mag);
    if (!std::isfinite(r) || !(std::abs(r) > 8.0 * kEps * mag)) continue;
    lx.push_back(std::log(x));
    lr.push_back(std::log(std::abs(r)));
  }
  if (lx.size() < 4) {
    fail(ErrorCode::DegenerateGrid, "residual fit needs at least 4 usable grid points, got " +
                                        std::to_string(lx.size()));
  }
  return numerics::fit_line(lx, lr);
}

double manifold_residual_order(const ModelParams& params, std::span<const double> x_grid,
                               int terms) {
  return manifold_residual_fit(params, x_grid, terms).slope;
}

}  // namespace subdep
