#include "subdep/core.hpp"

#include <cmath>
#include <string>

#include "subdep/numerics/special.hpp"

namespace subdep {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return "Config";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TruncationBreach: return "TruncationBreach";
    case ErrorCode::NonPositiveState: return "NonPositiveState";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::DegenerateGrid: return "DegenerateGrid";
    case ErrorCode::InsufficientDecades: return "InsufficientDecades";
  }
  return "Unknown";
}

ModelParams::ModelParams(double alpha, int n) : alpha_(alpha), n_(n) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorCode::Config, "alpha must be a positive finite number");
  }
  if (n < 2) fail(ErrorCode::Config, "critical size n must be >= 2");
}

double ModelParams::scale_factor(double tau) const {
  return std::pow(n_ * tau / alpha_, scaling_exponent());
}

InitialData InitialData::monomeric(double c1_0) {
  if (!(c1_0 >= 0.0) || !std::isfinite(c1_0)) {
    fail(ErrorCode::Config, "initial monomer concentration must be >= 0");
  }
  return InitialData(InitKind::Monomeric, c1_0, 0.0, 0.0);
}

InitialData InitialData::power_law(double rho, double mu, double c1_0) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    fail(ErrorCode::Config, "power-law amplitude rho must be > 0");
  }
  if (!(mu > 1.0) || !std::isfinite(mu)) {
    fail(ErrorCode::Config, "power-law exponent mu must be > 1");
  }
  if (!(c1_0 >= 0.0) || !std::isfinite(c1_0)) {
    fail(ErrorCode::Config, "initial monomer concentration must be >= 0");
  }
  return InitialData(InitKind::PowerLaw, c1_0, rho, mu);
}

double InitialData::cluster(long j) const {
  if (kind_ == InitKind::Monomeric) return 0.0;
  return rho_ * std::pow(static_cast<double>(j), -mu_);
}

double InitialData::tail_count(long from) const {
  if (kind_ == InitKind::Monomeric) return 0.0;
  return rho_ * numerics::hurwitz_zeta(mu_, static_cast<double>(from));
}

void check_eta_guard(double eta, double guard) {
  if (!(eta > 0.0)) fail(ErrorCode::Config, "eta must be positive");
  if (std::abs(eta - 1.0) < guard) {
    fail(ErrorCode::Config, "eta = " + std::to_string(eta) +
                                " is inside the excluded band |eta - 1| < " +
                                std::to_string(guard));
  }
}

namespace {

void check_eta(double eta) {
  if (!(eta > 0.0)) fail(ErrorCode::Config, "eta must be positive");
  if (eta == 1.0) fail(ErrorCode::Config, "the profile is singular at eta = 1");
}

}  // namespace

double similarity_profile(double eta, const ModelParams& params) {
  check_eta(eta);
  if (eta > 1.0) return 0.0;
  return std::pow(1.0 - eta, -params.scaling_exponent());
}

double envelope_log_term(double eta, double tau, const ModelParams& params) {
  check_eta(eta);
  if (eta > 1.0) return 0.0;
  const double reach = (1.0 - eta) * tau;
  if (!(reach > 1.0)) {
    fail(ErrorCode::Config, "log envelope needs (1 - eta) * tau > 1");
  }
  const double n = params.n();
  return (n - 1.0) * (1.0 - 1.0 / n) * similarity_profile(eta, params) *
         std::log(reach) / reach;
}

double envelope_memory_term(double eta, double tau, const ModelParams& params,
                            const InitialData& init) {
  check_eta(eta);
  if (!(tau > 0.0)) fail(ErrorCode::Config, "tau must be positive");
  if (eta < 1.0 || init.is_monomeric()) return 0.0;
  const double p = params.scaling_exponent();
  return std::pow(params.n() / params.alpha(), p) * std::pow(eta, -init.mu()) *
         std::pow(tau, p - init.mu());
}

double rate_envelope(double eta, double tau, const ModelParams& params,
                     const InitialData& init) {
  return envelope_log_term(eta, tau, params) +
         envelope_memory_term(eta, tau, params, init);
}

}  // namespace subdep
