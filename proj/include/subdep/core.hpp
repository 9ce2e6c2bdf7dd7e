#pragma once

// Domain types for the submonolayer deposition model
//
//   c1'  = alpha - n c1^n - c1 * sum_{j>=n} c_j
//   c_n' = c1^n - c1 c_n
//   c_j' = c1 c_{j-1} - c1 c_j,   j > n
//
// plus the closed-form similarity profile and the rate envelope of the
// scaled cluster concentrations.

#include <cstddef>
#include <vector>

#include "subdep/errors.hpp"

namespace subdep {

class ModelParams {
 public:
  /// Throws Error(Config) unless alpha > 0 and n >= 2.
  ModelParams(double alpha, int n);

  double alpha() const noexcept { return alpha_; }
  int n() const noexcept { return n_; }

  /// (n-1)/n, the exponent of the similarity scaling.
  double scaling_exponent() const noexcept {
    return static_cast<double>(n_ - 1) / n_;
  }

  /// (n tau / alpha)^((n-1)/n), the prefactor applied to c_j(tau).
  double scale_factor(double tau) const;

 private:
  double alpha_;
  int n_;
};

enum class InitKind { Monomeric, PowerLaw };

/// Initial cluster distribution. Monomeric data has c_j(0) = 0 for j >= n;
/// power-law data has c_j(0) = rho * j^(-mu) exactly for every j >= n.
class InitialData {
 public:
  static InitialData monomeric(double c1_0 = 0.0);
  static InitialData power_law(double rho, double mu, double c1_0 = 0.0);

  InitKind kind() const noexcept { return kind_; }
  bool is_monomeric() const noexcept { return kind_ == InitKind::Monomeric; }
  double c1_0() const noexcept { return c1_0_; }
  double rho() const noexcept { return rho_; }
  double mu() const noexcept { return mu_; }

  /// c_j(0) for j >= n (the caller guarantees j is a cluster index).
  double cluster(long j) const;

  /// sum_{j >= from} c_j(0).
  double tail_count(long from) const;

 private:
  InitialData(InitKind kind, double c1_0, double rho, double mu)
      : kind_(kind), c1_0_(c1_0), rho_(rho), mu_(mu) {}

  InitKind kind_;
  double c1_0_;
  double rho_;
  double mu_;
};

/// Monomer concentration plus the truncated tail c_n..c_J at one time.
struct ClusterState {
  double t = 0.0;
  double tau = 0.0;
  double c1 = 0.0;
  int n = 2;
  std::vector<double> tail;  // tail[k] = c_{n+k}

  long truncation() const noexcept {
    return n + static_cast<long>(tail.size()) - 1;
  }
  double cluster(long j) const { return tail.at(static_cast<std::size_t>(j - n)); }
};

struct SimilarityPoint {
  double eta = 0.0;
  double tau = 0.0;
  long j = 0;
  double scaled_value = 0.0;
  double profile_value = 0.0;
  double abs_error = 0.0;
};

/// Default exclusion half-width around eta = 1 used by sweeps and the CLI.
inline constexpr double kDefaultEtaGuard = 0.05;

/// Throws Error(Config) if |eta - 1| < guard or eta <= 0.
void check_eta_guard(double eta, double guard = kDefaultEtaGuard);

/// (1-eta)^(-(n-1)/n) on (0,1) and 0 on (1,inf). Rejects eta <= 0 and eta == 1.
double similarity_profile(double eta, const ModelParams& params);

/// log(tau)/tau-type term of the rate bound; only nonzero for eta in (0,1).
/// Requires (1-eta) tau > 1 there.
double envelope_log_term(double eta, double tau, const ModelParams& params);

/// Initial-data memory term (n/alpha)^((n-1)/n) eta^(-mu) tau^((n-1)/n - mu)
/// with unit prefactor; only nonzero for eta > 1 and power-law data.
double envelope_memory_term(double eta, double tau, const ModelParams& params,
                            const InitialData& init);

/// Sum of the two terms above (the indicator functions make at most one of
/// them nonzero). The O(1) constant of the memory term is fixed to 1, so for
/// eta > 1 this is an envelope up to a constant.
double rate_envelope(double eta, double tau, const ModelParams& params,
                     const InitialData& init);

}  // namespace subdep
