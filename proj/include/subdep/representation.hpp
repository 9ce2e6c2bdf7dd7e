#pragma once

// Closed-form representation of the cluster concentrations in the tau scale:
//
//   c_x(tau) = e^-tau sum_{k=n}^{floor x} tau^(x-k)/Gamma(x-k+1) c_k(0)
//            + 1/Gamma(x-n+1) int_0^tau c1(tau-s)^(n-1) s^(x-n) e^-s ds
//
// For integer x = j this is the exact solution of the linear triangular
// system; real x gives its smooth extension. All Gamma-density weights are
// evaluated in log space so that j and tau in the thousands stay finite.

#include <iosfwd>
#include <memory>
#include <vector>

#include "subdep/core.hpp"
#include "subdep/integrator.hpp"
#include "subdep/kernels.hpp"
#include "subdep/numerics/quadrature.hpp"

namespace subdep {

/// c1 as a function of tau, as seen by the representation.
class MonomerHistory {
 public:
  virtual ~MonomerHistory() = default;
  virtual double c1(double tau) const = 0;
  /// Largest tau at which c1 is available.
  virtual double tau_max() const = 0;
};

/// Interpolated trajectory. Below the first record the first recorded value
/// is held (the interval is a few 1e-13 wide with the default grid).
class TrajectoryHistory final : public MonomerHistory {
 public:
  explicit TrajectoryHistory(std::shared_ptr<const Trajectory> traj);
  double c1(double tau) const override;
  double tau_max() const override;
  const Trajectory& trajectory() const { return *traj_; }

 private:
  std::shared_ptr<const Trajectory> traj_;
};

/// c1 held at a constant kappa for all tau (synthetic input for tests).
class ConstantHistory final : public MonomerHistory {
 public:
  explicit ConstantHistory(double kappa) : kappa_(kappa) {}
  double c1(double) const override { return kappa_; }
  double tau_max() const override;

 private:
  double kappa_;
};

/// Initial-data term e^-tau sum_k tau^(x-k)/Gamma(x-k+1) c_k(0) for real
/// x >= n. Zero for monomeric data; tau = 0 gives c_x(0) at integer x.
double poisson_memory_sum(double x, double tau, const InitialData& init,
                          const ModelParams& params);

/// Gamma-kernel integral term. Throws OutOfRange if tau exceeds the history,
/// Config for x < n or quad_tol outside [1e-12, 1e-6], and
/// QuadratureNonConvergence when subdivision is exhausted.
double integral_term(double x, double tau, const MonomerHistory& history,
                     const ModelParams& params, double quad_tol = 1e-10,
                     int max_panels = 4000);

struct RepresentationOptions {
  double quad_tol = 1e-10;
  int max_panels = 4000;
};

/// poisson_memory_sum + integral_term.
double cluster_concentration(double x, double tau, const InitialData& init,
                             const MonomerHistory& history, const ModelParams& params,
                             const RepresentationOptions& opts = {});

/// (n tau / alpha)^((n-1)/n) times cluster_concentration.
double scaled_cluster(double x, double tau, const InitialData& init,
                      const MonomerHistory& history, const ModelParams& params,
                      const RepresentationOptions& opts = {});

struct ScaledQuery {
  double x = 0.0;
  double tau = 0.0;
};

/// scaled_cluster over a batch. Both policies give identical results; the
/// parallel one spreads queries over the OpenMP pool.
std::vector<double> scaled_cluster_batch(kernels::Policy policy,
                                         const std::vector<ScaledQuery>& queries,
                                         const InitialData& init,
                                         const MonomerHistory& history,
                                         const ModelParams& params,
                                         const RepresentationOptions& opts = {});

/// Monomer history long enough to reach tau_max, from the closed
/// monomer-bulk pair started at the data of `init`.
std::shared_ptr<const Trajectory> history_trajectory(const ModelParams& params,
                                                     const InitialData& init,
                                                     double tau_max,
                                                     const IntegratorOptions& opts = {});

/// Evaluates every (eta, tau) query at j = round(eta tau).
std::vector<SimilarityPoint> similarity_points(kernels::Policy policy,
                                               const std::vector<std::pair<double, double>>& eta_tau,
                                               const InitialData& init,
                                               const MonomerHistory& history,
                                               const ModelParams& params,
                                               const RepresentationOptions& opts = {});

/// Reads `eta,tau` rows; writes `eta,tau,j,scaled,profile,abs_error,envelope`.
/// The envelope column is nan where the bound is undefined ((1-eta) tau <= 1).
void run_query_csv(std::istream& in, std::ostream& out, const ModelParams& params,
                   const InitialData& init, const RepresentationOptions& opts,
                   kernels::Policy policy);

}  // namespace subdep
