#pragma once

// Time integration of the truncated cluster hierarchy and of the closed
// monomer-bulk pair (x, y) = (c1, sum_{j>=n} c_j), with the time scales
//   tau  = int c1 dt
//   zeta = int 1/c1 dt
// carried as quadrature states.
//
// The long-time dynamics are stiff (the monomer relaxes on the fast scale
// 1/y while the profile evolves on scale t), so the stepper is a
// linearly implicit Rosenbrock method. The Jacobian of the hierarchy is an
// arrow (c1 couples to everything) plus a lower bidiagonal chain, which
// makes every linear solve O(J).

#include <iosfwd>
#include <optional>
#include <vector>

#include "subdep/core.hpp"
#include "subdep/kernels.hpp"
#include "subdep/numerics/interp.hpp"

namespace subdep {

struct Record {
  double t = 0.0;
  double tau = 0.0;
  double zeta = 0.0;
  double c1 = 0.0;
  double y = 0.0;
};

struct IntegratorOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Geometric spacing of the dense output in t.
  double record_ratio = 1.02;
  /// First positive output time; also the origin of zeta when c1(0) = 0.
  double first_record = 1e-6;
  /// Largest admissible c_J (net of the initial-data memory part).
  double tail_tol = 1e-10;
  /// Times at which the whole ClusterState is stored (full system only).
  std::vector<double> snapshot_times;
  kernels::Policy policy = kernels::Policy::Parallel;
};

/// Throws Error(Config) for tolerances outside [1e-12, 1e-4] and the like.
void validate(const IntegratorOptions& opts);

class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(ModelParams params, std::vector<Record> records,
             std::vector<double> mass_gain, std::vector<ClusterState> snapshots,
             long truncation, std::size_t clamp_count);

  const ModelParams& params() const { return params_; }
  const std::vector<Record>& records() const { return records_; }
  /// c1 - c1(0) + sum_j j (c_j - c_j(0)) including the mass carried past J,
  /// one entry per record. Empty for the monomer-bulk system.
  const std::vector<double>& mass_gain() const { return mass_gain_; }
  const std::vector<ClusterState>& snapshots() const { return snapshots_; }
  /// J of the truncated hierarchy, 0 for the monomer-bulk system.
  long truncation() const { return truncation_; }
  /// Negative undershoots reset to zero by the clamping policy.
  std::size_t clamp_count() const { return clamp_count_; }

  bool empty() const { return records_.empty(); }
  double tau_min() const;
  double tau_max() const;

  /// Monotone cubic Hermite interpolant of c1 against tau. Knot slopes come
  /// from five-point Lagrange differences of the records. Throws OutOfRange
  /// outside [tau_min, tau_max].
  double c1_of_tau(double tau) const;

  /// Inverse lookup t(tau) by monotone interpolation of the records.
  double t_of_tau(double tau) const;

  /// Header `t,tau,zeta,c1,y`, 17 significant digits.
  void write_csv(std::ostream& out) const;

 private:
  ModelParams params_{1.0, 2};
  std::vector<Record> records_;
  std::vector<double> mass_gain_;
  std::vector<ClusterState> snapshots_;
  long truncation_ = 0;
  std::size_t clamp_count_ = 0;
  numerics::MonotoneCubic c1_interp_;
  numerics::MonotoneCubic t_interp_;
};

/// Default truncation: ceil(1.2 * tau_est) + 64 with tau_est an estimate of
/// tau(t_end) capped by the a-priori bound c1 <= max(c1(0), (alpha/n)^(1/n)).
long default_truncation(const ModelParams& params, const InitialData& init,
                        double t_end);

/// Integrates c1, c_n..c_J on [0, t_end]. Clusters pushed past J are kept as
/// an overflow count (so y is exact) and an overflow mass.
/// Throws TruncationBreach if the final c_J exceeds opts.tail_tol after its
/// initial-data part is removed; NonPositiveState / StepSizeUnderflow on
/// stepper failure.
Trajectory integrate_full(const ModelParams& params, const InitialData& init,
                          double t_end, std::optional<long> truncation = {},
                          const IntegratorOptions& opts = {});

/// The closed pair x' = alpha - n x^n - x y, y' = x^n.
Trajectory integrate_monomer_bulk(const ModelParams& params, double x0, double y0,
                                  double t_end, const IntegratorOptions& opts = {});

/// Same, started from the data of `init` (x0 = c1(0), y0 = sum_j c_j(0)).
Trajectory integrate_monomer_bulk(const ModelParams& params, const InitialData& init,
                                  double t_end, const IntegratorOptions& opts = {});

/// Defect v = alpha - x y along the records.
std::vector<double> defect(const Trajectory& traj);

}  // namespace subdep
