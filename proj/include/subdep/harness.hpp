#pragma once

// Convergence experiments: scaled cluster concentrations against the
// similarity profile on a tau grid, log-log rate fits, regime labels and
// parameter sweeps written out as a report bundle.

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subdep/core.hpp"
#include "subdep/integrator.hpp"
#include "subdep/numerics/fit.hpp"
#include "subdep/representation.hpp"

namespace subdep {

enum class Regime { LogOverTau, PowerLaw, Exponential };

std::string_view to_string(Regime regime);

/// Rate on compact sets of eta: PowerLaw for 1 < mu < 2 - 1/n, LogOverTau
/// for mu >= 2 - 1/n. Throws Config for mu <= 1.
Regime regime_classify(double mu, const ModelParams& params);

/// Rate at a single eta: LogOverTau below 1; above 1 the initial-data term
/// sets a power law for power-law data and monomeric data decays
/// exponentially.
Regime pointwise_regime(double eta, const InitialData& init);

struct MeasureOptions {
  RepresentationOptions repr;
  /// Leading fraction of the grid left out of the slope fit.
  double burn_in = 0.2;
  double eta_guard = kDefaultEtaGuard;
  /// Smallest admissible log10(tau_max / tau_min).
  double min_decades = 1.5;
  kernels::Policy policy = kernels::Policy::Parallel;
};

struct RateMeasurement {
  double eta = 0.0;
  std::vector<double> tau_grid;
  std::vector<long> j;               // round(eta tau)
  std::vector<double> scaled_real;   // at x = eta tau
  std::vector<double> scaled_int;    // at x = j
  std::vector<double> errors_real;
  std::vector<double> errors;        // integer mode
  std::vector<double> envelope_log;
  std::vector<double> envelope_memory;
  std::vector<double> envelope;      // sum of the two terms
  double profile = 0.0;
  numerics::LineFit fit;             // log errors vs log tau, integer mode
  Regime regime = Regime::LogOverTau;          // pointwise view
  Regime compact_regime = Regime::LogOverTau;  // compact-set view
  /// Median of errors/envelope over points with a positive envelope; nan if
  /// there are none.
  double envelope_ratio_median = 0.0;
};

/// Geometric grid of `points` values from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int points);

/// Throws Config (eta guard, grid order), InsufficientDecades, and anything
/// raised by the representation.
RateMeasurement measure_convergence(double eta, const ModelParams& params,
                                    const InitialData& init,
                                    const MonomerHistory& history,
                                    const std::vector<double>& tau_grid,
                                    const MeasureOptions& opts = {});

/// Same, integrating the monomer history itself.
RateMeasurement measure_convergence(double eta, const ModelParams& params,
                                    const InitialData& init,
                                    const std::vector<double>& tau_grid,
                                    const MeasureOptions& opts = {},
                                    const IntegratorOptions& integrator = {});

struct SweepConfig {
  std::vector<int> n{2};
  std::vector<double> alpha{1.0};
  /// Initial-data exponents; +inf stands for monomeric data.
  std::vector<double> mu{std::numeric_limits<double>::infinity()};
  std::vector<double> eta{0.5};
  double rho = 1.0;
  double tau_min = 1e2;
  double tau_max = 1e4;
  int tau_points = 25;
  MeasureOptions measure;
  IntegratorOptions integrator;
};

struct SweepCell {
  std::size_t index = 0;
  int n = 2;
  double alpha = 1.0;
  double mu = 0.0;
  double eta = 0.0;
  bool ok = false;
  std::string status;  // "ok" or an error code name
  std::string message;
  std::optional<RateMeasurement> measurement;
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepCell> cells;  // cartesian order n, alpha, mu, eta
};

/// Runs every cell; a failing cell records its error code and the sweep
/// continues. One monomer history per (n, alpha, mu) is shared by its cells.
SweepReport sweep(const SweepConfig& config);

/// `summary.csv`, `cell_<index>.csv` per successful cell and `manifest.json`.
void write_report(const SweepReport& report, const std::filesystem::path& dir);

void write_summary_csv(const SweepReport& report, std::ostream& out);
void write_cell_csv(const RateMeasurement& m, std::ostream& out);

}  // namespace subdep
