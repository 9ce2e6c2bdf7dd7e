// Acceptance checks. Each criterion prints exactly one PASS/FAIL line with the
// measured quantities; `acceptance N...` runs a subset, no argument runs all.
// Exit status is 1 if any selected criterion failed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "subdep/asymptotics.hpp"
#include "subdep/harness.hpp"
#include "subdep/integrator.hpp"
#include "subdep/representation.hpp"

using namespace subdep;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

// 1 -------------------------------------------------------------------------
constexpr double kMassTol = 1e-6;

Verdict mass_conservation() {
  double worst = 0.0;
  std::string where;
  for (int n : {2, 3, 4}) {
    for (double alpha : {0.5, 1.0, 2.0}) {
      for (bool pl : {false, true}) {
        const ModelParams p(alpha, n);
        const InitialData init = pl ? InitialData::power_law(1.0, 1.5) : InitialData::monomeric();
        const Trajectory tr = integrate_full(p, init, 100.0);
        for (std::size_t i = 0; i < tr.records().size(); ++i) {
          const double t = tr.records()[i].t;
          if (t < 1.0) continue;
          const double rel = std::abs(tr.mass_gain()[i] - alpha * t) / (alpha * t);
          if (rel > worst) {
            worst = rel;
            where = fmt("n=%d alpha=%g %s t=%.3g", n, alpha, pl ? "powerlaw" : "monomeric", t);
          }
        }
      }
    }
  }
  return {worst <= kMassTol,
          fmt("max rel mass error %.3e (tol %.0e) at %s", worst, kMassTol, where.c_str())};
}

// 2 -------------------------------------------------------------------------
constexpr double kReprTol = 1e-4;
constexpr long kReprMaxJ = 200;
constexpr double kReprMaxTau = 100.0;
// Values below this floor are dominated by the integrator's absolute error
// control rather than by the model; they are excluded from the comparison.
constexpr double kReprFloor = 1e-20;

Verdict representation_matches_ode() {
  double worst = 0.0;
  std::string where;
  std::size_t compared = 0;
  for (int n : {2, 3}) {
    for (bool pl : {false, true}) {
      const ModelParams p(1.0, n);
      const InitialData init = pl ? InitialData::power_law(1.0, 1.5) : InitialData::monomeric();
      IntegratorOptions o;
      o.rel_tol = 1e-10;
      o.abs_tol = 1e-30;
      o.snapshot_times = {1.0, 5.0, 20.0, 100.0, 300.0, 500.0};
      const double t_end = n == 2 ? 2000.0 : 600.0;
      auto tr = std::make_shared<const Trajectory>(integrate_full(p, init, t_end, 280L, o));
      const TrajectoryHistory history(tr);
      for (const ClusterState& s : tr->snapshots()) {
        if (s.tau > kReprMaxTau) continue;
        for (long j = n; j <= kReprMaxJ; ++j) {
          const double ode = s.cluster(j);
          if (ode < kReprFloor) continue;
          const double rep = cluster_concentration(static_cast<double>(j), s.tau, init, history, p);
          const double rel = std::abs(rep - ode) / ode;
          ++compared;
          if (rel > worst) {
            worst = rel;
            where = fmt("n=%d %s j=%ld tau=%.4g", n, pl ? "powerlaw" : "monomeric", j, s.tau);
          }
        }
      }
    }
  }
  return {worst <= kReprTol && compared > 1000,
          fmt("max rel difference %.3e over %zu values (tol %.0e) at %s", worst, compared,
              kReprTol, where.c_str())};
}

// 3 -------------------------------------------------------------------------
constexpr double kRatioLo = 0.9, kRatioHi = 1.1;

Verdict corrected_monomer_coefficient() {
  const ModelParams p(1.0, 2);
  const Trajectory tr = integrate_monomer_bulk(p, 0.0, 0.0, 1e7);
  const Record& r = tr.records().back();
  const double lead = std::cbrt(1.0 / 3.0) * std::pow(r.t, -1.0 / 3.0);
  const double ratio = (r.c1 - lead) / ((2.0 / 3.0) / r.t);
  return {r.t == 1e7 && within(ratio, kRatioLo, kRatioHi),
          fmt("ratio %.5f at t=%.3g (band [%.2f, %.2f])", ratio, r.t, kRatioLo, kRatioHi)};
}

// 4 -------------------------------------------------------------------------
Verdict scaled_monomer_law() {
  const double tau = 1e4;
  bool pass = true;
  std::string detail;
  for (int n : {2, 3}) {
    const ModelParams p(1.0, n);
    const auto tr = history_trajectory(p, InitialData::monomeric(), tau);
    const double c = tr->c1_of_tau(tau);
    const double scaled = std::pow(n * tau, (n - 1.0) / n) * std::pow(c, n - 1.0);
    const double ratio = (scaled - 1.0) / ((n - 1.0) * (1.0 - 1.0 / n) * std::log(tau) / tau);
    pass = pass && within(ratio, kRatioLo, kRatioHi);
    detail += fmt("n=%d ratio %.4f; ", n, ratio);
  }
  return {pass, detail + fmt("tau=1e4, band [%.2f, %.2f]", kRatioLo, kRatioHi)};
}

// 5 -------------------------------------------------------------------------
constexpr double kEnvLo = 0.5, kEnvHi = 2.0;

RateMeasurement eta_half(const IntegratorOptions& integ, const MeasureOptions& opts) {
  const ModelParams p(1.0, 2);
  const auto grid = geometric_grid(std::pow(10.0, 2.5), 1e4, 25);
  return measure_convergence(0.5, p, InitialData::monomeric(), grid, opts, integ);
}

Verdict rate_below_one() {
  const RateMeasurement m = eta_half({}, {});
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, first = 0.0, last = 0.0;
  bool have_first = false;
  for (std::size_t i = 0; i < m.tau_grid.size(); ++i) {
    const double tau = m.tau_grid[i];
    if (tau < 1e3 * (1 - 1e-12) || tau > 1e4 * (1 + 1e-12)) continue;
    const double r = m.errors[i] / m.envelope[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    if (!have_first) first = r;
    have_first = true;
    last = r;
  }
  const bool trend = std::abs(last - 1.0) < std::abs(first - 1.0);
  return {have_first && lo >= kEnvLo && hi <= kEnvHi && trend,
          fmt("error/envelope in [%.3f, %.3f] on tau in [1e3, 1e4] (band [%.1f, %.1f]); "
              "first %.3f, last %.3f",
              lo, hi, kEnvLo, kEnvHi, first, last)};
}

// 6 -------------------------------------------------------------------------
constexpr double kSlopeTol = 0.05;

MeasureOptions memory_window_options() {
  MeasureOptions o;
  o.min_decades = std::log10(30.0);
  return o;
}

RateMeasurement eta_two_power_law(double mu, const IntegratorOptions& integ,
                                  MeasureOptions opts) {
  const ModelParams p(1.0, 2);
  opts.min_decades = std::log10(30.0);
  const auto grid = geometric_grid(1e2, 3e3, 25);
  return measure_convergence(2.0, p, InitialData::power_law(1.0, mu), grid, opts, integ);
}

Verdict rate_above_one() {
  bool pass = true;
  std::string detail;
  for (double mu : {1.5, 1.25}) {
    const RateMeasurement m = eta_two_power_law(mu, {}, memory_window_options());
    const double expect = 0.5 - mu;
    pass = pass && std::abs(m.fit.slope - expect) <= kSlopeTol &&
           m.regime == Regime::PowerLaw;
    detail += fmt("mu=%.2f slope %.4f (expect %.2f); ", mu, m.fit.slope, expect);
  }
  return {pass, detail + fmt("tol %.2f", kSlopeTol)};
}

// 7 -------------------------------------------------------------------------
constexpr double kBeyondSlope = -3.0;
constexpr double kBeyondAbs = 1e-8;

RateMeasurement eta_two_monomeric(const IntegratorOptions& integ, const MeasureOptions& opts) {
  const ModelParams p(1.0, 2);
  const auto grid = geometric_grid(200.0 / std::pow(10.0, 1.5), 200.0, 25);
  return measure_convergence(2.0, p, InitialData::monomeric(), grid, opts, integ);
}

Verdict beyond_all_orders() {
  const RateMeasurement m = eta_two_monomeric({}, {});
  const double err = m.errors.back();
  return {m.fit.slope < kBeyondSlope && err < kBeyondAbs && m.tau_grid.back() == 200.0,
          fmt("slope %.2f (need < %.0f), error %.3e at tau=200 (need < %.0e)", m.fit.slope,
              kBeyondSlope, err, kBeyondAbs)};
}

// 8 -------------------------------------------------------------------------
constexpr double kResidualSlack = 0.3;
constexpr double kDroppedTol = 0.3;

Verdict manifold_order() {
  bool pass = true;
  std::string detail;
  const auto grid = geometric_grid(1e-3, 1e-1, 41);
  for (int n : {2, 3}) {
    const ModelParams p(1.0, n);
    const double full = manifold_residual_order(p, grid, 4);
    const double dropped = manifold_residual_order(p, grid, 3);
    pass = pass && full >= 3 * n + 2 - kResidualSlack &&
           std::abs(dropped - (2 * n + 4)) <= kDroppedTol;
    detail += fmt("n=%d full %.3f (need >= %.1f), dropped %.3f (expect %d +- %.1f); ", n, full,
                  3 * n + 2 - kResidualSlack, dropped, 2 * n + 4, kDroppedTol);
  }
  return {pass, detail};
}

// 9 -------------------------------------------------------------------------
constexpr double kLeadLo = 0.98, kLeadHi = 1.02;
constexpr double kLogLo = 0.85, kLogHi = 1.15;

Verdict time_scales() {
  const ModelParams p(1.0, 2);
  const Trajectory tr = integrate_monomer_bulk(p, 0.0, 0.0, 1e7);
  const Record& r = tr.records().back();
  const double t = r.t;
  const double tau_lead = tau_of_t_leading(t, p);
  const double tau_lead_ratio = r.tau / tau_lead;
  const double tau_log_ratio =
      (r.tau - tau_lead) / (tau_of_t_asymptote(t, p) - tau_lead);

  const double tau = 1e4;
  const double t_num = tr.t_of_tau(tau);
  const double t_lead = t_of_tau_leading(tau, p);
  const double t_lead_ratio = t_num / t_lead;
  const double t_log_ratio = (t_num - t_lead) / (t_of_tau_asymptote(tau, p) - t_lead);

  const bool pass = t == 1e7 && within(tau_lead_ratio, kLeadLo, kLeadHi) &&
                    within(t_lead_ratio, kLeadLo, kLeadHi) &&
                    within(tau_log_ratio, kLogLo, kLogHi) && within(t_log_ratio, kLogLo, kLogHi);
  return {pass,
          fmt("tau(t=1e7): leading %.5f, log %.4f; t(tau=1e4): leading %.5f, log %.4f "
              "(leading band [%.2f, %.2f], log band [%.2f, %.2f])",
              tau_lead_ratio, tau_log_ratio, t_lead_ratio, t_log_ratio, kLeadLo, kLeadHi, kLogLo,
              kLogHi)};
}

// 10 ------------------------------------------------------------------------
constexpr double kSlopeShift = 0.01;

std::vector<double> fitted_slopes(const IntegratorOptions& integ, const MeasureOptions& opts) {
  return {eta_half(integ, opts).fit.slope, eta_two_power_law(1.5, integ, opts).fit.slope,
          eta_two_power_law(1.25, integ, opts).fit.slope,
          eta_two_monomeric(integ, opts).fit.slope};
}

std::string sweep_summary() {
  SweepConfig cfg;
  cfg.mu = {std::numeric_limits<double>::infinity(), 1.5};
  cfg.eta = {0.5, 2.0};
  cfg.tau_max = 3e3;
  cfg.tau_points = 12;
  cfg.measure.min_decades = std::log10(30.0);
  std::ostringstream os;
  const SweepReport report = sweep(cfg);
  write_summary_csv(report, os);
  for (const SweepCell& c : report.cells) {
    if (c.measurement) write_cell_csv(*c.measurement, os);
  }
  return os.str();
}

std::string trajectory_dump() {
  std::ostringstream os;
  integrate_full(ModelParams(1.0, 3), InitialData::power_law(1.0, 1.5), 50.0).write_csv(os);
  return os.str();
}

Verdict determinism_and_hygiene() {
  const bool identical = sweep_summary() == sweep_summary() && trajectory_dump() == trajectory_dump();

  const IntegratorOptions base_integ;
  const MeasureOptions base_opts;
  const std::vector<double> base = fitted_slopes(base_integ, base_opts);

  IntegratorOptions tight_integ;
  tight_integ.rel_tol = base_integ.rel_tol / 2;
  tight_integ.abs_tol = base_integ.abs_tol / 2;
  const std::vector<double> tight = fitted_slopes(tight_integ, base_opts);

  MeasureOptions deep_opts;
  deep_opts.repr.quad_tol = base_opts.repr.quad_tol / 100;
  deep_opts.repr.max_panels = base_opts.repr.max_panels * 2;
  const std::vector<double> deep = fitted_slopes(base_integ, deep_opts);

  double shift = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    shift = std::max({shift, std::abs(tight[i] - base[i]), std::abs(deep[i] - base[i])});
  }
  return {identical && shift <= kSlopeShift,
          fmt("repeat runs %s; max slope change %.2e over %zu fits (tol %.2f)",
              identical ? "byte-identical" : "DIFFER", shift, base.size(), kSlopeShift)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "mass conservation", mass_conservation},
      {2, "representation matches ODE", representation_matches_ode},
      {3, "corrected monomer coefficient", corrected_monomer_coefficient},
      {4, "scaled monomer log law", scaled_monomer_law},
      {5, "rate for eta < 1", rate_below_one},
      {6, "initial-data memory rate for eta > 1", rate_above_one},
      {7, "beyond-all-orders decay", beyond_all_orders},
      {8, "center-manifold residual order", manifold_order},
      {9, "time-scale expansions", time_scales},
      {10, "determinism and numerical hygiene", determinism_and_hygiene},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const Criterion& c : criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) {
      continue;
    }
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s [%d] %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
