#include "subdep/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "subdep/csv.hpp"
#include "subdep/manifest.hpp"

namespace subdep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

InitialData init_for(double mu, double rho) {
  return std::isinf(mu) ? InitialData::monomeric() : InitialData::power_law(rho, mu);
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::LogOverTau: return "LogOverTau";
    case Regime::PowerLaw: return "PowerLaw";
    case Regime::Exponential: return "Exponential";
  }
  return "Unknown";
}

Regime regime_classify(double mu, const ModelParams& params) {
  if (!(mu > 1.0)) fail(ErrorCode::Config, "mu must exceed 1");
  return mu < 2.0 - 1.0 / params.n() ? Regime::PowerLaw : Regime::LogOverTau;
}

Regime pointwise_regime(double eta, const InitialData& init) {
  if (eta < 1.0) return Regime::LogOverTau;
  return init.is_monomeric() ? Regime::Exponential : Regime::PowerLaw;
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    fail(ErrorCode::Config, "geometric grid needs 0 < lo < hi and at least 2 points");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

RateMeasurement measure_convergence(double eta, const ModelParams& params,
                                    const InitialData& init,
                                    const MonomerHistory& history,
                                    const std::vector<double>& tau_grid,
                                    const MeasureOptions& opts) {
  check_eta_guard(eta, opts.eta_guard);
  if (tau_grid.size() < 2) fail(ErrorCode::Config, "tau grid needs at least 2 points");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] > 0.0) || (i > 0 && !(tau_grid[i] > tau_grid[i - 1]))) {
      fail(ErrorCode::Config, "tau grid must be positive and strictly increasing");
    }
  }
  const double decades = std::log10(tau_grid.back() / tau_grid.front());
  if (decades < opts.min_decades) {
    fail(ErrorCode::InsufficientDecades,
         "tau grid spans " + std::to_string(decades) + " decades, need " +
             std::to_string(opts.min_decades));
  }

  RateMeasurement m;
  m.eta = eta;
  m.tau_grid = tau_grid;
  m.profile = similarity_profile(eta, params);

  std::vector<ScaledQuery> queries;
  for (double tau : tau_grid) {
    const double x = eta * tau;
    const long j = std::lround(x);
    if (x < params.n() || j < params.n()) {
      fail(ErrorCode::Config, "eta * tau falls below the critical size on this grid");
    }
    m.j.push_back(j);
    queries.push_back({x, tau});
    queries.push_back({static_cast<double>(j), tau});
  }
  const std::vector<double> scaled =
      scaled_cluster_batch(opts.policy, queries, init, history, params, opts.repr);

  std::vector<double> ratios;
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    const double tau = tau_grid[i];
    m.scaled_real.push_back(scaled[2 * i]);
    m.scaled_int.push_back(scaled[2 * i + 1]);
    m.errors_real.push_back(std::abs(scaled[2 * i] - m.profile));
    m.errors.push_back(std::abs(scaled[2 * i + 1] - m.profile));
    const bool log_defined = eta > 1.0 || (1.0 - eta) * tau > 1.0;
    const double e_log = log_defined ? envelope_log_term(eta, tau, params) : kNaN;
    const double e_mem = envelope_memory_term(eta, tau, params, init);
    m.envelope_log.push_back(e_log);
    m.envelope_memory.push_back(e_mem);
    m.envelope.push_back(e_log + e_mem);
    if (m.envelope.back() > 0.0) ratios.push_back(m.errors.back() / m.envelope.back());
  }
  m.fit = numerics::fit_loglog(m.tau_grid, m.errors, opts.burn_in);
  m.regime = pointwise_regime(eta, init);
  m.compact_regime =
      init.is_monomeric() ? Regime::LogOverTau : regime_classify(init.mu(), params);
  m.envelope_ratio_median = median(std::move(ratios));
  return m;
}

RateMeasurement measure_convergence(double eta, const ModelParams& params,
                                    const InitialData& init,
                                    const std::vector<double>& tau_grid,
                                    const MeasureOptions& opts,
                                    const IntegratorOptions& integrator) {
  if (tau_grid.empty()) fail(ErrorCode::Config, "empty tau grid");
  const TrajectoryHistory history(
      history_trajectory(params, init, tau_grid.back(), integrator));
  return measure_convergence(eta, params, init, history, tau_grid, opts);
}

SweepReport sweep(const SweepConfig& config) {
  SweepReport report;
  report.config = config;
  const std::vector<double> grid =
      geometric_grid(config.tau_min, config.tau_max, config.tau_points);

  struct Group {
    int n;
    double alpha;
    double mu;
    std::shared_ptr<const Trajectory> history;
    std::string status;
    std::string message;
  };
  std::vector<Group> groups;
  for (int n : config.n) {
    for (double alpha : config.alpha) {
      for (double mu : config.mu) groups.push_back({n, alpha, mu, nullptr, "ok", ""});
    }
  }

  const auto group_count = static_cast<std::ptrdiff_t>(groups.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::thread_limit())
  for (std::ptrdiff_t g = 0; g < group_count; ++g) {
    Group& group = groups[static_cast<std::size_t>(g)];
    try {
      const ModelParams params(group.alpha, group.n);
      group.history = history_trajectory(params, init_for(group.mu, config.rho),
                                         config.tau_max, config.integrator);
    } catch (const Error& e) {
      group.status = std::string(to_string(e.code()));
      group.message = e.what();
    } catch (const std::exception& e) {
      group.status = "Internal";
      group.message = e.what();
    }
  }

  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (double eta : config.eta) {
      SweepCell cell;
      cell.index = report.cells.size();
      cell.n = groups[g].n;
      cell.alpha = groups[g].alpha;
      cell.mu = groups[g].mu;
      cell.eta = eta;
      cell.status = groups[g].status;
      cell.message = groups[g].message;
      report.cells.push_back(std::move(cell));
    }
  }

  MeasureOptions inner = config.measure;
  inner.policy = kernels::Policy::Serial;  // parallelism is across cells
  const std::size_t per_group = config.eta.size();
  const auto cell_count = static_cast<std::ptrdiff_t>(report.cells.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::thread_limit())
  for (std::ptrdiff_t c = 0; c < cell_count; ++c) {
    SweepCell& cell = report.cells[static_cast<std::size_t>(c)];
    const Group& group = groups[static_cast<std::size_t>(c) / per_group];
    if (!group.history) continue;
    try {
      const ModelParams params(cell.alpha, cell.n);
      const TrajectoryHistory history(group.history);
      cell.measurement = measure_convergence(cell.eta, params, init_for(cell.mu, config.rho),
                                             history, grid, inner);
      cell.ok = true;
      cell.status = "ok";
    } catch (const Error& e) {
      cell.status = std::string(to_string(e.code()));
      cell.message = e.what();
    } catch (const std::exception& e) {
      cell.status = "Internal";
      cell.message = e.what();
    }
  }
  return report;
}

void write_summary_csv(const SweepReport& report, std::ostream& out) {
  csv::write_row(out, std::vector<std::string>{"n", "alpha", "mu", "eta", "slope", "r2",
                                               "regime", "envelope_ratio_median",
                                               "regime_compact", "status"});
  for (const SweepCell& cell : report.cells) {
    std::vector<std::string> row{std::to_string(cell.n), csv::format_double(cell.alpha),
                                 csv::format_double(cell.mu), csv::format_double(cell.eta)};
    if (cell.measurement) {
      const RateMeasurement& m = *cell.measurement;
      row.push_back(csv::format_double(m.fit.slope));
      row.push_back(csv::format_double(m.fit.r2));
      row.emplace_back(to_string(m.regime));
      row.push_back(csv::format_double(m.envelope_ratio_median));
      row.emplace_back(to_string(m.compact_regime));
    } else {
      for (int i = 0; i < 2; ++i) row.push_back(csv::format_double(kNaN));
      row.emplace_back("none");
      row.push_back(csv::format_double(kNaN));
      row.emplace_back("none");
    }
    row.push_back(cell.status);
    csv::write_row(out, row);
  }
}

void write_cell_csv(const RateMeasurement& m, std::ostream& out) {
  csv::write_row(out, std::vector<std::string>{"tau", "j", "scaled_real", "scaled_int",
                                               "profile", "error_real", "error_int",
                                               "envelope_log", "envelope_memory",
                                               "envelope"});
  for (std::size_t i = 0; i < m.tau_grid.size(); ++i) {
    csv::write_row(out, std::vector<std::string>{
                            csv::format_double(m.tau_grid[i]), std::to_string(m.j[i]),
                            csv::format_double(m.scaled_real[i]),
                            csv::format_double(m.scaled_int[i]),
                            csv::format_double(m.profile),
                            csv::format_double(m.errors_real[i]),
                            csv::format_double(m.errors[i]),
                            csv::format_double(m.envelope_log[i]),
                            csv::format_double(m.envelope_memory[i]),
                            csv::format_double(m.envelope[i])});
  }
}

void write_report(const SweepReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Config, "cannot create report directory " + dir.string());
  {
    std::ofstream out(dir / "summary.csv");
    if (!out) fail(ErrorCode::Config, "cannot write summary.csv");
    write_summary_csv(report, out);
  }
  for (const SweepCell& cell : report.cells) {
    if (!cell.measurement) continue;
    char name[32];
    std::snprintf(name, sizeof name, "cell_%04zu.csv", cell.index);
    std::ofstream out(dir / name);
    if (!out) fail(ErrorCode::Config, std::string("cannot write ") + name);
    write_cell_csv(*cell.measurement, out);
  }
  write_manifest(dir / "manifest.json", "rate", to_json(report.config));
}

}  // namespace subdep
