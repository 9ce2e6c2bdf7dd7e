#include "subdep/representation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "subdep/csv.hpp"
#include "subdep/numerics/special.hpp"

namespace subdep {

namespace {

// kernel values more than e^-60 below the peak are dropped from the range
constexpr double kLogWindow = 60.0;

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Solves g(s) = level for s in [a, b] where g is monotone on the bracket.
template <class G>
double bisect(G&& g, double a, double b, double level) {
  const bool rising = g(b) > g(a);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) break;
    if ((g(mid) < level) == rising) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> kernel_breaks(double m, double tau) {
  // log of the unnormalised Gamma kernel s^m e^-s, concave in s
  auto g = [m](double s) { return m > 0.0 ? m * std::log(s) - s : -s; };
  const double peak = std::min(m, tau);
  const double top = g(peak);
  double lo = 0.0;
  double hi = tau;
  if (peak > 0.0 && g(0.0) < top - kLogWindow) lo = bisect(g, 0.0, peak, top - kLogWindow);
  if (g(tau) < top - kLogWindow) hi = bisect(g, peak, tau, top - kLogWindow);

  std::vector<double> breaks{lo, hi};
  if (m < 4.0) {
    constexpr int kUniformPanels = 8;
    for (int i = 1; i < kUniformPanels; ++i) {
      breaks.push_back(lo + (hi - lo) * i / kUniformPanels);
    }
  } else {
    const double width = std::sqrt(m);
    breaks.push_back(peak);
    for (double k : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      breaks.push_back(peak - k * width);
      breaks.push_back(peak + k * width);
    }
    breaks.push_back(0.5 * tau);
  }
  std::erase_if(breaks, [&](double b) { return b < lo || b > hi; });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

void check_x(double x, const ModelParams& params) {
  if (!(x >= params.n()) || !std::isfinite(x)) {
    fail(ErrorCode::Config, "cluster size x = " + std::to_string(x) + " is below n = " +
                                std::to_string(params.n()));
  }
}

void check_tau(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    fail(ErrorCode::Config, "tau must be a finite number >= 0");
  }
}

}  // namespace

TrajectoryHistory::TrajectoryHistory(std::shared_ptr<const Trajectory> traj)
    : traj_(std::move(traj)) {
  if (!traj_ || traj_->empty()) {
    fail(ErrorCode::Config, "monomer history needs a non-empty trajectory");
  }
}

double TrajectoryHistory::c1(double tau) const {
  if (tau <= traj_->tau_min()) return traj_->records().front().c1;
  return traj_->c1_of_tau(tau);
}

double TrajectoryHistory::tau_max() const { return traj_->tau_max(); }

double ConstantHistory::tau_max() const { return std::numeric_limits<double>::infinity(); }

double poisson_memory_sum(double x, double tau, const InitialData& init,
                          const ModelParams& params) {
  check_x(x, params);
  check_tau(tau);
  if (init.is_monomeric()) return 0.0;
  double sum = 0.0;
  const long top = static_cast<long>(std::floor(x));
  for (long k = params.n(); k <= top; ++k) {
    const double w = numerics::log_poisson_weight(x - static_cast<double>(k), tau);
    if (w > -745.0) sum += std::exp(w) * init.cluster(k);
  }
  return sum;
}

double integral_term(double x, double tau, const MonomerHistory& history,
                     const ModelParams& params, double quad_tol, int max_panels) {
  check_x(x, params);
  check_tau(tau);
  if (!(quad_tol >= 1e-12 && quad_tol <= 1e-6)) {
    fail(ErrorCode::Config, "quadrature tolerance must lie in [1e-12, 1e-6]");
  }
  if (tau > history.tau_max()) {
    fail(ErrorCode::OutOfRange, "tau = " + csv::format_double(tau) +
                                    " lies beyond the monomer history (tau_max = " +
                                    csv::format_double(history.tau_max()) + ")");
  }
  if (tau == 0.0) return 0.0;
  const double m = x - params.n();
  const int power = params.n() - 1;
  auto integrand = [&](double s) {
    const double w = numerics::log_poisson_weight(m, s);
    if (w < -745.0) return 0.0;
    return std::exp(w) * ipow(history.c1(tau - s), power);
  };
  const std::vector<double> breaks = kernel_breaks(m, tau);
  numerics::QuadratureOptions opts;
  opts.rel_tol = quad_tol;
  opts.max_panels = max_panels;
  return numerics::adaptive_gauss_legendre(integrand, breaks, opts).value;
}

double cluster_concentration(double x, double tau, const InitialData& init,
                             const MonomerHistory& history, const ModelParams& params,
                             const RepresentationOptions& opts) {
  return poisson_memory_sum(x, tau, init, params) +
         integral_term(x, tau, history, params, opts.quad_tol, opts.max_panels);
}

double scaled_cluster(double x, double tau, const InitialData& init,
                      const MonomerHistory& history, const ModelParams& params,
                      const RepresentationOptions& opts) {
  return params.scale_factor(tau) * cluster_concentration(x, tau, init, history, params, opts);
}

std::vector<double> scaled_cluster_batch(kernels::Policy policy,
                                         const std::vector<ScaledQuery>& queries,
                                         const InitialData& init,
                                         const MonomerHistory& history,
                                         const ModelParams& params,
                                         const RepresentationOptions& opts) {
  std::vector<double> out(queries.size(), 0.0);
  if (policy == kernels::Policy::Serial) {
    for (std::size_t i = 0; i < queries.size(); ++i) {
      out[i] = scaled_cluster(queries[i].x, queries[i].tau, init, history, params, opts);
    }
    return out;
  }
  std::vector<std::exception_ptr> errors(queries.size());
  const auto count = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::thread_limit())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = scaled_cluster(queries[k].x, queries[k].tau, init, history, params, opts);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::shared_ptr<const Trajectory> history_trajectory(const ModelParams& params,
                                                     const InitialData& init,
                                                     double tau_max,
                                                     const IntegratorOptions& opts) {
  check_tau(tau_max);
  const double n = params.n();
  // leading-order t(tau) with some headroom
  double t_end = 1.5 * std::pow(n / (n + 1.0), (n + 1.0) / n) *
                     std::pow((n + 1.0) / params.alpha(), 1.0 / n) *
                     std::pow(tau_max, (n + 1.0) / n) +
                 1.0;
  for (;;) {
    auto traj = std::make_shared<const Trajectory>(
        integrate_monomer_bulk(params, init, t_end, opts));
    if (!traj->empty() && traj->tau_max() >= tau_max) return traj;
    t_end *= 2.0;
  }
}

std::vector<SimilarityPoint> similarity_points(
    kernels::Policy policy, const std::vector<std::pair<double, double>>& eta_tau,
    const InitialData& init, const MonomerHistory& history, const ModelParams& params,
    const RepresentationOptions& opts) {
  std::vector<ScaledQuery> queries;
  std::vector<long> sizes;
  for (const auto& [eta, tau] : eta_tau) {
    const long j = std::lround(eta * tau);
    if (j < params.n()) {
      fail(ErrorCode::Config, "round(eta * tau) = " + std::to_string(j) +
                                  " is below the critical size");
    }
    sizes.push_back(j);
    queries.push_back({static_cast<double>(j), tau});
  }
  const std::vector<double> scaled =
      scaled_cluster_batch(policy, queries, init, history, params, opts);
  std::vector<SimilarityPoint> points;
  for (std::size_t i = 0; i < eta_tau.size(); ++i) {
    SimilarityPoint p;
    p.eta = eta_tau[i].first;
    p.tau = eta_tau[i].second;
    p.j = sizes[i];
    p.scaled_value = scaled[i];
    p.profile_value = similarity_profile(p.eta, params);
    p.abs_error = std::abs(p.scaled_value - p.profile_value);
    points.push_back(p);
  }
  return points;
}

void run_query_csv(std::istream& in, std::ostream& out, const ModelParams& params,
                   const InitialData& init, const RepresentationOptions& opts,
                   kernels::Policy policy) {
  const csv::Table table = csv::read(in);
  const std::size_t eta_col = table.column("eta");
  const std::size_t tau_col = table.column("tau");
  std::vector<std::pair<double, double>> eta_tau;
  double tau_top = 0.0;
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      fail(ErrorCode::Config, "query row has the wrong number of fields");
    }
    const double eta = csv::parse_double(row[eta_col]);
    const double tau = csv::parse_double(row[tau_col]);
    check_eta_guard(eta);
    if (!(tau > 0.0) || !std::isfinite(tau)) fail(ErrorCode::Config, "query tau must be > 0");
    eta_tau.emplace_back(eta, tau);
    tau_top = std::max(tau_top, tau);
  }
  csv::write_row(out, std::vector<std::string>{"eta", "tau", "j", "scaled", "profile",
                                               "abs_error", "envelope"});
  if (eta_tau.empty()) return;
  const TrajectoryHistory history(history_trajectory(params, init, tau_top));
  const auto points = similarity_points(policy, eta_tau, init, history, params, opts);
  for (const SimilarityPoint& p : points) {
    double envelope = std::numeric_limits<double>::quiet_NaN();
    if (p.eta > 1.0 || (1.0 - p.eta) * p.tau > 1.0) {
      envelope = rate_envelope(p.eta, p.tau, params, init);
    }
    csv::write_row(out, std::vector<std::string>{
                            csv::format_double(p.eta), csv::format_double(p.tau),
                            std::to_string(p.j), csv::format_double(p.scaled_value),
                            csv::format_double(p.profile_value),
                            csv::format_double(p.abs_error), csv::format_double(envelope)});
  }
}

}  // namespace subdep
