#include "subdep/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>

#include "subdep/csv.hpp"
#include "subdep/numerics/rosenbrock.hpp"
#include "subdep/numerics/special.hpp"

namespace subdep {

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Lower-bidiagonal chain z_k hanging off a hub z_h:
//   (sigma - d_k) z_k - l_k z_{k-1} - u_k z_h = r_k
//   (sigma - a) z_h - sum_k w_k z_k           = r_h
// Writing z_k = p_k + q_k z_h eliminates the chain in one forward sweep.
struct ArrowSolver {
  std::vector<double> d, l, u, w, p, q;

  void resize(std::size_t m) {
    d.assign(m, 0.0);
    l.assign(m, 0.0);
    u.assign(m, 0.0);
    w.assign(m, 0.0);
    p.assign(m, 0.0);
    q.assign(m, 0.0);
  }

  // r_chain is overwritten with z_k; returns z_h
  double solve(double sigma, double a, double r_hub, std::span<double> r_chain) {
    const std::size_t m = d.size();
    double p_prev = 0.0;
    double q_prev = 0.0;
    double num = r_hub;
    double den = sigma - a;
    for (std::size_t k = 0; k < m; ++k) {
      const double inv = 1.0 / (sigma - d[k]);
      p[k] = (r_chain[k] + l[k] * p_prev) * inv;
      q[k] = (u[k] + l[k] * q_prev) * inv;
      num += w[k] * p[k];
      den -= w[k] * q[k];
      p_prev = p[k];
      q_prev = q[k];
    }
    const double z_hub = num / den;
    for (std::size_t k = 0; k < m; ++k) r_chain[k] = p[k] + q[k] * z_hub;
    return z_hub;
  }
};

// State: [c1, c_n..c_J, T, M, tau, zeta] with T = sum_{j>J} c_j and M the
// mass that has moved past J since t = 0.
class HierarchySystem {
 public:
  HierarchySystem(const ModelParams& params, long truncation, double floor,
                  kernels::Policy policy)
      : alpha_(params.alpha()),
        n_(params.n()),
        big_j_(truncation),
        k_(static_cast<std::size_t>(truncation - params.n() + 1)),
        floor_(floor),
        policy_(policy) {
    arrow_.resize(k_ + 1);
  }

  std::size_t size() const { return k_ + 5; }
  std::size_t tail_size() const { return k_; }
  std::size_t idx_count() const { return k_ + 1; }
  std::size_t idx_mass() const { return k_ + 2; }
  std::size_t idx_tau() const { return k_ + 3; }
  std::size_t idx_zeta() const { return k_ + 4; }

  void activate_zeta() { zeta_active_ = true; }
  std::size_t clamps() const { return clamps_; }

  double bulk(std::span<const double> u) const {
    return kernels::chunked_sum(policy_, u.subspan(1, k_)) + u[idx_count()];
  }

  void rhs(std::span<const double> u, std::span<double> du) {
    const double c1 = u[0];
    const double feed = ipow(c1, n_ - 1);
    const double y = bulk(u);
    const double c_last = u[k_];
    const double overflow = u[idx_count()];
    du[0] = alpha_ - n_ * feed * c1 - c1 * y;
    kernels::tail_rhs(policy_, c1, feed, u.subspan(1, k_), du.subspan(1, k_));
    du[idx_count()] = c1 * c_last;
    du[idx_mass()] = c1 * (static_cast<double>(big_j_ + 1) * c_last + overflow);
    du[idx_tau()] = c1;
    du[idx_zeta()] = zeta_active_ ? 1.0 / c1 : 0.0;
  }

  void linearize(std::span<const double> u) {
    const double c1 = u[0];
    const double pow_n1 = ipow(c1, n_ - 1);
    lin_c1_ = c1;
    lin_c_last_ = u[k_];
    lin_overflow_ = u[idx_count()];
    hub_ = -static_cast<double>(n_) * n_ * pow_n1 - bulk(u);
    for (std::size_t k = 0; k < k_; ++k) {
      arrow_.d[k] = -c1;
      arrow_.l[k] = k == 0 ? 0.0 : c1;
      arrow_.u[k] = k == 0 ? n_ * pow_n1 - u[1] : u[k] - u[k + 1];
      arrow_.w[k] = -c1;
    }
    arrow_.d[k_] = 0.0;
    arrow_.l[k_] = c1;
    arrow_.u[k_] = u[k_];
    arrow_.w[k_] = -c1;
  }

  void solve(double sigma, std::span<double> r) {
    const double c1 = lin_c1_;
    const double z_hub = arrow_.solve(sigma, hub_, r[0], r.subspan(1, k_ + 1));
    r[0] = z_hub;
    const double z_last = r[k_];
    const double z_count = r[idx_count()];
    r[idx_mass()] = (r[idx_mass()] +
                     (static_cast<double>(big_j_ + 1) * lin_c_last_ + lin_overflow_) * z_hub +
                     c1 * static_cast<double>(big_j_ + 1) * z_last + c1 * z_count) /
                    sigma;
    r[idx_tau()] = (r[idx_tau()] + z_hub) / sigma;
    r[idx_zeta()] = zeta_active_ ? (r[idx_zeta()] - z_hub / (c1 * c1)) / sigma
                                 : r[idx_zeta()] / sigma;
  }

  bool admissible(std::span<const double> u) const {
    if (zeta_active_ ? !(u[0] > 0.0) : !(u[0] >= floor_)) return false;
    for (std::size_t i = 1; i <= k_ + 1; ++i) {
      if (!(u[i] >= floor_)) return false;
    }
    return true;
  }

  void accept(std::span<double> u) {
    for (std::size_t i = 0; i <= k_ + 1; ++i) {
      if (u[i] < 0.0) {
        u[i] = 0.0;
        ++clamps_;
      }
    }
  }

 private:
  double alpha_;
  int n_;
  long big_j_;
  std::size_t k_;
  double floor_;
  kernels::Policy policy_;
  bool zeta_active_ = false;
  std::size_t clamps_ = 0;

  ArrowSolver arrow_;
  double hub_ = 0.0;
  double lin_c1_ = 0.0;
  double lin_c_last_ = 0.0;
  double lin_overflow_ = 0.0;
};

// State: [x, y, tau, zeta].
class BulkSystem {
 public:
  BulkSystem(const ModelParams& params, double floor)
      : alpha_(params.alpha()), n_(params.n()), floor_(floor) {}

  std::size_t size() const { return 4; }
  void activate_zeta() { zeta_active_ = true; }
  std::size_t clamps() const { return clamps_; }

  void rhs(std::span<const double> u, std::span<double> du) {
    const double xn1 = ipow(u[0], n_ - 1);
    du[0] = alpha_ - n_ * xn1 * u[0] - u[0] * u[1];
    du[1] = xn1 * u[0];
    du[2] = u[0];
    du[3] = zeta_active_ ? 1.0 / u[0] : 0.0;
  }

  void linearize(std::span<const double> u) {
    x_ = u[0];
    const double xn1 = ipow(x_, n_ - 1);
    hub_ = -static_cast<double>(n_) * n_ * xn1 - u[1];
    feed_ = n_ * xn1;
  }

  void solve(double sigma, std::span<double> r) {
    // y row: sigma z_y - feed z_x = r_y; x row: (sigma - hub) z_x + x z_y = r_x
    const double z_x = (r[0] - x_ * r[1] / sigma) / (sigma - hub_ + x_ * feed_ / sigma);
    r[1] = (r[1] + feed_ * z_x) / sigma;
    r[0] = z_x;
    r[2] = (r[2] + z_x) / sigma;
    r[3] = zeta_active_ ? (r[3] - z_x / (x_ * x_)) / sigma : r[3] / sigma;
  }

  bool admissible(std::span<const double> u) const {
    if (zeta_active_ ? !(u[0] > 0.0) : !(u[0] >= floor_)) return false;
    return u[1] >= floor_;
  }

  void accept(std::span<double> u) {
    for (std::size_t i = 0; i < 2; ++i) {
      if (u[i] < 0.0) {
        u[i] = 0.0;
        ++clamps_;
      }
    }
  }

 private:
  double alpha_;
  int n_;
  double floor_;
  bool zeta_active_ = false;
  std::size_t clamps_ = 0;
  double x_ = 0.0;
  double hub_ = 0.0;
  double feed_ = 0.0;
};

// Derivative at x[i] of the Lagrange polynomial through up to five
// neighbouring knots (one-sided near the ends).
double stencil_slope(const std::vector<double>& x, const std::vector<double>& y,
                     std::size_t i) {
  const std::size_t m = x.size();
  const std::size_t width = std::min<std::size_t>(5, m);
  std::size_t lo = i >= width / 2 ? i - width / 2 : 0;
  lo = std::min(lo, m - width);
  double slope = 0.0;
  for (std::size_t a = lo; a < lo + width; ++a) {
    // d/dx of the a-th basis polynomial at x[i]
    double weight = 0.0;
    if (a == i) {
      for (std::size_t b = lo; b < lo + width; ++b) {
        if (b != a) weight += 1.0 / (x[a] - x[b]);
      }
    } else {
      weight = 1.0 / (x[a] - x[i]);
      for (std::size_t b = lo; b < lo + width; ++b) {
        if (b != a && b != i) weight *= (x[i] - x[b]) / (x[a] - x[b]);
      }
    }
    slope += weight * y[a];
  }
  return slope;
}

std::vector<double> output_times(double t_end, const IntegratorOptions& opts,
                                 bool include_origin) {
  std::vector<double> times;
  if (include_origin) times.push_back(0.0);
  if (t_end <= 0.0) return times;
  for (double t = opts.first_record; t < t_end; t *= opts.record_ratio) {
    times.push_back(t);
  }
  times.push_back(t_end);
  for (double s : opts.snapshot_times) {
    if (s > 0.0 && s <= t_end) times.push_back(s);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

// Steps through the output times, activating zeta at the first positive one
// when c1(0) = 0 (zeta diverges logarithmically at a zero start).
template <class System>
std::size_t drive(System& sys, std::vector<double>& u, std::size_t zeta_index,
                  const std::vector<double>& times, const IntegratorOptions& opts,
                  bool zeta_from_origin,
                  const std::function<void(double, const std::vector<double>&)>& emit) {
  numerics::Rosenbrock4<System> stepper(u.size());
  numerics::StepControl ctl;
  ctl.rel_tol = opts.rel_tol;
  ctl.abs_tol = opts.abs_tol;

  if (zeta_from_origin) sys.activate_zeta();
  double t = 0.0;
  double h = times.empty() ? 0.0 : 1e-3 * std::max(times.front(), opts.first_record);
  bool zeta_on = zeta_from_origin;
  for (double target : times) {
    if (target > t) stepper.advance(sys, u, t, target, h, ctl);
    if (!zeta_on && target > 0.0) {
      sys.activate_zeta();
      u[zeta_index] = 0.0;
      zeta_on = true;
    }
    emit(t, u);
  }
  return stepper.accepted_steps();
}

double tau_estimate(const ModelParams& params, const InitialData& init, double t) {
  const double alpha = params.alpha();
  const double n = params.n();
  const double c1_max = std::max(init.c1_0(), std::pow(alpha / n, 1.0 / n));
  const double coeff_b = (n + 1.0) / n * std::pow(alpha / (n + 1.0), 1.0 / (n + 1.0));
  const double coeff_d = n * (n - 1.0) / (n + 1.0);
  const double asymptote = coeff_b * std::pow(t, n / (n + 1.0)) +
                           coeff_d * std::abs(std::log(t)) + c1_max;
  return std::min({c1_max * t, init.c1_0() * t + 0.5 * alpha * t * t, asymptote});
}

}  // namespace

void validate(const IntegratorOptions& opts) {
  auto in_range = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in_range(opts.rel_tol, 1e-12, 1e-4)) {
    fail(ErrorCode::Config, "relative tolerance must lie in [1e-12, 1e-4]");
  }
  if (!(opts.abs_tol > 0.0) || !std::isfinite(opts.abs_tol)) {
    fail(ErrorCode::Config, "absolute tolerance must be positive");
  }
  if (!(opts.record_ratio > 1.0) || !std::isfinite(opts.record_ratio)) {
    fail(ErrorCode::Config, "record ratio must exceed 1");
  }
  if (!(opts.first_record > 0.0) || !std::isfinite(opts.first_record)) {
    fail(ErrorCode::Config, "first record time must be positive");
  }
  if (!(opts.tail_tol > 0.0)) fail(ErrorCode::Config, "tail tolerance must be positive");
}

Trajectory::Trajectory(ModelParams params, std::vector<Record> records,
                       std::vector<double> mass_gain,
                       std::vector<ClusterState> snapshots, long truncation,
                       std::size_t clamp_count)
    : params_(params),
      records_(std::move(records)),
      mass_gain_(std::move(mass_gain)),
      snapshots_(std::move(snapshots)),
      truncation_(truncation),
      clamp_count_(clamp_count) {
  if (records_.empty()) return;
  std::vector<double> tau, c1, t, dt;
  for (const Record& r : records_) {
    tau.push_back(r.tau);
    c1.push_back(r.c1);
    t.push_back(r.t);
    dt.push_back(r.c1 > 0.0 ? 1.0 / r.c1 : 0.0);
  }
  // dc1/dtau from the right-hand side is a difference of O(1) terms that
  // nearly cancel at late times, so the slopes come from the records instead
  std::vector<double> dc1(tau.size(), 0.0);
  if (tau.size() > 1) {
    for (std::size_t i = 0; i < tau.size(); ++i) dc1[i] = stencil_slope(tau, c1, i);
  }
  c1_interp_ = numerics::MonotoneCubic(tau, std::move(c1), std::move(dc1));
  t_interp_ = numerics::MonotoneCubic(std::move(tau), std::move(t), std::move(dt));
}

double Trajectory::tau_min() const {
  if (records_.empty()) fail(ErrorCode::OutOfRange, "empty trajectory");
  return records_.front().tau;
}

double Trajectory::tau_max() const {
  if (records_.empty()) fail(ErrorCode::OutOfRange, "empty trajectory");
  return records_.back().tau;
}

double Trajectory::c1_of_tau(double tau) const {
  if (records_.empty()) fail(ErrorCode::OutOfRange, "empty trajectory");
  return c1_interp_(tau);
}

double Trajectory::t_of_tau(double tau) const {
  if (records_.empty()) fail(ErrorCode::OutOfRange, "empty trajectory");
  return t_interp_(tau);
}

void Trajectory::write_csv(std::ostream& out) const {
  csv::write_row(out, std::vector<std::string>{"t", "tau", "zeta", "c1", "y"});
  for (const Record& r : records_) {
    csv::write_row(out, std::vector<double>{r.t, r.tau, r.zeta, r.c1, r.y});
  }
}

long default_truncation(const ModelParams& params, const InitialData& init,
                        double t_end) {
  const double tau = t_end > 0.0 ? tau_estimate(params, init, t_end) : 0.0;
  return static_cast<long>(std::ceil(1.2 * tau)) + 64 + params.n();
}

Trajectory integrate_full(const ModelParams& params, const InitialData& init,
                          double t_end, std::optional<long> truncation,
                          const IntegratorOptions& opts) {
  validate(opts);
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    fail(ErrorCode::Config, "t_end must be a finite number >= 0");
  }
  const int n = params.n();
  const long big_j = truncation ? *truncation : default_truncation(params, init, t_end);
  if (big_j < n + 10) {
    fail(ErrorCode::Config, "truncation J = " + std::to_string(big_j) +
                                " is below n + 10 = " + std::to_string(n + 10));
  }

  HierarchySystem sys(params, big_j, -10.0 * opts.abs_tol, opts.policy);
  const std::size_t k = sys.tail_size();
  std::vector<double> u(sys.size(), 0.0);
  std::vector<double> initial_tail(k);
  u[0] = init.c1_0();
  for (std::size_t i = 0; i < k; ++i) {
    initial_tail[i] = init.cluster(n + static_cast<long>(i));
    u[1 + i] = initial_tail[i];
  }
  u[sys.idx_count()] = init.tail_count(big_j + 1);

  std::vector<Record> records;
  std::vector<double> mass_gain;
  std::vector<ClusterState> snapshots;
  std::vector<double> weighted(k);
  const auto& snap_times = opts.snapshot_times;

  auto emit = [&](double t, const std::vector<double>& s) {
    const std::span<const double> view(s);
    records.push_back(Record{t, s[sys.idx_tau()], s[sys.idx_zeta()], s[0], sys.bulk(view)});
    for (std::size_t i = 0; i < k; ++i) {
      weighted[i] = static_cast<double>(n + static_cast<long>(i)) * (s[1 + i] - initial_tail[i]);
    }
    mass_gain.push_back(s[0] - init.c1_0() + kernels::chunked_sum(opts.policy, weighted) +
                        s[sys.idx_mass()]);
    if (std::find(snap_times.begin(), snap_times.end(), t) != snap_times.end()) {
      ClusterState cs;
      cs.t = t;
      cs.tau = s[sys.idx_tau()];
      cs.c1 = s[0];
      cs.n = n;
      cs.tail.assign(s.begin() + 1, s.begin() + 1 + static_cast<std::ptrdiff_t>(k));
      snapshots.push_back(std::move(cs));
    }
  };

  const bool from_origin = init.c1_0() > 0.0;
  drive(sys, u, sys.idx_zeta(), output_times(t_end, opts, from_origin), opts,
        from_origin, emit);

  // c_J net of the part it inherits from the initial data
  const double tau = u[sys.idx_tau()];
  double memory = 0.0;
  if (!init.is_monomeric()) {
    for (long kk = n; kk <= big_j; ++kk) {
      memory += std::exp(numerics::log_poisson_weight(static_cast<double>(big_j - kk), tau)) *
                init.cluster(kk);
    }
  }
  const double dynamic_last = u[k] - memory;
  if (dynamic_last > opts.tail_tol) {
    fail(ErrorCode::TruncationBreach,
         "c_J = " + csv::format_double(dynamic_last) + " exceeds the tail tolerance " +
             csv::format_double(opts.tail_tol) + " at J = " + std::to_string(big_j) +
             "; rerun with a larger truncation");
  }

  return Trajectory(params, std::move(records), std::move(mass_gain), std::move(snapshots),
                    big_j, sys.clamps());
}

Trajectory integrate_monomer_bulk(const ModelParams& params, double x0, double y0,
                                  double t_end, const IntegratorOptions& opts) {
  validate(opts);
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    fail(ErrorCode::Config, "t_end must be a finite number >= 0");
  }
  if (!(x0 >= 0.0) || !(y0 >= 0.0) || !std::isfinite(x0) || !std::isfinite(y0)) {
    fail(ErrorCode::Config, "x0 and y0 must be finite and >= 0");
  }
  BulkSystem sys(params, -10.0 * opts.abs_tol);
  std::vector<double> u{x0, y0, 0.0, 0.0};
  std::vector<Record> records;
  auto emit = [&](double t, const std::vector<double>& s) {
    records.push_back(Record{t, s[2], s[3], s[0], s[1]});
  };
  const bool from_origin = x0 > 0.0;
  drive(sys, u, 3, output_times(t_end, opts, from_origin), opts, from_origin, emit);
  return Trajectory(params, std::move(records), {}, {}, 0, sys.clamps());
}

Trajectory integrate_monomer_bulk(const ModelParams& params, const InitialData& init,
                                  double t_end, const IntegratorOptions& opts) {
  return integrate_monomer_bulk(params, init.c1_0(), init.tail_count(params.n()), t_end,
                                opts);
}

std::vector<double> defect(const Trajectory& traj) {
  std::vector<double> v;
  v.reserve(traj.records().size());
  for (const Record& r : traj.records()) v.push_back(traj.params().alpha() - r.c1 * r.y);
  return v;
}

}  // namespace subdep
