#include "cli.hpp"

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "subdep/asymptotics.hpp"
#include "subdep/core.hpp"
#include "subdep/csv.hpp"
#include "subdep/harness.hpp"
#include "subdep/integrator.hpp"
#include "subdep/manifest.hpp"
#include "subdep/representation.hpp"

namespace subdep::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::OutOfRange:
    case ErrorCode::InsufficientDecades:
      return kExitConfig;
    case ErrorCode::TruncationBreach:
      return kExitTruncation;
    default:
      return kExitNumerics;
  }
}

int exit_code(const std::string& status) {
  for (ErrorCode c : {ErrorCode::Config, ErrorCode::OutOfRange, ErrorCode::TruncationBreach,
                      ErrorCode::NonPositiveState, ErrorCode::StepSizeUnderflow,
                      ErrorCode::QuadratureNonConvergence, ErrorCode::DegenerateGrid,
                      ErrorCode::InsufficientDecades}) {
    if (status == to_string(c)) return exit_code(c);
  }
  return kExitNumerics;
}

// Collects every violated constraint before anything is computed.
class Violations {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) items_.push_back(what);
  }
  bool empty() const { return items_.empty(); }
  int report(std::ostream& err) const {
    err << "error: invalid configuration (" << items_.size() << " problem"
        << (items_.size() == 1 ? "" : "s") << ")\n";
    for (const auto& item : items_) err << "  - " << item << '\n';
    return kExitConfig;
  }

 private:
  std::vector<std::string> items_;
};

bool finite_positive(double v) { return v > 0.0 && std::isfinite(v); }

struct ModelFlags {
  int n = 2;
  double alpha = 1.0;
  std::string init = "monomeric";
  double mu = 1.5;
  double rho = 1.0;
  double c1_0 = 0.0;

  void add(CLI::App* app, bool with_init) {
    app->add_option("--n", n, "critical cluster size (>= 2)")->capture_default_str();
    app->add_option("--alpha", alpha, "deposition rate (> 0)")->capture_default_str();
    if (!with_init) return;
    app->add_option("--init", init, "initial data: monomeric | powerlaw")
        ->capture_default_str();
    app->add_option("--mu", mu, "power-law exponent (> 1)")->capture_default_str();
    app->add_option("--rho", rho, "power-law amplitude (> 0)")->capture_default_str();
    app->add_option("--c1-0", c1_0, "initial monomer concentration (>= 0)")
        ->capture_default_str();
  }

  void check(Violations& v, bool with_init) const {
    v.require(n >= 2, "--n must be >= 2");
    v.require(finite_positive(alpha), "--alpha must be positive");
    if (!with_init) return;
    v.require(init == "monomeric" || init == "powerlaw",
              "--init must be 'monomeric' or 'powerlaw'");
    if (init == "powerlaw") {
      v.require(mu > 1.0 && std::isfinite(mu), "--mu must exceed 1");
      v.require(finite_positive(rho), "--rho must be positive");
    }
    v.require(c1_0 >= 0.0 && std::isfinite(c1_0), "--c1-0 must be >= 0");
  }

  ModelParams params() const { return ModelParams(alpha, n); }
  InitialData initial() const {
    return init == "powerlaw" ? InitialData::power_law(rho, mu, c1_0)
                              : InitialData::monomeric(c1_0);
  }

  json to_json(bool with_init) const {
    json j;
    j["n"] = n;
    j["alpha"] = alpha;
    if (with_init) {
      j["init"] = init;
      if (init == "powerlaw") {
        j["mu"] = mu;
        j["rho"] = rho;
      }
      j["c1_0"] = c1_0;
    }
    return j;
  }
};

// Writes `body` to `path`, or to `out` when the path is empty.
void emit(const std::string& path, const std::string& body, std::ostream& out) {
  if (path.empty()) {
    out << body;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorCode::Config, "cannot open output file " + path);
  file << body;
}

fs::path sibling(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  p.replace_extension(suffix);
  return p;
}

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
  ModelFlags model;
  double t_end = 100.0;
  double tol = 1e-9;
  double abs_tol = 1e-12;
  std::string truncation = "auto";
  double record_ratio = 1.02;
  double first_record = 1e-6;
  double tail_tol = 1e-10;
  std::string out;
};

int run_simulate(const SimulateFlags& f, std::ostream& out, std::ostream& err) {
  Violations v;
  f.model.check(v, true);
  v.require(f.t_end >= 0.0 && std::isfinite(f.t_end), "--t-end must be >= 0");
  v.require(f.tol >= 1e-12 && f.tol <= 1e-4, "--tol must lie in [1e-12, 1e-4]");
  v.require(finite_positive(f.abs_tol), "--abs-tol must be positive");
  v.require(f.record_ratio > 1.0, "--record-ratio must exceed 1");
  v.require(finite_positive(f.first_record), "--first-record must be positive");
  v.require(finite_positive(f.tail_tol), "--tail-tol must be positive");
  std::optional<long> truncation;
  if (f.truncation != "auto") {
    try {
      std::size_t used = 0;
      const long j = std::stol(f.truncation, &used);
      v.require(used == f.truncation.size(), "--truncation must be 'auto' or an integer");
      v.require(j >= f.model.n + 10, "--truncation must be >= n + 10");
      truncation = j;
    } catch (const std::exception&) {
      v.require(false, "--truncation must be 'auto' or an integer");
    }
  }
  if (!v.empty()) return v.report(err);

  IntegratorOptions opts;
  opts.rel_tol = f.tol;
  opts.abs_tol = f.abs_tol;
  opts.record_ratio = f.record_ratio;
  opts.first_record = f.first_record;
  opts.tail_tol = f.tail_tol;
  const ModelParams params = f.model.params();
  const InitialData init = f.model.initial();
  const Trajectory traj = integrate_full(params, init, f.t_end, truncation, opts);

  std::ostringstream body;
  traj.write_csv(body);
  emit(f.out, body.str(), out);
  if (f.out.empty()) return kExitOk;

  std::ostringstream mass;
  csv::write_row(mass, std::vector<std::string>{"t", "mass_gain", "alpha_t", "rel_error", "pass"});
  for (std::size_t i = 0; i < traj.records().size(); ++i) {
    const double t = traj.records()[i].t;
    const double expected = params.alpha() * t;
    const double gain = traj.mass_gain()[i];
    const double rel = t > 0.0 ? std::abs(gain - expected) / expected : std::abs(gain);
    csv::write_row(mass, std::vector<std::string>{
                             csv::format_double(t), csv::format_double(gain),
                             csv::format_double(expected), csv::format_double(rel),
                             rel <= 1e-6 ? "1" : "0"});
  }
  emit(sibling(f.out, ".mass.csv").string(), mass.str(), out);

  json config = f.model.to_json(true);
  config["t_end"] = f.t_end;
  config["truncation"] = traj.truncation();
  config["integrator"] = to_json(opts);
  write_manifest(sibling(f.out, ".manifest.json"), "simulate", config);
  return kExitOk;
}

// ----------------------------------------------------------------- profile

struct ProfileFlags {
  ModelFlags model;
  std::optional<double> eta;
  double eta_min = 0.05;
  double eta_max = 2.0;
  int points = 40;
  double eta_guard = kDefaultEtaGuard;
  std::string out;
};

int run_profile(const ProfileFlags& f, std::ostream& out, std::ostream& err) {
  Violations v;
  f.model.check(v, false);
  if (f.eta) {
    v.require(*f.eta > 0.0 && *f.eta != 1.0, "--eta must be positive and != 1");
  } else {
    v.require(f.eta_min > 0.0 && f.eta_max > f.eta_min, "need 0 < --eta-min < --eta-max");
    v.require(f.points >= 2, "--points must be >= 2");
  }
  if (!v.empty()) return v.report(err);

  const ModelParams params = f.model.params();
  std::ostringstream body;
  if (f.eta) {
    body << csv::format_double(similarity_profile(*f.eta, params)) << '\n';
  } else {
    csv::write_row(body, std::vector<std::string>{"eta", "profile"});
    for (int i = 0; i < f.points; ++i) {
      const double eta = f.eta_min + (f.eta_max - f.eta_min) * i / (f.points - 1);
      if (std::abs(eta - 1.0) < f.eta_guard) continue;
      csv::write_row(body, std::vector<double>{eta, similarity_profile(eta, params)});
    }
  }
  emit(f.out, body.str(), out);
  if (!f.out.empty()) {
    json config = f.model.to_json(false);
    if (f.eta) {
      config["eta"] = *f.eta;
    } else {
      config["eta_min"] = f.eta_min;
      config["eta_max"] = f.eta_max;
      config["points"] = f.points;
      config["eta_guard"] = f.eta_guard;
    }
    write_manifest(sibling(f.out, ".manifest.json"), "profile", config);
  }
  return kExitOk;
}

// -------------------------------------------------------------------- rate

struct RateFlags {
  std::vector<int> n{2};
  std::vector<double> alpha{1.0};
  std::string init = "monomeric";
  std::vector<std::string> mu;
  std::vector<double> eta{0.5};
  double rho = 1.0;
  double tau_min = 1e2;
  double tau_max = 1e4;
  int tau_points = 25;
  double quad_tol = 1e-10;
  int max_panels = 4000;
  double tol = 1e-9;
  double burn_in = 0.2;
  double eta_guard = kDefaultEtaGuard;
  double min_decades = 1.5;
  std::string out;
};

int run_rate(const RateFlags& f, std::ostream& out, std::ostream& err) {
  Violations v;
  v.require(!f.n.empty(), "--n needs at least one value");
  for (int n : f.n) v.require(n >= 2, "--n values must be >= 2");
  for (double a : f.alpha) v.require(finite_positive(a), "--alpha values must be positive");
  v.require(f.init == "monomeric" || f.init == "powerlaw",
            "--init must be 'monomeric' or 'powerlaw'");
  std::vector<double> mus;
  if (f.mu.empty()) {
    mus.push_back(f.init == "powerlaw" ? 1.5 : kInf);
  }
  for (const std::string& m : f.mu) {
    if (m == "monomeric" || m == "inf") {
      mus.push_back(kInf);
      continue;
    }
    try {
      const double value = csv::parse_double(m);
      v.require(value > 1.0 && std::isfinite(value), "--mu values must exceed 1");
      mus.push_back(value);
    } catch (const Error&) {
      v.require(false, "--mu value '" + m + "' is not a number or 'monomeric'");
    }
  }
  v.require(!f.eta.empty(), "--eta needs at least one value");
  for (double eta : f.eta) {
    v.require(eta > 0.0 && std::abs(eta - 1.0) >= f.eta_guard,
              "--eta " + csv::format_double(eta) + " must be positive and outside |eta - 1| < " +
                  csv::format_double(f.eta_guard));
  }
  v.require(finite_positive(f.rho), "--rho must be positive");
  v.require(f.tau_min > 0.0 && f.tau_max > f.tau_min, "need 0 < --tau-min < --tau-max");
  if (f.tau_min > 0.0 && f.tau_max > f.tau_min) {
    v.require(std::log10(f.tau_max / f.tau_min) >= f.min_decades,
              "the tau range must span at least --min-decades decades");
  }
  v.require(f.tau_points >= 3, "--tau-points must be >= 3");
  v.require(f.quad_tol >= 1e-12 && f.quad_tol <= 1e-6, "--quad-tol must lie in [1e-12, 1e-6]");
  v.require(f.max_panels >= 16, "--max-panels must be >= 16");
  v.require(f.tol >= 1e-12 && f.tol <= 1e-4, "--tol must lie in [1e-12, 1e-4]");
  v.require(f.burn_in >= 0.0 && f.burn_in < 1.0, "--burn-in must lie in [0, 1)");
  v.require(f.eta_guard >= 0.0, "--eta-guard must be >= 0");
  if (!v.empty()) return v.report(err);

  SweepConfig config;
  config.n = f.n;
  config.alpha = f.alpha;
  config.mu = mus;
  config.eta = f.eta;
  config.rho = f.rho;
  config.tau_min = f.tau_min;
  config.tau_max = f.tau_max;
  config.tau_points = f.tau_points;
  config.measure.repr.quad_tol = f.quad_tol;
  config.measure.repr.max_panels = f.max_panels;
  config.measure.burn_in = f.burn_in;
  config.measure.eta_guard = f.eta_guard;
  config.measure.min_decades = f.min_decades;
  config.integrator.rel_tol = f.tol;

  const SweepReport report = sweep(config);
  write_summary_csv(report, out);
  if (!f.out.empty()) write_report(report, f.out);
  for (const SweepCell& cell : report.cells) {
    if (!cell.ok) {
      err << "cell " << cell.index << " failed (" << cell.status << "): " << cell.message
          << '\n';
    }
  }
  for (const SweepCell& cell : report.cells) {
    if (!cell.ok) return exit_code(cell.status);
  }
  return kExitOk;
}

// ----------------------------------------------------------------- monomer

struct MonomerFlags {
  ModelFlags model;
  double t_end = 1e7;
  double tol = 1e-9;
  double record_ratio = 1.02;
  std::string out;
};

int run_monomer(const MonomerFlags& f, std::ostream& out, std::ostream& err) {
  Violations v;
  f.model.check(v, true);
  v.require(finite_positive(f.t_end), "--t-end must be positive");
  v.require(f.tol >= 1e-12 && f.tol <= 1e-4, "--tol must lie in [1e-12, 1e-4]");
  v.require(f.record_ratio > 1.0, "--record-ratio must exceed 1");
  if (!v.empty()) return v.report(err);

  IntegratorOptions opts;
  opts.rel_tol = f.tol;
  opts.record_ratio = f.record_ratio;
  const ModelParams params = f.model.params();
  const Trajectory traj = integrate_monomer_bulk(params, f.model.initial(), f.t_end, opts);

  std::ostringstream body;
  csv::write_row(body, std::vector<std::string>{"t", "tau", "zeta", "x", "y", "x_asymptote",
                                                "tau_asymptote", "zeta_asymptote",
                                                "scaled_monomer", "scaled_monomer_asymptote",
                                                "defect"});
  const double n = params.n();
  for (const Record& r : traj.records()) {
    if (!(r.t > 0.0) || !(r.tau > 0.0)) continue;
    const double scaled = std::pow(n * r.tau / params.alpha(), (n - 1.0) / n) *
                          std::pow(r.c1, n - 1.0);
    csv::write_row(body, std::vector<double>{
                             r.t, r.tau, r.zeta, r.c1, r.y, monomer_asymptote(r.t, params),
                             tau_of_t_asymptote(r.t, params), zeta_of_t_asymptote(r.t, params),
                             scaled, scaled_monomer_asymptote(r.tau, params),
                             params.alpha() - r.c1 * r.y});
  }
  emit(f.out, body.str(), out);
  if (!f.out.empty()) {
    json config = f.model.to_json(true);
    config["t_end"] = f.t_end;
    config["integrator"] = to_json(opts);
    write_manifest(sibling(f.out, ".manifest.json"), "monomer", config);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- manifold

struct ManifoldFlags {
  ModelFlags model;
  double x_min = 1e-3;
  double x_max = 1e-1;
  int points = 41;
  int terms = 4;
  std::string out;
};

int run_manifold(const ManifoldFlags& f, std::ostream& out, std::ostream& err) {
  Violations v;
  f.model.check(v, false);
  v.require(f.x_min > 0.0 && f.x_max > f.x_min, "need 0 < --x-min < --x-max");
  v.require(f.points >= 4, "--points must be >= 4");
  v.require(f.terms >= 1 && f.terms <= 4, "--terms must lie in 1..4");
  if (!v.empty()) return v.report(err);

  const ModelParams params = f.model.params();
  std::vector<double> grid = geometric_grid(f.x_min, f.x_max, f.points);
  std::reverse(grid.begin(), grid.end());  // decreasing, as x -> 0
  const numerics::LineFit fit = manifold_residual_fit(params, grid, f.terms);

  std::ostringstream body;
  csv::write_row(body, std::vector<std::string>{"n", "alpha", "terms", "slope", "r2", "points"});
  csv::write_row(body, std::vector<std::string>{
                           std::to_string(f.model.n), csv::format_double(f.model.alpha),
                           std::to_string(f.terms), csv::format_double(fit.slope),
                           csv::format_double(fit.r2), std::to_string(fit.points)});
  emit(f.out, body.str(), out);
  if (!f.out.empty()) {
    json config = f.model.to_json(false);
    config["x_min"] = f.x_min;
    config["x_max"] = f.x_max;
    config["points"] = f.points;
    config["terms"] = f.terms;
    write_manifest(sibling(f.out, ".manifest.json"), "manifold", config);
  }
  return kExitOk;
}

// ------------------------------------------------------------- asymptotics

struct AsymptoticsFlags {
  ModelFlags model;
  std::string oracle = "monomer";
  double from = 1.0;
  double to = 1e7;
  int points = 8;
  std::string out;
};

struct Oracle {
  const char* name;
  const char* argument;
  double (*eval)(double, const ModelParams&);
};

double phi4(double x, const ModelParams& p) { return center_manifold_phi(x, p); }
double residual4(double x, const ModelParams& p) { return manifold_residual(x, p); }

const std::vector<Oracle>& oracles() {
  static const std::vector<Oracle> table{
      {"monomer", "t", &monomer_asymptote},
      {"monomer_leading", "t", &monomer_leading},
      {"tau_of_t", "t", &tau_of_t_asymptote},
      {"t_of_tau", "tau", &t_of_tau_asymptote},
      {"scaled_monomer", "tau", &scaled_monomer_asymptote},
      {"zeta_of_t", "t", &zeta_of_t_asymptote},
      {"t_of_zeta", "zeta", &t_of_zeta_asymptote},
      {"phi", "x", &phi4},
      {"manifold_residual", "x", &residual4},
  };
  return table;
}

int run_asymptotics(const AsymptoticsFlags& f, std::ostream& out, std::ostream& err) {
  Violations v;
  f.model.check(v, false);
  const Oracle* oracle = nullptr;
  for (const Oracle& o : oracles()) {
    if (f.oracle == o.name) oracle = &o;
  }
  std::string names;
  for (const Oracle& o : oracles()) names += std::string(names.empty() ? "" : ", ") + o.name;
  v.require(oracle != nullptr, "--oracle must be one of: " + names);
  v.require(f.from > 0.0 && f.to >= f.from, "need 0 < --from <= --to");
  v.require(f.points >= 1, "--points must be >= 1");
  if (!v.empty()) return v.report(err);

  const ModelParams params = f.model.params();
  std::vector<double> grid{f.from};
  if (f.points > 1 && f.to > f.from) grid = geometric_grid(f.from, f.to, f.points);
  std::ostringstream body;
  csv::write_row(body, std::vector<std::string>{oracle->argument, "value"});
  for (double a : grid) csv::write_row(body, std::vector<double>{a, oracle->eval(a, params)});
  emit(f.out, body.str(), out);
  if (!f.out.empty()) {
    json config = f.model.to_json(false);
    config["oracle"] = f.oracle;
    config["from"] = f.from;
    config["to"] = f.to;
    config["points"] = f.points;
    write_manifest(sibling(f.out, ".manifest.json"), "asymptotics", config);
  }
  return kExitOk;
}

// ------------------------------------------------------------------- query

struct QueryFlags {
  ModelFlags model;
  std::string in = "-";
  double quad_tol = 1e-10;
  std::string out;
};

int run_query(const QueryFlags& f, std::istream& in_default, std::ostream& out,
              std::ostream& err) {
  Violations v;
  f.model.check(v, true);
  v.require(f.quad_tol >= 1e-12 && f.quad_tol <= 1e-6, "--quad-tol must lie in [1e-12, 1e-6]");
  std::ifstream file;
  if (f.in != "-") {
    file.open(f.in);
    v.require(static_cast<bool>(file), "--in file '" + f.in + "' cannot be opened");
  }
  if (!v.empty()) return v.report(err);

  RepresentationOptions opts;
  opts.quad_tol = f.quad_tol;
  std::ostringstream body;
  run_query_csv(f.in == "-" ? in_default : file, body, f.model.params(), f.model.initial(),
                opts, kernels::Policy::Parallel);
  emit(f.out, body.str(), out);
  if (!f.out.empty()) {
    json config = f.model.to_json(true);
    config["in"] = f.in;
    config["quad_tol"] = f.quad_tol;
    write_manifest(sibling(f.out, ".manifest.json"), "query", config);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Submonolayer deposition kinetics: simulation, similarity profile and rates"};
  app.name("subdep");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  int threads = 0;
  app.add_option("--threads", threads, "cap on OpenMP worker threads (0 = runtime default)");

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "integrate the truncated cluster hierarchy");
  sim.model.add(simulate, true);
  simulate->add_option("--t-end", sim.t_end, "final time")->capture_default_str();
  simulate->add_option("--tol", sim.tol, "relative tolerance")->capture_default_str();
  simulate->add_option("--abs-tol", sim.abs_tol, "absolute tolerance")->capture_default_str();
  simulate->add_option("--truncation", sim.truncation, "auto | J")->capture_default_str();
  simulate->add_option("--record-ratio", sim.record_ratio, "geometric output spacing")
      ->capture_default_str();
  simulate->add_option("--first-record", sim.first_record, "first output time")
      ->capture_default_str();
  simulate->add_option("--tail-tol", sim.tail_tol, "largest admissible c_J")
      ->capture_default_str();
  simulate->add_option("--out", sim.out, "trajectory CSV (stdout if omitted)");

  ProfileFlags prof;
  auto* profile = app.add_subcommand("profile", "similarity profile on a grid or at one eta");
  prof.model.add(profile, false);
  profile->add_option("--eta", prof.eta, "single eta; prints the profile value");
  profile->add_option("--eta-min", prof.eta_min)->capture_default_str();
  profile->add_option("--eta-max", prof.eta_max)->capture_default_str();
  profile->add_option("--points", prof.points)->capture_default_str();
  profile->add_option("--eta-guard", prof.eta_guard)->capture_default_str();
  profile->add_option("--out", prof.out);

  RateFlags rate_flags;
  auto* rate = app.add_subcommand("rate", "convergence-rate sweep over (n, alpha, mu, eta)");
  rate->add_option("--n", rate_flags.n)->capture_default_str();
  rate->add_option("--alpha", rate_flags.alpha)->capture_default_str();
  rate->add_option("--init", rate_flags.init, "monomeric | powerlaw")->capture_default_str();
  rate->add_option("--mu", rate_flags.mu, "exponents; 'monomeric' for no initial clusters");
  rate->add_option("--eta", rate_flags.eta)->capture_default_str();
  rate->add_option("--rho", rate_flags.rho)->capture_default_str();
  rate->add_option("--tau-min", rate_flags.tau_min)->capture_default_str();
  rate->add_option("--tau-max", rate_flags.tau_max)->capture_default_str();
  rate->add_option("--tau-points", rate_flags.tau_points)->capture_default_str();
  rate->add_option("--quad-tol", rate_flags.quad_tol)->capture_default_str();
  rate->add_option("--max-panels", rate_flags.max_panels)->capture_default_str();
  rate->add_option("--tol", rate_flags.tol, "integrator relative tolerance")
      ->capture_default_str();
  rate->add_option("--burn-in", rate_flags.burn_in)->capture_default_str();
  rate->add_option("--eta-guard", rate_flags.eta_guard)->capture_default_str();
  rate->add_option("--min-decades", rate_flags.min_decades)->capture_default_str();
  rate->add_option("--out", rate_flags.out, "report directory");

  MonomerFlags mono;
  auto* monomer = app.add_subcommand("monomer", "monomer-bulk system against its asymptotics");
  mono.model.add(monomer, true);
  monomer->add_option("--t-end", mono.t_end)->capture_default_str();
  monomer->add_option("--tol", mono.tol)->capture_default_str();
  monomer->add_option("--record-ratio", mono.record_ratio)->capture_default_str();
  monomer->add_option("--out", mono.out);

  ManifoldFlags man;
  auto* manifold = app.add_subcommand("manifold", "residual order of the center-manifold series");
  man.model.add(manifold, false);
  manifold->add_option("--x-min", man.x_min)->capture_default_str();
  manifold->add_option("--x-max", man.x_max)->capture_default_str();
  manifold->add_option("--points", man.points)->capture_default_str();
  manifold->add_option("--terms", man.terms, "series terms kept (1..4)")->capture_default_str();
  manifold->add_option("--out", man.out);

  AsymptoticsFlags asy;
  auto* asymptotics = app.add_subcommand("asymptotics", "evaluate an oracle on a geometric grid");
  asy.model.add(asymptotics, false);
  asymptotics->add_option("--oracle", asy.oracle)->capture_default_str();
  asymptotics->add_option("--from", asy.from)->capture_default_str();
  asymptotics->add_option("--to", asy.to)->capture_default_str();
  asymptotics->add_option("--points", asy.points)->capture_default_str();
  asymptotics->add_option("--out", asy.out);

  QueryFlags qry;
  auto* query = app.add_subcommand("query", "scaled cluster values for eta,tau rows");
  qry.model.add(query, true);
  query->add_option("--in", qry.in, "input CSV with columns eta,tau ('-' = stdin)")
      ->capture_default_str();
  query->add_option("--quad-tol", qry.quad_tol)->capture_default_str();
  query->add_option("--out", qry.out);

  std::vector<const char*> argv{"subdep"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (threads < 0) {
    err << "error: --threads must be >= 0\n";
    return kExitConfig;
  }
  kernels::set_thread_limit(threads);
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (simulate->parsed()) return run_simulate(sim, out, err);
    if (profile->parsed()) return run_profile(prof, out, err);
    if (rate->parsed()) return run_rate(rate_flags, out, err);
    if (monomer->parsed()) return run_monomer(mono, out, err);
    if (manifold->parsed()) return run_manifold(man, out, err);
    if (asymptotics->parsed()) return run_asymptotics(asy, out, err);
    if (query->parsed()) return run_query(qry, std::cin, out, err);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code(e.code());
  }
  return kExitConfig;
}

}  // namespace subdep::cli
