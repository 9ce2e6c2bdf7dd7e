#include "subdep/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace subdep {

namespace {

// JSON has no inf/nan; such values are stored as strings
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

nlohmann::json to_json(const IntegratorOptions& opts) {
  nlohmann::json j;
  j["rel_tol"] = opts.rel_tol;
  j["abs_tol"] = opts.abs_tol;
  j["record_ratio"] = opts.record_ratio;
  j["first_record"] = opts.first_record;
  j["tail_tol"] = opts.tail_tol;
  j["snapshot_times"] = opts.snapshot_times;
  return j;
}

nlohmann::json to_json(const MeasureOptions& opts) {
  nlohmann::json j;
  j["quad_tol"] = opts.repr.quad_tol;
  j["max_panels"] = opts.repr.max_panels;
  j["burn_in"] = opts.burn_in;
  j["eta_guard"] = opts.eta_guard;
  j["min_decades"] = opts.min_decades;
  return j;
}

nlohmann::json to_json(const SweepConfig& config) {
  nlohmann::json j;
  j["n"] = config.n;
  j["alpha"] = config.alpha;
  nlohmann::json mu = nlohmann::json::array();
  for (double m : config.mu) mu.push_back(number(m));
  j["mu"] = mu;
  j["eta"] = config.eta;
  j["rho"] = config.rho;
  j["tau_min"] = config.tau_min;
  j["tau_max"] = config.tau_max;
  j["tau_points"] = config.tau_points;
  j["measure"] = to_json(config.measure);
  j["integrator"] = to_json(config.integrator);
  return j;
}

nlohmann::json make_manifest(std::string_view command, const nlohmann::json& config) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(config.dump())));
  nlohmann::json m;
  m["tool"] = kToolName;
  m["version"] = kToolVersion;
  m["command"] = command;
  m["config_hash"] = hash;
  m["config"] = config;
  return m;
}

void write_manifest(const std::filesystem::path& path, std::string_view command,
                    const nlohmann::json& config) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Config, "cannot write manifest " + path.string());
  out << make_manifest(command, config).dump(2) << '\n';
}

}  // namespace subdep
