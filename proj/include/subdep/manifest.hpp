#pragma once

// Run manifests: the resolved configuration of a run, its FNV-1a hash and
// the tool version, written next to the outputs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "subdep/harness.hpp"
#include "subdep/integrator.hpp"

namespace subdep {

inline constexpr std::string_view kToolName = "subdep";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

nlohmann::json to_json(const IntegratorOptions& opts);
nlohmann::json to_json(const MeasureOptions& opts);
nlohmann::json to_json(const SweepConfig& config);

/// {"tool", "version", "command", "config_hash", "config"}; the hash covers
/// the compact dump of `config`.
nlohmann::json make_manifest(std::string_view command, const nlohmann::json& config);

void write_manifest(const std::filesystem::path& path, std::string_view command,
                    const nlohmann::json& config);

}  // namespace subdep
