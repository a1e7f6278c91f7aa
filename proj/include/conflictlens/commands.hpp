#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conflictlens/predictor.hpp"
#include "conflictlens/profile.hpp"
#include "conflictlens/sim.hpp"

namespace conflictlens {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string config_digest;
    std::string tool_version = kToolVersion;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

std::string content_digest(const std::string& content);

RunManifest cmd_simulate(const std::string& scenario_path, const std::string& agents_path,
                         const std::string& out_dir, bool concurrent, const std::string& label,
                         std::optional<std::uint64_t> seed_override);

RunManifest cmd_profile(const std::string& profile_path, const std::string& out_dir,
                        const std::string& label);

RunManifest cmd_conflict(const std::string& profile_a_path, const std::string& profile_b_path,
                         const std::vector<VarKey>& kpm_keys, const std::string& out_path);

RunManifest cmd_predict(const std::vector<std::string>& profile_paths,
                        const std::vector<TimingSpec>& timings,
                        const std::optional<std::string>& measured_path,
                        const std::string& out_dir, const std::string& label);

RunManifest cmd_compare(const std::string& ecdf_a_path, const std::string& ecdf_b_path);

// Full pipeline over the canonical timescale pairings: for each timing
// configuration, profile both apps individually, predict the concurrent
// distribution, run the concurrent ground truth, and tabulate distances.
RunManifest cmd_reproduce(const std::string& out_dir, std::optional<std::uint64_t> seed_override);

struct ReproduceConfig {
    std::string label;
    double period_es = 1.0;
    double period_tm = 1.0;
    double offset_es = 0.0;
    double offset_tm = 0.5;
};

// The three timing configurations exercised by cmd_reproduce. The TM offsets
// are chosen so the deterministic firing schedule realizes the rate-weight
// occupancy fractions.
std::vector<ReproduceConfig> reproduce_configs();

// Default KPM key set for the severity index: throughput and buffer
// occupancy per slice.
std::vector<VarKey> default_kpm_keys(const std::vector<std::string>& slices);

}  // namespace conflictlens
