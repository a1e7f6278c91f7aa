#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conflictlens/predictor.hpp"
#include "conflictlens/profile.hpp"

namespace conflictlens {

struct SliceConfig {
    std::string slice;
    double demand = 0.0;  // target DL bitrate, Mbps
    int initial_prbs = 0;
};

struct ScenarioConfig {
    int total_prbs = 50;
    int rbg_size = 3;
    std::vector<SliceConfig> slices;
    double tick = 0.1;       // seconds
    double duration = 600.0;  // seconds
    std::uint64_t seed = 1;
    double capacity_per_prb = 0.25;  // Mbps per PRB
    double demand_jitter = 0.1;      // relative std-dev of per-tick arrival noise

    static ScenarioConfig defaults();
};

enum class Policy { ENERGY_SAVER, THROUGHPUT_MAX };

struct AgentSpec {
    std::string app_id;
    Policy policy = Policy::ENERGY_SAVER;
    int step_size = 3;  // PRB increment m
    TimingSpec timing;
};

// KPM view handed to an agent; state as of one tick before the decision.
struct KpmSnapshot {
    double offered_load_mbps = 0.0;  // arrival rate observed in the previous tick
    double queue_bytes = 0.0;        // pre-service queue of the previous tick
};

struct AllocationBounds {
    int rbg_size = 3;
    int min_prbs = 3;
    int max_prbs = 50;  // share ceiling for this slice
};

struct TickRecord {
    double timestamp = 0.0;
    std::string slice;
    int prbs_allocated = 0;
    double buffer_bytes = 0.0;
    double throughput_mbps = 0.0;
    std::string last_writer;  // empty before any action fires
};

struct SimTrace {
    std::vector<TickRecord> records;  // slices-major per tick, tick-major overall
    std::vector<std::string> slices;
    std::size_t num_ticks = 0;
};

// Deterministic per-(seed, tick, slice) multiplicative arrival noise factor,
// Gaussian with the given relative std-dev, truncated at zero. Exposed so
// tests can recompute arrivals independently of the simulation loop.
double arrival_noise_factor(std::uint64_t seed, std::uint64_t tick_index,
                            std::uint64_t slice_index, double jitter);

int agent_decide(Policy policy, int current_prbs, const KpmSnapshot& observed, int step,
                 const AllocationBounds& bounds, double capacity_per_prb);

void validate(const ScenarioConfig& config, std::span<const AgentSpec> agents);

SimTrace run_single(const ScenarioConfig& config, const AgentSpec& agent);
SimTrace run_concurrent(const ScenarioConfig& config, std::span<const AgentSpec> agents);

Profile trace_to_profile(const SimTrace& trace, const std::string& app_id);

std::map<std::string, double> occupancy_fractions(const SimTrace& trace);

void write_trace_file(const std::string& path, const SimTrace& trace);

// JSON config file ingestion (field names match the struct members).
ScenarioConfig read_scenario_file(const std::string& path);
std::vector<AgentSpec> read_agents_file(const std::string& path);
std::string scenario_json(const ScenarioConfig& config);
std::string agents_json(std::span<const AgentSpec> agents);

}  // namespace conflictlens
