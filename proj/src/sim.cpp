#include "conflictlens/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "conflictlens/error.hpp"

namespace conflictlens {

namespace {

constexpr double kBytesPerMbit = 1e6 / 8.0;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t sub) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(a ^ splitmix64(b ^ splitmix64(sub))));
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

int align_rbg(int prbs, int rbg_size) {
    const int r = prbs % rbg_size;
    int aligned = prbs - r;
    if (2 * r >= rbg_size) aligned += rbg_size;  // nearest multiple, ties upward
    return aligned;
}

}  // namespace

ScenarioConfig ScenarioConfig::defaults() {
    ScenarioConfig c;
    c.slices = {{"embb", 2.0, 12}, {"mmtc", 1.0, 6}, {"urllc", 0.5, 3}};
    return c;
}

double arrival_noise_factor(std::uint64_t seed, std::uint64_t tick_index,
                            std::uint64_t slice_index, double jitter) {
    if (jitter == 0.0) return 1.0;
    const double u1 = counter_uniform(seed, tick_index, slice_index, 0);
    const double u2 = counter_uniform(seed, tick_index, slice_index, 1);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return std::max(0.0, 1.0 + jitter * z);
}

int agent_decide(Policy policy, int current_prbs, const KpmSnapshot& observed, int step,
                 const AllocationBounds& bounds, double capacity_per_prb) {
    const int rbg = bounds.rbg_size;
    int next = current_prbs;
    if (policy == Policy::ENERGY_SAVER) {
        // Sufficiency floor: smallest RBG-aligned allocation whose capacity
        // covers the observed offered load.
        const double per_rbg_capacity = capacity_per_prb * rbg;
        int groups = static_cast<int>(std::ceil(observed.offered_load_mbps / per_rbg_capacity));
        groups = std::max(groups, 1);
        int floor_prbs = groups * rbg;
        floor_prbs = std::min(floor_prbs, bounds.max_prbs);
        next = std::max(current_prbs - step, floor_prbs);
    } else {
        if (observed.queue_bytes > 0.0) next = current_prbs + step;
    }
    next = align_rbg(next, rbg);
    const int lo = std::max(bounds.min_prbs, rbg);
    const int hi = std::max((bounds.max_prbs / rbg) * rbg, lo);  // share ceiling, aligned down
    return std::clamp(next, lo, hi);
}

void validate(const ScenarioConfig& config, std::span<const AgentSpec> agents) {
    if (config.total_prbs < 1 || config.rbg_size < 1 || config.rbg_size > config.total_prbs) {
        throw Error(Errc::InvalidConfig, "total_prbs/rbg_size out of range");
    }
    if (!(config.tick > 0.0) || !(config.duration > 0.0)) {
        throw Error(Errc::InvalidConfig, "tick and duration must be positive");
    }
    if (!(config.capacity_per_prb > 0.0)) {
        throw Error(Errc::InvalidConfig, "capacity_per_prb must be positive");
    }
    if (config.demand_jitter < 0.0) {
        throw Error(Errc::InvalidConfig, "demand_jitter must be non-negative");
    }
    if (config.slices.empty()) throw Error(Errc::InvalidConfig, "at least one slice required");
    int initial_sum = 0;
    for (const auto& s : config.slices) {
        if (s.demand < 0.0 || !std::isfinite(s.demand)) {
            throw Error(Errc::InvalidConfig, "slice demand must be finite and non-negative");
        }
        if (s.initial_prbs < 0) throw Error(Errc::InvalidConfig, "initial_prbs must be non-negative");
        initial_sum += s.initial_prbs;
    }
    if (initial_sum > config.total_prbs) {
        throw Error(Errc::InvalidConfig, "initial allocations exceed the PRB budget");
    }
    if (static_cast<std::size_t>(config.total_prbs) <
        config.slices.size() * static_cast<std::size_t>(config.rbg_size)) {
        throw Error(Errc::InvalidConfig, "budget cannot give every slice one RBG");
    }
    for (const auto& a : agents) {
        a.timing.validate();
        if (a.step_size < 1) throw Error(Errc::InvalidConfig, "step_size must be >= 1");
        if (config.tick > a.timing.period / 2.0) {
            throw Error(Errc::InvalidConfig,
                        "tick must allow at least two ticks per control interval of '" + a.app_id + "'");
        }
    }
}

namespace {

struct AgentState {
    const AgentSpec* spec = nullptr;
    std::vector<int> alloc;        // the agent's own last commanded allocation
    std::uint64_t next_fire = 0;   // index k of the next offset + k*period instant
};

SimTrace run_core(const ScenarioConfig& config, std::span<const AgentSpec> agents) {
    validate(config, agents);

    const std::size_t num_slices = config.slices.size();
    const std::size_t num_ticks = static_cast<std::size_t>(std::llround(config.duration / config.tick));

    SimTrace trace;
    trace.num_ticks = num_ticks;
    for (const auto& s : config.slices) trace.slices.push_back(s.slice);
    trace.records.reserve(num_ticks * num_slices);

    std::vector<int> actual(num_slices);
    std::vector<double> buffer(num_slices, 0.0);
    std::vector<KpmSnapshot> snapshot(num_slices);
    for (std::size_t s = 0; s < num_slices; ++s) {
        actual[s] = config.slices[s].initial_prbs;
        // bootstrap observation before the first tick completes
        snapshot[s].offered_load_mbps = config.slices[s].demand;
        snapshot[s].queue_bytes = config.slices[s].demand * kBytesPerMbit * config.tick;
    }

    std::vector<AgentState> states(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
        states[i].spec = &agents[i];
        states[i].alloc = actual;
    }

    std::string last_writer;
    std::vector<std::pair<double, std::size_t>> events;

    for (std::size_t t = 0; t < num_ticks; ++t) {
        const double now = static_cast<double>(t) * config.tick;
        const double tick_end = now + config.tick;

        events.clear();
        for (std::size_t i = 0; i < states.size(); ++i) {
            const TimingSpec& timing = states[i].spec->timing;
            double fire = timing.offset + static_cast<double>(states[i].next_fire) * timing.period;
            while (fire < tick_end) {
                events.emplace_back(fire, i);
                ++states[i].next_fire;
                fire = timing.offset + static_cast<double>(states[i].next_fire) * timing.period;
            }
        }
        std::sort(events.begin(), events.end());  // later offset wins, ties by agent order

        for (const auto& [fire_time, i] : events) {
            AgentState& st = states[i];
            for (std::size_t s = 0; s < num_slices; ++s) {
                int others = 0;
                for (std::size_t s2 = 0; s2 < num_slices; ++s2) {
                    if (s2 != s) others += st.alloc[s2];
                }
                AllocationBounds bounds;
                bounds.rbg_size = config.rbg_size;
                bounds.min_prbs = config.rbg_size;
                bounds.max_prbs = config.total_prbs - others;
                st.alloc[s] = agent_decide(st.spec->policy, st.alloc[s], snapshot[s],
                                           st.spec->step_size, bounds, config.capacity_per_prb);
            }
            actual = st.alloc;
            last_writer = st.spec->app_id;
        }

        for (std::size_t s = 0; s < num_slices; ++s) {
            const double noise =
                arrival_noise_factor(config.seed, t, s, config.demand_jitter);
            const double arrivals =
                config.slices[s].demand * kBytesPerMbit * config.tick * noise;
            const double capacity =
                config.capacity_per_prb * actual[s] * kBytesPerMbit * config.tick;
            const double queue = buffer[s] + arrivals;
            const double served = std::min(queue, capacity);
            buffer[s] = queue - served;

            TickRecord rec;
            rec.timestamp = now;
            rec.slice = config.slices[s].slice;
            rec.prbs_allocated = actual[s];
            rec.buffer_bytes = buffer[s];
            rec.throughput_mbps = served / (kBytesPerMbit * config.tick);
            rec.last_writer = last_writer;
            trace.records.push_back(std::move(rec));

            snapshot[s].offered_load_mbps = arrivals / (kBytesPerMbit * config.tick);
            snapshot[s].queue_bytes = queue;
        }
    }
    return trace;
}

}  // namespace

SimTrace run_single(const ScenarioConfig& config, const AgentSpec& agent) {
    return run_core(config, std::span<const AgentSpec>(&agent, 1));
}

SimTrace run_concurrent(const ScenarioConfig& config, std::span<const AgentSpec> agents) {
    if (agents.size() < 2) {
        throw Error(Errc::InvalidConfig, "run_concurrent requires at least two agents");
    }
    return run_core(config, agents);
}

Profile trace_to_profile(const SimTrace& trace, const std::string& app_id) {
    if (trace.records.empty()) throw Error(Errc::EmptyTrace, "trace has no records");
    Profile p;
    p.app_id = app_id;
    p.observations.reserve(trace.records.size() * 3);
    for (const auto& r : trace.records) {
        p.observations.push_back({r.timestamp, "slice_prb", r.slice, static_cast<double>(r.prbs_allocated)});
        p.observations.push_back({r.timestamp, "dl_buffer_bytes", r.slice, r.buffer_bytes});
        p.observations.push_back({r.timestamp, "tx_brate_dl_mbps", r.slice, r.throughput_mbps});
    }
    return p;
}

std::map<std::string, double> occupancy_fractions(const SimTrace& trace) {
    std::map<std::string, std::size_t> counts;
    std::size_t attributed = 0;
    for (std::size_t i = 0; i < trace.records.size(); i += trace.slices.size()) {
        const std::string& w = trace.records[i].last_writer;
        if (w.empty()) continue;
        ++counts[w];
        ++attributed;
    }
    if (attributed == 0) throw Error(Errc::NoWriters, "no control action ever fired");
    std::map<std::string, double> fractions;
    for (const auto& [app, n] : counts) {
        fractions[app] = static_cast<double>(n) / static_cast<double>(attributed);
    }
    return fractions;
}

void write_trace_file(const std::string& path, const SimTrace& trace) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
    os << "timestamp\tslice\tprbs\tbuffer_bytes\tthroughput_mbps\tlast_writer\n";
    for (const auto& r : trace.records) {
        os << format_double(r.timestamp) << '\t' << r.slice << '\t' << r.prbs_allocated << '\t'
           << format_double(r.buffer_bytes) << '\t' << format_double(r.throughput_mbps) << '\t'
           << r.last_writer << '\n';
    }
    if (!os) throw Error(Errc::IoError, "write failed for '" + path + "'");
}

static nlohmann::json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(Errc::IoError, "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, "bad JSON in '" + path + "': " + e.what());
    }
    return j;
}

ScenarioConfig read_scenario_file(const std::string& path) {
    const nlohmann::json j = load_json(path);
    ScenarioConfig c = ScenarioConfig::defaults();
    try {
        c.total_prbs = j.value("total_prbs", c.total_prbs);
        c.rbg_size = j.value("rbg_size", c.rbg_size);
        c.tick = j.value("tick", c.tick);
        c.duration = j.value("duration", c.duration);
        c.seed = j.value("seed", c.seed);
        c.capacity_per_prb = j.value("capacity_per_prb", c.capacity_per_prb);
        c.demand_jitter = j.value("demand_jitter", c.demand_jitter);
        if (j.contains("slices")) {
            c.slices.clear();
            for (const auto& js : j.at("slices")) {
                SliceConfig s;
                s.slice = js.at("slice").get<std::string>();
                s.demand = js.value("demand", 0.0);
                s.initial_prbs = js.value("initial_prbs", 0);
                c.slices.push_back(std::move(s));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, "bad scenario config '" + path + "': " + e.what());
    }
    return c;
}

std::vector<AgentSpec> read_agents_file(const std::string& path) {
    const nlohmann::json j = load_json(path);
    std::vector<AgentSpec> agents;
    try {
        for (const auto& ja : j) {
            AgentSpec a;
            a.app_id = ja.at("app_id").get<std::string>();
            const std::string policy = ja.at("policy").get<std::string>();
            if (policy == "ENERGY_SAVER") {
                a.policy = Policy::ENERGY_SAVER;
            } else if (policy == "THROUGHPUT_MAX") {
                a.policy = Policy::THROUGHPUT_MAX;
            } else {
                throw Error(Errc::ParseError, "unknown policy '" + policy + "'");
            }
            a.step_size = ja.value("step_size", 3);
            if (ja.contains("timing")) {
                const auto& jt = ja.at("timing");
                a.timing.period = jt.value("period", 1.0);
                a.timing.offset = jt.value("offset", 0.0);
                if (jt.contains("hold") && !jt.at("hold").is_null()) {
                    a.timing.hold = jt.at("hold").get<double>();
                }
            }
            agents.push_back(std::move(a));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, "bad agents config '" + path + "': " + e.what());
    }
    if (agents.empty()) throw Error(Errc::InvalidConfig, "agents config lists no agents");
    return agents;
}

std::string scenario_json(const ScenarioConfig& config) {
    nlohmann::json j;
    j["total_prbs"] = config.total_prbs;
    j["rbg_size"] = config.rbg_size;
    j["tick"] = config.tick;
    j["duration"] = config.duration;
    j["seed"] = config.seed;
    j["capacity_per_prb"] = config.capacity_per_prb;
    j["demand_jitter"] = config.demand_jitter;
    j["slices"] = nlohmann::json::array();
    for (const auto& s : config.slices) {
        j["slices"].push_back(
            {{"slice", s.slice}, {"demand", s.demand}, {"initial_prbs", s.initial_prbs}});
    }
    return j.dump(2);
}

std::string agents_json(std::span<const AgentSpec> agents) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& a : agents) {
        nlohmann::json jt = {{"period", a.timing.period}, {"offset", a.timing.offset}};
        if (a.timing.hold) jt["hold"] = *a.timing.hold;
        j.push_back({{"app_id", a.app_id},
                     {"policy", a.policy == Policy::ENERGY_SAVER ? "ENERGY_SAVER" : "THROUGHPUT_MAX"},
                     {"step_size", a.step_size},
                     {"timing", jt}});
    }
    return j.dump(2);
}

}  // namespace conflictlens
