#include "conflictlens/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "conflictlens/error.hpp"
#include "conflictlens/metrics.hpp"

namespace fs = std::filesystem;

namespace conflictlens {

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::IoError, "cannot create directory '" + dir + "'");
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
    os << content;
    if (!os) throw Error(Errc::IoError, "write failed for '" + path + "'");
}

std::vector<VarKey> common_keys(const std::vector<Profile>& profiles) {
    const auto first_keys = profiles.front().keys();
    std::set<VarKey> keys(first_keys.begin(), first_keys.end());
    for (std::size_t i = 1; i < profiles.size(); ++i) {
        const auto pk = profiles[i].keys();
        std::set<VarKey> here(pk.begin(), pk.end());
        std::set<VarKey> kept;
        std::set_intersection(keys.begin(), keys.end(), here.begin(), here.end(),
                              std::inserter(kept, kept.begin()));
        keys = std::move(kept);
    }
    return {keys.begin(), keys.end()};
}

std::string summary_row(const std::string& label, const VarKey& key, const DistancePair& d) {
    return label + "\t" + key.variable + "\t" + key.slice + "\t" + format_double(d.ks) + "\t" +
           format_double(d.int_) + "\n";
}

}  // namespace

std::string content_digest(const std::string& content) {
    // FNV-1a 64-bit; a stable fingerprint, not a cryptographic hash
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : content) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["inputs"] = manifest.inputs;
    j["outputs"] = manifest.outputs;
    j["config_digest"] = manifest.config_digest;
    j["tool_version"] = manifest.tool_version;
    write_text_file(path, j.dump(2) + "\n");
}

std::vector<VarKey> default_kpm_keys(const std::vector<std::string>& slices) {
    std::vector<VarKey> keys;
    for (const auto& s : slices) {
        keys.push_back({"tx_brate_dl_mbps", s});
        keys.push_back({"dl_buffer_bytes", s});
    }
    return keys;
}

RunManifest cmd_simulate(const std::string& scenario_path, const std::string& agents_path,
                         const std::string& out_dir, bool concurrent, const std::string& label,
                         std::optional<std::uint64_t> seed_override) {
    ScenarioConfig config = read_scenario_file(scenario_path);
    if (seed_override) config.seed = *seed_override;
    const std::vector<AgentSpec> agents = read_agents_file(agents_path);

    ensure_dir(out_dir);
    RunManifest manifest;
    manifest.command = "SIMULATE";
    manifest.inputs = {scenario_path, agents_path};
    manifest.config_digest =
        content_digest(scenario_json(config) + agents_json(agents) + (concurrent ? "|c" : "|i"));

    if (concurrent) {
        const SimTrace trace = run_concurrent(config, agents);
        const std::string profile_path = join(out_dir, label + ".measured.profile.tsv");
        const std::string trace_path = join(out_dir, label + ".trace.tsv");
        write_profile_file(profile_path, trace_to_profile(trace, label));
        write_trace_file(trace_path, trace);
        manifest.outputs = {profile_path, trace_path};
    } else {
        for (const auto& agent : agents) {
            const SimTrace trace = run_single(config, agent);
            const std::string profile_path = join(out_dir, agent.app_id + ".profile.tsv");
            const std::string trace_path = join(out_dir, agent.app_id + ".trace.tsv");
            write_profile_file(profile_path, trace_to_profile(trace, agent.app_id));
            write_trace_file(trace_path, trace);
            manifest.outputs.push_back(profile_path);
            manifest.outputs.push_back(trace_path);
        }
    }
    write_manifest(join(out_dir, "manifest.json"), manifest);
    return manifest;
}

RunManifest cmd_profile(const std::string& profile_path, const std::string& out_dir,
                        const std::string& label) {
    const Profile profile = read_profile_file(profile_path);
    ensure_dir(out_dir);
    RunManifest manifest;
    manifest.command = "PROFILE";
    manifest.inputs = {profile_path};
    manifest.config_digest = content_digest(profile_path + "|" + label);
    for (const auto& key : profile.keys()) {
        const Ecdf e = build_ecdf(profile, key);
        if (e.sample_count < 100) {
            std::cerr << "warning: only " << e.sample_count << " samples for " << key.variable
                      << ":" << key.slice << "; ECDF may be statistically weak\n";
        }
        const std::string path =
            join(out_dir, label + "." + key.variable + "." + key.slice + ".ecdf.tsv");
        write_ecdf_file(path, e);
        manifest.outputs.push_back(path);
    }
    write_manifest(join(out_dir, "manifest.json"), manifest);
    return manifest;
}

RunManifest cmd_conflict(const std::string& profile_a_path, const std::string& profile_b_path,
                         const std::vector<VarKey>& kpm_keys, const std::string& out_path) {
    const Profile a = read_profile_file(profile_a_path);
    const Profile b = read_profile_file(profile_b_path);
    const std::vector<VarKey> variables = common_keys({a, b});

    std::vector<VarKey> keys = kpm_keys;
    if (keys.empty()) {
        std::set<std::string> slices;
        for (const auto& k : variables) slices.insert(k.slice);
        for (const auto& k : default_kpm_keys({slices.begin(), slices.end()})) {
            if (std::find(variables.begin(), variables.end(), k) != variables.end()) {
                keys.push_back(k);
            }
        }
        if (keys.empty()) {
            throw Error(Errc::MissingKey, "no throughput/buffer KPMs shared by both profiles");
        }
    }

    const ConflictReport report = conflict_report(a, b, variables, keys);
    write_text_file(out_path, conflict_report_json(report) + "\n");

    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", report.severity);
    std::cout << buf << "\n";

    RunManifest manifest;
    manifest.command = "CONFLICT";
    manifest.inputs = {profile_a_path, profile_b_path};
    manifest.outputs = {out_path};
    std::string keyspec;
    for (const auto& k : keys) keyspec += k.variable + ":" + k.slice + ",";
    manifest.config_digest = content_digest(profile_a_path + "|" + profile_b_path + "|" + keyspec);
    return manifest;
}

RunManifest cmd_predict(const std::vector<std::string>& profile_paths,
                        const std::vector<TimingSpec>& timings,
                        const std::optional<std::string>& measured_path,
                        const std::string& out_dir, const std::string& label) {
    if (profile_paths.empty()) throw Error(Errc::ConfigMismatch, "at least one profile required");
    if (profile_paths.size() != timings.size()) {
        throw Error(Errc::ConfigMismatch, "timing count does not match profile count");
    }
    std::vector<Profile> profiles;
    profiles.reserve(profile_paths.size());
    for (const auto& p : profile_paths) profiles.push_back(read_profile_file(p));

    std::optional<Profile> measured;
    if (measured_path) measured = read_profile_file(*measured_path);

    const std::vector<VarKey> variables = common_keys(profiles);
    const PredictionReport report =
        predict(profiles, timings, variables, measured ? &*measured : nullptr, label);

    ensure_dir(out_dir);
    RunManifest manifest;
    manifest.command = "PREDICT";
    manifest.inputs = profile_paths;
    if (measured_path) manifest.inputs.push_back(*measured_path);

    for (const auto& [key, cdf] : report.per_variable) {
        const std::string path =
            join(out_dir, label + "." + key.variable + "." + key.slice + ".predicted.tsv");
        write_ecdf_file(path, cdf);
        manifest.outputs.push_back(path);
    }
    const std::string json_path = join(out_dir, label + ".prediction.json");
    write_text_file(json_path, prediction_report_json(report) + "\n");
    manifest.outputs.push_back(json_path);

    std::string timing_spec;
    for (const auto& t : timings) {
        timing_spec += format_double(t.period) + ":" + format_double(t.offset) + ":" +
                       (t.hold ? format_double(*t.hold) : "-") + ",";
    }
    manifest.config_digest = content_digest(label + "|" + timing_spec);
    write_manifest(join(out_dir, "manifest.json"), manifest);
    return manifest;
}

RunManifest cmd_compare(const std::string& ecdf_a_path, const std::string& ecdf_b_path) {
    const Ecdf a = read_ecdf_file(ecdf_a_path);
    const Ecdf b = read_ecdf_file(ecdf_b_path);
    DistancePair d;
    d.ks = ks_distance(a, b);
    d.int_ = std::min(int_distance(a, b), d.ks);
    nlohmann::json j = {{"ks", d.ks}, {"int", d.int_}};
    std::cout << j.dump() << "\n";

    RunManifest manifest;
    manifest.command = "COMPARE";
    manifest.inputs = {ecdf_a_path, ecdf_b_path};
    manifest.config_digest = content_digest(ecdf_a_path + "|" + ecdf_b_path);
    return manifest;
}

std::vector<ReproduceConfig> reproduce_configs() {
    return {
        {"ES1-TM1", 1.0, 1.0, 0.0, 0.5},
        {"ES2-TM10", 2.0, 10.0, 0.0, 1.0 / 3.0},
        {"ES10-TM2", 10.0, 2.0, 0.0, 5.0 / 3.0},
    };
}

RunManifest cmd_reproduce(const std::string& out_dir, std::optional<std::uint64_t> seed_override) {
    ensure_dir(out_dir);
    RunManifest manifest;
    manifest.command = "REPRODUCE";

    ScenarioConfig config = ScenarioConfig::defaults();
    if (seed_override) config.seed = *seed_override;
    manifest.config_digest = content_digest(scenario_json(config));

    std::string summary = "config\tvariable\tslice\tks\tint\n";

    for (const auto& rc : reproduce_configs()) {
        AgentSpec es{"es", Policy::ENERGY_SAVER, 3, {rc.period_es, rc.offset_es, std::nullopt}};
        AgentSpec tm{"tm", Policy::THROUGHPUT_MAX, 3, {rc.period_tm, rc.offset_tm, std::nullopt}};

        const std::string stage = "profiling " + rc.label;
        std::vector<Profile> profiles;
        try {
            profiles.push_back(trace_to_profile(run_single(config, es), "es"));
            profiles.push_back(trace_to_profile(run_single(config, tm), "tm"));
        } catch (const Error& e) {
            throw Error(e.code(), stage + ": " + e.what());
        }

        const std::string es_path = join(out_dir, rc.label + ".es.profile.tsv");
        const std::string tm_path = join(out_dir, rc.label + ".tm.profile.tsv");
        write_profile_file(es_path, profiles[0]);
        write_profile_file(tm_path, profiles[1]);
        manifest.outputs.push_back(es_path);
        manifest.outputs.push_back(tm_path);

        SimTrace concurrent_trace;
        try {
            const std::vector<AgentSpec> agents{es, tm};
            concurrent_trace = run_concurrent(config, agents);
        } catch (const Error& e) {
            throw Error(e.code(), "concurrent run " + rc.label + ": " + e.what());
        }
        const Profile measured = trace_to_profile(concurrent_trace, rc.label);
        const std::string measured_path = join(out_dir, rc.label + ".measured.profile.tsv");
        write_profile_file(measured_path, measured);
        manifest.outputs.push_back(measured_path);

        const std::vector<TimingSpec> timings{es.timing, tm.timing};
        const std::vector<VarKey> variables = common_keys(profiles);
        PredictionReport report;
        try {
            report = predict(profiles, timings, variables, &measured, rc.label);
        } catch (const Error& e) {
            throw Error(e.code(), "prediction " + rc.label + ": " + e.what());
        }

        for (const auto& [key, cdf] : report.per_variable) {
            const std::string path =
                join(out_dir, rc.label + "." + key.variable + "." + key.slice + ".predicted.tsv");
            write_ecdf_file(path, cdf);
            manifest.outputs.push_back(path);
        }
        const std::string json_path = join(out_dir, rc.label + ".prediction.json");
        write_text_file(json_path, prediction_report_json(report) + "\n");
        manifest.outputs.push_back(json_path);

        for (const auto& [key, d] : *report.comparison) {
            summary += summary_row(rc.label, key, d);
        }
    }

    const std::string summary_path = join(out_dir, "summary.tsv");
    write_text_file(summary_path, summary);
    manifest.outputs.push_back(summary_path);
    write_manifest(join(out_dir, "manifest.json"), manifest);
    return manifest;
}

}  // namespace conflictlens
