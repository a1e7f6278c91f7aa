#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conflictlens/commands.hpp"
#include "conflictlens/error.hpp"

namespace cl = conflictlens;

namespace {

std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
    if (flag_seed) return flag_seed;
    if (const char* env = std::getenv("CONFLICT_LENS_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw cl::Error(cl::Errc::ParseError, "CONFLICT_LENS_SEED is not a valid integer");
        }
    }
    return std::nullopt;
}

std::vector<cl::VarKey> parse_kpm_keys(const std::vector<std::string>& specs) {
    std::vector<cl::VarKey> keys;
    for (const auto& s : specs) {
        const auto colon = s.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == s.size()) {
            throw cl::Error(cl::Errc::ParseError, "KPM key '" + s + "' must be variable:slice");
        }
        keys.push_back({s.substr(0, colon), s.substr(colon + 1)});
    }
    return keys;
}

std::vector<cl::TimingSpec> assemble_timings(std::size_t n, const std::vector<double>& periods,
                                             const std::vector<double>& offsets,
                                             const std::vector<double>& holds) {
    if (periods.size() != n) {
        throw cl::Error(cl::Errc::ConfigMismatch, "--periods count must match profile count");
    }
    if (!offsets.empty() && offsets.size() != n) {
        throw cl::Error(cl::Errc::ConfigMismatch, "--offsets count must match profile count");
    }
    if (!holds.empty() && holds.size() != n) {
        throw cl::Error(cl::Errc::ConfigMismatch, "--holds count must match profile count");
    }
    std::vector<cl::TimingSpec> timings(n);
    for (std::size_t i = 0; i < n; ++i) {
        timings[i].period = periods[i];
        if (!offsets.empty()) timings[i].offset = offsets[i];
        if (!holds.empty()) timings[i].hold = holds[i];
        timings[i].validate();
    }
    return timings;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conflict impact analysis and prediction for concurrent RAN control apps"};
    app.require_subcommand(1);

    std::string config_path, agents_path, out_dir = ".", out_path, label = "run";
    std::string profile_a, profile_b, ecdf_a, ecdf_b;
    std::vector<std::string> profile_paths, kpm_key_specs;
    std::vector<double> periods, offsets, holds;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> measured;
    bool concurrent = false;

    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Simulation seed (overrides CONFLICT_LENS_SEED)");
    };

    CLI::App* sim = app.add_subcommand("simulate", "Run the RAN simulator and emit profiles");
    sim->add_option("--config", config_path, "Scenario config JSON")->required();
    sim->add_option("--agents", agents_path, "Agents config JSON")->required();
    sim->add_option("--out", out_dir, "Output directory");
    sim->add_option("--label", label, "Run label used in output file names");
    sim->add_flag("--concurrent", concurrent, "Run all agents concurrently (ground truth mode)");
    add_seed(sim);

    CLI::App* prof = app.add_subcommand("profile", "Build per-variable ECDFs from a profile TSV");
    prof->add_option("profile", profile_a, "Profile TSV")->required();
    prof->add_option("--out", out_dir, "Output directory");
    prof->add_option("--label", label, "Label used in output file names");

    CLI::App* conflict = app.add_subcommand("conflict", "Compute the pairwise conflict report");
    conflict->add_option("profile_a", profile_a, "First profile TSV")->required();
    conflict->add_option("profile_b", profile_b, "Second profile TSV")->required();
    conflict->add_option("--kpm-keys", kpm_key_specs,
                         "variable:slice keys averaged into the severity index")
        ->delimiter(',');
    conflict->add_option("--out", out_path, "Conflict report JSON path")->required();

    CLI::App* predict = app.add_subcommand("predict", "Predict the concurrent distribution");
    predict->add_option("profiles", profile_paths, "Individual profile TSVs")->required();
    predict->add_option("--periods", periods, "Message periods, seconds, one per profile")
        ->required()
        ->delimiter(',');
    predict->add_option("--offsets", offsets, "Phase offsets, seconds")->delimiter(',');
    predict->add_option("--holds", holds, "Per-cycle active durations, seconds")->delimiter(',');
    predict->add_option("--measured", measured, "Measured concurrent profile TSV to compare against");
    predict->add_option("--out", out_dir, "Output directory");
    predict->add_option("--label", label, "Configuration label");

    CLI::App* compare = app.add_subcommand("compare", "Distances between two ECDF TSV files");
    compare->add_option("ecdf_a", ecdf_a, "First ECDF TSV")->required();
    compare->add_option("ecdf_b", ecdf_b, "Second ECDF TSV")->required();

    CLI::App* reproduce =
        app.add_subcommand("reproduce", "Full profile/predict/measure/compare pipeline");
    reproduce->add_option("--out", out_dir, "Output directory");
    add_seed(reproduce);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            cl::cmd_simulate(config_path, agents_path, out_dir, concurrent, label,
                             resolve_seed(seed));
        } else if (prof->parsed()) {
            cl::cmd_profile(profile_a, out_dir, label);
        } else if (conflict->parsed()) {
            cl::cmd_conflict(profile_a, profile_b, parse_kpm_keys(kpm_key_specs), out_path);
        } else if (predict->parsed()) {
            cl::cmd_predict(profile_paths,
                            assemble_timings(profile_paths.size(), periods, offsets, holds),
                            measured, out_dir, label);
        } else if (compare->parsed()) {
            cl::cmd_compare(ecdf_a, ecdf_b);
        } else if (reproduce->parsed()) {
            cl::cmd_reproduce(out_dir, resolve_seed(seed));
        }
    } catch (const cl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_input_error() ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
