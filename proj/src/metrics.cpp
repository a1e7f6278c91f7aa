#include "conflictlens/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <json.hpp>

#include "conflictlens/error.hpp"

namespace conflictlens {

double ks_distance(StepCdfView a, StepCdfView b) {
    const std::array<StepCdfView, 2> views{a, b};
    const std::vector<double> common = union_support(std::span<const StepCdfView>(views));
    const std::vector<double> fa = step_interpolate(a, common);
    const std::vector<double> fb = step_interpolate(b, common);
    double best = 0.0;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(common.size());
#pragma omp parallel for reduction(max : best) schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        best = std::max(best, std::abs(fa[k] - fb[k]));
    }
    return best;
}

IntDistance int_distance_ex(StepCdfView a, StepCdfView b) {
    const std::array<StepCdfView, 2> views{a, b};
    const std::vector<double> common = union_support(std::span<const StepCdfView>(views));
    if (common.size() < 2) {
        // identical point masses; the 0/0 ratio resolves to "no conflict"
        return {0.0, true};
    }
    const std::vector<double> fa = step_interpolate(a, common);
    const std::vector<double> fb = step_interpolate(b, common);
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < common.size(); ++k) {
        area += std::abs(fa[k] - fb[k]) * (common[k + 1] - common[k]);
    }
    const double span = common.back() - common.front();
    return {area / span, false};
}

double int_distance(StepCdfView a, StepCdfView b) { return int_distance_ex(a, b).value; }

double severity_index(const std::map<VarKey, DistancePair>& pairs,
                      const std::vector<VarKey>& kpm_keys) {
    if (kpm_keys.empty()) {
        throw Error(Errc::EmptyInput, "severity_index requires at least one KPM key");
    }
    double sum = 0.0;
    for (const auto& key : kpm_keys) {
        auto it = pairs.find(key);
        if (it == pairs.end()) {
            throw Error(Errc::MissingKey, "no distance computed for " + key.variable + ":" + key.slice);
        }
        sum += it->second.int_;
    }
    return sum / static_cast<double>(kpm_keys.size());
}

ConflictReport conflict_report(const Profile& profile_a, const Profile& profile_b,
                               const std::vector<VarKey>& variables,
                               const std::vector<VarKey>& kpm_keys) {
    ConflictReport report;
    report.app_a = profile_a.app_id;
    report.app_b = profile_b.app_id;
    report.severity_kpms = kpm_keys;

    std::vector<DistancePair> results(variables.size());
    std::exception_ptr failure;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(variables.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            const Ecdf ea = build_ecdf(profile_a, variables[i]);
            const Ecdf eb = build_ecdf(profile_b, variables[i]);
            DistancePair d;
            d.ks = ks_distance(ea, eb);
            d.int_ = std::min(int_distance(ea, eb), d.ks);
            results[i] = d;
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (std::size_t i = 0; i < variables.size(); ++i) {
        report.per_variable[variables[i]] = results[i];
    }
    report.severity = severity_index(report.per_variable, kpm_keys);
    return report;
}

std::string conflict_report_json(const ConflictReport& report) {
    nlohmann::json j;
    j["app_a"] = report.app_a;
    j["app_b"] = report.app_b;
    j["per_variable"] = nlohmann::json::array();
    for (const auto& [key, d] : report.per_variable) {
        j["per_variable"].push_back(
            {{"variable", key.variable}, {"slice", key.slice}, {"ks", d.ks}, {"int", d.int_}});
    }
    j["severity"] = report.severity;
    j["severity_kpms"] = nlohmann::json::array();
    for (const auto& key : report.severity_kpms) {
        j["severity_kpms"].push_back({{"variable", key.variable}, {"slice", key.slice}});
    }
    return j.dump(2);
}

}  // namespace conflictlens
