#include "conflictlens/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "conflictlens/error.hpp"

namespace conflictlens {

void TimingSpec::validate() const {
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw Error(Errc::NonPositivePeriod, "period must be a positive finite number");
    }
    if (offset < 0.0 || offset >= period) {
        throw Error(Errc::InconsistentTiming, "offset must lie in [0, period)");
    }
    if (hold) {
        if (!(*hold > 0.0)) throw Error(Errc::InconsistentTiming, "hold must be positive");
        if (*hold > period) throw Error(Errc::HoldExceedsPeriod, "hold exceeds period");
    }
}

static WeightVector normalize(std::vector<double> raw, WeightMode mode) {
    const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
    for (double& w : raw) w /= sum;
    return {std::move(raw), mode};
}

WeightVector rate_weights(const std::vector<double>& periods) {
    if (periods.empty()) throw Error(Errc::EmptyInput, "rate_weights requires at least one period");
    std::vector<double> raw;
    raw.reserve(periods.size());
    for (double tau : periods) {
        if (!(tau > 0.0) || !std::isfinite(tau)) {
            throw Error(Errc::NonPositivePeriod, "period must be a positive finite number");
        }
        raw.push_back(1.0 / tau);
    }
    return normalize(std::move(raw), WeightMode::RATE);
}

WeightVector effective_weights(const std::vector<TimingSpec>& timings) {
    if (timings.empty()) throw Error(Errc::EmptyInput, "effective_weights requires at least one timing");
    for (const auto& t : timings) t.validate();

    const std::size_t n = timings.size();
    const bool all_holds = std::all_of(timings.begin(), timings.end(),
                                       [](const TimingSpec& t) { return t.hold.has_value(); });
    const bool no_holds = std::none_of(timings.begin(), timings.end(),
                                       [](const TimingSpec& t) { return t.hold.has_value(); });

    std::vector<double> raw(n);
    if (all_holds) {
        for (std::size_t i = 0; i < n; ++i) raw[i] = *timings[i].hold / timings[i].period;
    } else if (no_holds) {
        // Derive holds from the cyclic offset schedule of a shared period:
        // each action stays in effect until the next offset fires.
        const double period = timings[0].period;
        for (const auto& t : timings) {
            if (t.period != period) {
                throw Error(Errc::InconsistentTiming,
                            "holds absent and periods differ; cannot derive occupancy");
            }
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return timings[a].offset < timings[b].offset; });
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (timings[order[k]].offset == timings[order[k + 1]].offset) {
                throw Error(Errc::InconsistentTiming, "offsets must be distinct to derive holds");
            }
        }
        if (n == 1) {
            raw[order[0]] = 1.0;
        } else {
            for (std::size_t k = 0; k < n; ++k) {
                const double cur = timings[order[k]].offset;
                const double next = (k + 1 < n) ? timings[order[k + 1]].offset
                                                : timings[order[0]].offset + period;
                raw[order[k]] = (next - cur) / period;
            }
        }
    } else {
        throw Error(Errc::InconsistentTiming, "holds must be given for all specs or for none");
    }
    return normalize(std::move(raw), WeightMode::EFFECTIVE);
}

PredictedCdf weighted_ecdf_average(std::span<const Ecdf> ecdfs, const WeightVector& weights) {
    if (ecdfs.empty()) throw Error(Errc::EmptyInput, "weighted_ecdf_average requires inputs");
    if (ecdfs.size() != weights.weights.size()) {
        throw Error(Errc::LengthMismatch, "ECDF count does not match weight count");
    }

    PredictedCdf out;
    out.weights = weights;
    out.support = union_support(ecdfs);

    const std::size_t n = out.support.size();
    std::vector<std::vector<double>> interpolated(ecdfs.size());
    for (std::size_t i = 0; i < ecdfs.size(); ++i) {
        interpolated[i] = step_interpolate(ecdfs[i], out.support);
    }

    out.probs.assign(n, 0.0);
    const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < nn; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < ecdfs.size(); ++i) {
            acc += weights.weights[i] * interpolated[i][k];
        }
        out.probs[k] = acc;
    }

    // Tidy rounding residue: enforce monotone, [0,1], terminal exactly 1.
    double running = 0.0;
    for (double& p : out.probs) {
        running = std::clamp(std::max(running, p), 0.0, 1.0);
        p = running;
    }
    out.probs.back() = 1.0;
    return out;
}

PredictionReport predict(const std::vector<Profile>& profiles,
                         const std::vector<TimingSpec>& timings,
                         const std::vector<VarKey>& variables,
                         const Profile* measured,
                         const std::string& config_label) {
    if (profiles.empty()) throw Error(Errc::EmptyInput, "predict requires at least one profile");
    if (profiles.size() != timings.size()) {
        throw Error(Errc::ConfigMismatch, "timing count does not match profile count");
    }

    const bool any_hold = std::any_of(timings.begin(), timings.end(),
                                      [](const TimingSpec& t) { return t.hold.has_value(); });

    // Offsets only count as timing data when they are distinct on a shared period.
    bool derivable_offsets = timings.size() >= 2;
    for (std::size_t i = 0; i < timings.size() && derivable_offsets; ++i) {
        if (timings[i].period != timings[0].period) derivable_offsets = false;
        for (std::size_t j = i + 1; j < timings.size() && derivable_offsets; ++j) {
            if (timings[i].offset == timings[j].offset) derivable_offsets = false;
        }
    }

    WeightVector weights;
    if (any_hold || derivable_offsets) {
        weights = effective_weights(timings);
    } else {
        std::vector<double> periods;
        periods.reserve(timings.size());
        for (const auto& t : timings) {
            t.validate();
            periods.push_back(t.period);
        }
        weights = rate_weights(periods);
    }

    std::vector<std::string> app_ids;
    app_ids.reserve(profiles.size());
    for (const auto& p : profiles) app_ids.push_back(p.app_id);

    PredictionReport report;
    report.config_label = config_label;
    if (measured) report.comparison.emplace();

    for (const auto& key : variables) {
        std::vector<Ecdf> ecdfs;
        ecdfs.reserve(profiles.size());
        for (const auto& p : profiles) ecdfs.push_back(build_ecdf(p, key));
        PredictedCdf predicted = weighted_ecdf_average(ecdfs, weights);
        predicted.inputs = app_ids;
        if (measured) {
            const Ecdf m = build_ecdf(*measured, key);
            DistancePair d;
            d.ks = ks_distance(predicted, m);
            d.int_ = std::min(int_distance(predicted, m), d.ks);
            (*report.comparison)[key] = d;
        }
        report.per_variable.emplace(key, std::move(predicted));
    }
    return report;
}

std::string prediction_report_json(const PredictionReport& report) {
    nlohmann::json j;
    j["config_label"] = report.config_label;
    j["per_variable"] = nlohmann::json::array();
    for (const auto& [key, cdf] : report.per_variable) {
        j["per_variable"].push_back({{"variable", key.variable},
                                     {"slice", key.slice},
                                     {"support", cdf.support},
                                     {"probs", cdf.probs},
                                     {"weights", cdf.weights.weights},
                                     {"mode", cdf.weights.mode == WeightMode::RATE ? "RATE" : "EFFECTIVE"}});
    }
    if (report.comparison) {
        j["comparison"] = nlohmann::json::array();
        for (const auto& [key, d] : *report.comparison) {
            j["comparison"].push_back(
                {{"variable", key.variable}, {"slice", key.slice}, {"ks", d.ks}, {"int", d.int_}});
        }
    }
    return j.dump(2);
}

}  // namespace conflictlens
