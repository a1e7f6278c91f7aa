#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conflictlens/ecdf.hpp"
#include "conflictlens/metrics.hpp"
#include "conflictlens/profile.hpp"

namespace conflictlens {

struct TimingSpec {
    double period = 1.0;                // seconds between consecutive control actions
    double offset = 0.0;                // phase offset within the period
    std::optional<double> hold;         // per-cycle active duration; derived from offsets if absent

    void validate() const;
};

enum class WeightMode { RATE, EFFECTIVE };

struct WeightVector {
    std::vector<double> weights;  // each > 0, summing to 1
    WeightMode mode = WeightMode::RATE;
};

struct PredictedCdf {
    std::vector<double> support;
    std::vector<double> probs;
    WeightVector weights;
    std::vector<std::string> inputs;  // app ids in weight order

    operator StepCdfView() const { return {support, probs}; }
};

struct PredictionReport {
    std::map<VarKey, PredictedCdf> per_variable;
    std::optional<std::map<VarKey, DistancePair>> comparison;  // predicted vs measured
    std::string config_label;
};

// w_i = (1/tau_i) / sum_j (1/tau_j)
WeightVector rate_weights(const std::vector<double>& periods);

// Weights proportional to the fraction of time each application's action is
// the most recent write: (hold_i / period_i), normalized. When holds are
// absent, all specs must share one period with distinct offsets; holds are
// then the cyclic gaps between consecutive offsets.
WeightVector effective_weights(const std::vector<TimingSpec>& timings);

PredictedCdf weighted_ecdf_average(std::span<const Ecdf> ecdfs, const WeightVector& weights);

PredictionReport predict(const std::vector<Profile>& profiles,
                         const std::vector<TimingSpec>& timings,
                         const std::vector<VarKey>& variables,
                         const Profile* measured,
                         const std::string& config_label);

std::string prediction_report_json(const PredictionReport& report);

}  // namespace conflictlens
