#pragma once

#include <map>
#include <string>
#include <vector>

#include "conflictlens/ecdf.hpp"
#include "conflictlens/profile.hpp"

namespace conflictlens {

struct DistancePair {
    double ks = 0.0;
    double int_ = 0.0;  // always <= ks
};

struct ConflictReport {
    std::string app_a;
    std::string app_b;
    std::map<VarKey, DistancePair> per_variable;
    double severity = 0.0;
    std::vector<VarKey> severity_kpms;
};

// Maximum vertical gap between the two step functions, exact on the union
// support (both are constant between union points).
double ks_distance(StepCdfView a, StepCdfView b);

struct IntDistance {
    double value = 0.0;
    bool degenerate = false;  // both inputs a single identical point mass
};

// Area between the two step functions divided by the span of the union
// support. The degenerate zero-span case (identical point masses) reports
// distance 0 with the flag set.
IntDistance int_distance_ex(StepCdfView a, StepCdfView b);
double int_distance(StepCdfView a, StepCdfView b);

double severity_index(const std::map<VarKey, DistancePair>& pairs,
                      const std::vector<VarKey>& kpm_keys);

ConflictReport conflict_report(const Profile& profile_a, const Profile& profile_b,
                               const std::vector<VarKey>& variables,
                               const std::vector<VarKey>& kpm_keys);

std::string conflict_report_json(const ConflictReport& report);

}  // namespace conflictlens
