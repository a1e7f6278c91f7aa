#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "conflictlens/ecdf.hpp"

namespace conflictlens {

struct Observation {
    double timestamp = 0.0;  // seconds since experiment start
    std::string variable;    // e.g. "slice_prb", "dl_buffer_bytes", "tx_brate_dl_mbps"
    std::string slice;       // e.g. "embb", "mmtc", "urllc"
    double value = 0.0;
};

// A (variable, slice) pair addressing one series within a profile.
struct VarKey {
    std::string variable;
    std::string slice;

    auto operator<=>(const VarKey&) const = default;
};

struct Profile {
    std::string app_id;
    std::vector<Observation> observations;  // sorted non-decreasing by timestamp
    std::map<std::string, std::string> metadata;

    std::vector<VarKey> keys() const;
    bool covers(const VarKey& key) const;
};

std::vector<double> extract_series(const Profile& profile, const std::string& variable,
                                   const std::string& slice);

Ecdf build_ecdf(const Profile& profile, const VarKey& key);

// TSV formats (see README): profiles carry a
// "timestamp\tvariable\tslice\tvalue" header, ECDF files an "x\ty" header.
// Doubles are printed in shortest round-trip form so write/read/write is
// byte-identical.
void write_profile(std::ostream& os, const Profile& profile);
void write_profile_file(const std::string& path, const Profile& profile);
Profile read_profile(std::istream& is, const std::string& app_id);
Profile read_profile_file(const std::string& path);

void write_ecdf(std::ostream& os, StepCdfView cdf);
void write_ecdf_file(const std::string& path, StepCdfView cdf);
Ecdf read_ecdf(std::istream& is);
Ecdf read_ecdf_file(const std::string& path);

std::string format_double(double v);

}  // namespace conflictlens
