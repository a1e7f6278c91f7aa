#include "conflictlens/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "conflictlens/error.hpp"

namespace conflictlens {

std::vector<VarKey> Profile::keys() const {
    std::set<VarKey> seen;
    for (const auto& o : observations) seen.insert({o.variable, o.slice});
    return {seen.begin(), seen.end()};
}

bool Profile::covers(const VarKey& key) const {
    return std::any_of(observations.begin(), observations.end(), [&](const Observation& o) {
        return o.variable == key.variable && o.slice == key.slice;
    });
}

std::vector<double> extract_series(const Profile& profile, const std::string& variable,
                                   const std::string& slice) {
    bool variable_seen = false;
    std::vector<double> out;
    for (const auto& o : profile.observations) {
        if (o.variable != variable) continue;
        variable_seen = true;
        if (o.slice == slice) out.push_back(o.value);
    }
    if (out.empty()) {
        if (!variable_seen) {
            throw Error(Errc::UnknownVariable,
                        "profile '" + profile.app_id + "' has no variable '" + variable + "'");
        }
        throw Error(Errc::UnknownSlice, "profile '" + profile.app_id + "' has no slice '" + slice +
                                            "' for variable '" + variable + "'");
    }
    return out;
}

Ecdf build_ecdf(const Profile& profile, const VarKey& key) {
    return build_ecdf(extract_series(profile, key.variable, key.slice));
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

static double parse_double(std::string_view text, const std::string& context) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(Errc::ParseError, "bad number '" + std::string(text) + "' in " + context);
    }
    return v;
}

static std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

void write_profile(std::ostream& os, const Profile& profile) {
    os << "timestamp\tvariable\tslice\tvalue\n";
    for (const auto& o : profile.observations) {
        os << format_double(o.timestamp) << '\t' << o.variable << '\t' << o.slice << '\t'
           << format_double(o.value) << '\n';
    }
}

Profile read_profile(std::istream& is, const std::string& app_id) {
    Profile p;
    p.app_id = app_id;
    std::string line;
    if (!std::getline(is, line) || line != "timestamp\tvariable\tslice\tvalue") {
        throw Error(Errc::ParseError, "profile '" + app_id + "' missing TSV header");
    }
    double prev_ts = -1.0;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 4) {
            throw Error(Errc::ParseError,
                        "profile '" + app_id + "' line " + std::to_string(lineno) + ": expected 4 fields");
        }
        Observation o;
        o.timestamp = parse_double(fields[0], "timestamp");
        o.variable = std::string(fields[1]);
        o.slice = std::string(fields[2]);
        o.value = parse_double(fields[3], "value");
        if (o.timestamp < 0.0 || !std::isfinite(o.timestamp)) {
            throw Error(Errc::ParseError, "negative or non-finite timestamp in profile '" + app_id + "'");
        }
        if (!std::isfinite(o.value)) {
            throw Error(Errc::NonFiniteSample, "non-finite value in profile '" + app_id + "'");
        }
        if (o.timestamp < prev_ts) {
            throw Error(Errc::ParseError,
                        "profile '" + app_id + "' not sorted by timestamp at line " + std::to_string(lineno));
        }
        prev_ts = o.timestamp;
        p.observations.push_back(std::move(o));
    }
    if (p.observations.empty()) {
        throw Error(Errc::EmptyInput, "profile '" + app_id + "' has no observations");
    }
    return p;
}

void write_profile_file(const std::string& path, const Profile& profile) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
    write_profile(os, profile);
    if (!os) throw Error(Errc::IoError, "write failed for '" + path + "'");
}

Profile read_profile_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(Errc::IoError, "cannot open '" + path + "'");
    std::string stem = std::filesystem::path(path).filename().string();
    if (auto dot = stem.find('.'); dot != std::string::npos) stem.resize(dot);
    return read_profile(is, stem);
}

void write_ecdf(std::ostream& os, StepCdfView cdf) {
    os << "x\ty\n";
    for (std::size_t i = 0; i < cdf.support.size(); ++i) {
        os << format_double(cdf.support[i]) << '\t' << format_double(cdf.probs[i]) << '\n';
    }
}

void write_ecdf_file(const std::string& path, StepCdfView cdf) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
    write_ecdf(os, cdf);
    if (!os) throw Error(Errc::IoError, "write failed for '" + path + "'");
}

Ecdf read_ecdf(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "x\ty") {
        throw Error(Errc::ParseError, "ECDF file missing 'x\\ty' header");
    }
    Ecdf e;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 2) throw Error(Errc::ParseError, "ECDF row must have 2 fields");
        double x = parse_double(fields[0], "x");
        double y = parse_double(fields[1], "y");
        if (!e.support.empty() && x <= e.support.back()) {
            throw Error(Errc::ParseError, "ECDF support not strictly increasing");
        }
        if (!e.probs.empty() && y < e.probs.back()) {
            throw Error(Errc::ParseError, "ECDF probabilities decreasing");
        }
        if (!(y > 0.0) || y > 1.0) {
            throw Error(Errc::ParseError, "ECDF probabilities must lie in (0, 1]");
        }
        e.support.push_back(x);
        e.probs.push_back(y);
    }
    if (e.support.empty()) throw Error(Errc::EmptyInput, "ECDF file has no rows");
    if (e.probs.back() != 1.0) {
        throw Error(Errc::ParseError, "ECDF must reach probability 1 at its last point");
    }
    return e;
}

Ecdf read_ecdf_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(Errc::IoError, "cannot open '" + path + "'");
    return read_ecdf(is);
}

}  // namespace conflictlens
