#include "conflictlens/ecdf.hpp"

#include <algorithm>
#include <cmath>

#include "conflictlens/error.hpp"

namespace conflictlens {

Ecdf build_ecdf(std::span<const double> samples) {
    if (samples.empty()) {
        throw Error(Errc::EmptyInput, "build_ecdf requires at least one sample");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    for (double v : sorted) {
        if (!std::isfinite(v)) {
            throw Error(Errc::NonFiniteSample, "non-finite sample passed to build_ecdf");
        }
    }
    std::sort(sorted.begin(), sorted.end());

    const double n = static_cast<double>(sorted.size());
    Ecdf out;
    out.sample_count = sorted.size();
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        out.support.push_back(sorted[i]);
        out.probs.push_back(static_cast<double>(j) / n);
        i = j;
    }
    out.probs.back() = 1.0;  // j == n on the last run, exact by construction
    return out;
}

static std::vector<double> merge_supports(const std::vector<std::span<const double>>& supports) {
    if (supports.empty()) {
        throw Error(Errc::EmptyInput, "union_support requires at least one ECDF");
    }
    std::size_t total = 0;
    for (const auto& s : supports) total += s.size();
    std::vector<double> merged;
    merged.reserve(total);
    for (const auto& s : supports) merged.insert(merged.end(), s.begin(), s.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
}

std::vector<double> union_support(std::span<const Ecdf> ecdfs) {
    std::vector<std::span<const double>> supports;
    supports.reserve(ecdfs.size());
    for (const auto& e : ecdfs) supports.emplace_back(e.support);
    return merge_supports(supports);
}

std::vector<double> union_support(std::span<const StepCdfView> cdfs) {
    std::vector<std::span<const double>> supports;
    supports.reserve(cdfs.size());
    for (const auto& c : cdfs) supports.emplace_back(c.support);
    return merge_supports(supports);
}

std::vector<double> step_interpolate_serial(StepCdfView cdf, std::span<const double> common) {
    std::vector<double> out(common.size());
    std::size_t j = 0;  // index of the last source point <= common[k], +1
    std::size_t matched = 0;
    for (std::size_t k = 0; k < common.size(); ++k) {
        while (j < cdf.support.size() && cdf.support[j] <= common[k]) {
            if (cdf.support[j] == common[k]) ++matched;
            ++j;
        }
        out[k] = (j == 0) ? 0.0 : cdf.probs[j - 1];
    }
    if (matched != cdf.support.size()) {
        throw Error(Errc::SupportNotCovered, "common grid omits points of the source support");
    }
    return out;
}

std::vector<double> step_interpolate(StepCdfView cdf, std::span<const double> common) {
    // Superset check: every source point must appear in the common grid.
    for (double x : cdf.support) {
        if (!std::binary_search(common.begin(), common.end(), x)) {
            throw Error(Errc::SupportNotCovered, "common grid omits points of the source support");
        }
    }
    std::vector<double> out(common.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(common.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        auto it = std::upper_bound(cdf.support.begin(), cdf.support.end(), common[k]);
        out[k] = (it == cdf.support.begin()) ? 0.0 : cdf.probs[it - cdf.support.begin() - 1];
    }
    return out;
}

}  // namespace conflictlens
