#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace conflictlens {

// Right-continuous empirical CDF: strictly increasing support, cumulative
// probabilities in (0, 1] with the last element exactly 1.
struct Ecdf {
    std::vector<double> support;
    std::vector<double> probs;
    std::size_t sample_count = 0;
};

// Non-owning view of any step CDF (an Ecdf or a predicted CDF).
struct StepCdfView {
    std::span<const double> support;
    std::span<const double> probs;

    StepCdfView(std::span<const double> s, std::span<const double> p) : support(s), probs(p) {}
    StepCdfView(const Ecdf& e) : support(e.support), probs(e.probs) {}
};

Ecdf build_ecdf(std::span<const double> samples);

std::vector<double> union_support(std::span<const Ecdf> ecdfs);
std::vector<double> union_support(std::span<const StepCdfView> cdfs);

// Evaluates the step function on `common`, which must be a sorted strictly
// increasing superset of the source support. Points left of all mass map to 0.
std::vector<double> step_interpolate(StepCdfView cdf, std::span<const double> common);

// Serial two-pointer reference; kept alongside the parallel kernel for
// differential testing and benchmarking.
std::vector<double> step_interpolate_serial(StepCdfView cdf, std::span<const double> common);

}  // namespace conflictlens
