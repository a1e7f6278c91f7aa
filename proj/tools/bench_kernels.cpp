// Benchmark of the parallel step-CDF kernels against their serial references.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "conflictlens/ecdf.hpp"
#include "conflictlens/metrics.hpp"
#include "conflictlens/predictor.hpp"

using namespace conflictlens;

namespace {

Ecdf random_ecdf(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(0.0, 1e6);
    std::vector<double> samples(n);
    for (double& s : samples) s = dist(rng);
    return build_ecdf(samples);
}

template <typename F>
double time_ms(F&& f, int reps = 5) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

}  // namespace

int main() {
    std::mt19937_64 rng(7);
    const Ecdf a = random_ecdf(rng, 100000);
    const Ecdf b = random_ecdf(rng, 100000);
    const std::vector<Ecdf> pair{a, b};
    const std::vector<double> common = union_support(std::span<const Ecdf>(pair));

    std::printf("support sizes: %zu + %zu -> merged %zu\n", a.support.size(), b.support.size(),
                common.size());

    const double t_serial = time_ms([&] { (void)step_interpolate_serial(a, common); });
    const double t_par = time_ms([&] { (void)step_interpolate(a, common); });
    std::printf("step_interpolate     serial %8.3f ms   parallel %8.3f ms\n", t_serial, t_par);

    const WeightVector w = rate_weights({2.0, 10.0});
    const double t_avg = time_ms([&] { (void)weighted_ecdf_average(pair, w); });
    std::printf("weighted_ecdf_average                    %8.3f ms\n", t_avg);

    const double t_ks = time_ms([&] { (void)ks_distance(a, b); });
    const double t_int = time_ms([&] { (void)int_distance(a, b); });
    std::printf("ks_distance                              %8.3f ms\n", t_ks);
    std::printf("int_distance                             %8.3f ms\n", t_int);
    return 0;
}
