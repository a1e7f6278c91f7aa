// Acceptance gate: one line of output per criterion, nonzero exit on any
// failure. Each check re-derives its expected values independently of the
// library implementation wherever feasible (sampling, sorted matching,
// bitwise replay of the queue recurrence).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conflictlens/commands.hpp"
#include "conflictlens/ecdf.hpp"
#include "conflictlens/metrics.hpp"
#include "conflictlens/predictor.hpp"
#include "conflictlens/profile.hpp"
#include "conflictlens/sim.hpp"

namespace fs = std::filesystem;
using namespace conflictlens;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << ": " << number << ". " << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++g_failures;
}

std::vector<double> random_samples(std::mt19937_64& rng, std::size_t n, double lo = -100.0,
                                   double hi = 100.0) {
    std::uniform_real_distribution<double> value(lo, hi);
    std::vector<double> s(n);
    for (double& v : s) v = value(rng);
    return s;
}

bool valid_cdf(const std::vector<double>& probs) {
    if (probs.empty()) return false;
    double prev = 0.0;
    for (double p : probs) {
        if (p < prev || p > 1.0) return false;
        prev = p;
    }
    return probs.back() == 1.0;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---- criterion 1 -----------------------------------------------------------

void criterion_cdf_validity() {
    const auto start = Clock::now();
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<std::size_t> count(1, 60);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 10000 && ok; ++trial) {
        const Ecdf a = build_ecdf(random_samples(rng, count(rng)));
        const Ecdf b = build_ecdf(random_samples(rng, count(rng)));
        ok = ok && valid_cdf(a.probs) && valid_cdf(b.probs);

        const std::vector<Ecdf> both{a, b};
        const auto common = union_support(std::span<const Ecdf>(both));
        const auto fa = step_interpolate(a, common);
        ok = ok && valid_cdf(fa);

        if (trial % 5 == 0) {
            double wa = unit(rng);
            double wb = unit(rng);
            const double sum = wa + wb;
            const PredictedCdf mix =
                weighted_ecdf_average(both, WeightVector{{wa / sum, wb / sum}, WeightMode::RATE});
            ok = ok && valid_cdf(mix.probs);
        }
    }
    const double elapsed = seconds_since(start);
    report(1, "CDF validity over 10^4 randomized inputs", ok && elapsed < 30.0,
           "runtime " + std::to_string(elapsed) + " s");
}

// ---- criterion 2 -----------------------------------------------------------

void criterion_metric_axioms() {
    std::mt19937_64 rng(1002);
    std::uniform_int_distribution<std::size_t> count(1, 40);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    std::uniform_real_distribution<double> shift(-30.0, 30.0);
    bool ok = true;
    for (int trial = 0; trial < 10000 && ok; ++trial) {
        auto sa = random_samples(rng, count(rng));
        auto sb = random_samples(rng, count(rng));
        const Ecdf a = build_ecdf(sa);
        const Ecdf b = build_ecdf(sb);
        const double ks = ks_distance(a, b);
        const double in = int_distance(a, b);
        ok = ok && ks == ks_distance(b, a);
        ok = ok && in == int_distance(b, a);
        ok = ok && ks_distance(a, a) == 0.0 && int_distance(a, a) == 0.0;
        ok = ok && in >= 0.0 && in <= ks + 1e-15 && ks <= 1.0;

        const double alpha = scale(rng);
        const double beta = shift(rng);
        for (double& v : sa) v = alpha * v + beta;
        for (double& v : sb) v = alpha * v + beta;
        const Ecdf a2 = build_ecdf(sa);
        const Ecdf b2 = build_ecdf(sb);
        ok = ok && std::abs(ks_distance(a2, b2) - ks) <= 1e-9;
        ok = ok && std::abs(int_distance(a2, b2) - in) <= 1e-9;
    }
    report(2, "metric axioms over 10^4 random ECDF pairs", ok);
}

// ---- criterion 3 -----------------------------------------------------------

void criterion_wasserstein_oracle() {
    std::mt19937_64 rng(1003);
    std::uniform_int_distribution<std::size_t> count(1, 200);
    bool ok = true;
    int checked = 0;
    for (int trial = 0; trial < 1200 && ok; ++trial) {
        const std::size_t n = count(rng);
        auto x = random_samples(rng, n);
        auto y = random_samples(rng, n);
        const Ecdf a = build_ecdf(x);
        const Ecdf b = build_ecdf(y);
        const std::vector<Ecdf> both{a, b};
        const auto common = union_support(std::span<const Ecdf>(both));
        const double span = common.back() - common.front();
        if (span == 0.0) continue;
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        double w1 = 0.0;
        for (std::size_t k = 0; k < n; ++k) w1 += std::abs(x[k] - y[k]);
        w1 /= static_cast<double>(n);
        ok = std::abs(int_distance(a, b) * span - w1) <= 1e-9;
        ++checked;
    }
    report(3, "INT x span equals sorted-matching Wasserstein-1", ok && checked >= 1000,
           std::to_string(checked) + " pairs");
}

// ---- criterion 4 -----------------------------------------------------------

void criterion_mixture_oracle() {
    const auto start = Clock::now();
    std::mt19937_64 base_rng(1004);
    const Ecdf a = build_ecdf(random_samples(base_rng, 50, -10.0, 5.0));
    const Ecdf b = build_ecdf(random_samples(base_rng, 50, -2.0, 12.0));
    const std::vector<Ecdf> pair{a, b};

    bool ok = true;
    double worst = 0.0;
    for (double wa : {0.5, 5.0 / 6.0, 0.99}) {
        const PredictedCdf mix =
            weighted_ecdf_average(pair, WeightVector{{wa, 1.0 - wa}, WeightMode::RATE});
        std::mt19937_64 rng(static_cast<std::uint64_t>(wa * 1e6));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> draws(1000000);
        for (double& d : draws) {
            const Ecdf& src = (unit(rng) < wa) ? a : b;
            const double u = unit(rng);
            const auto it = std::lower_bound(src.probs.begin(), src.probs.end(), u);
            d = src.support[std::min<std::size_t>(it - src.probs.begin(), src.support.size() - 1)];
        }
        const double ks = ks_distance(build_ecdf(draws), mix);
        worst = std::max(worst, ks);
        ok = ok && ks <= 0.005;
    }
    const double elapsed = seconds_since(start);
    report(4, "weighted mixture matches 10^6-draw resampling", ok && elapsed < 10.0,
           "max KS " + std::to_string(worst) + ", runtime " + std::to_string(elapsed) + " s");
}

// ---- criteria 5 and 6 ------------------------------------------------------

void criterion_weight_formula() {
    const WeightVector w = rate_weights({2.0, 10.0});
    const bool ok = std::abs(w.weights[0] - 5.0 / 6.0) <= 1e-12 &&
                    std::abs(w.weights[1] - 1.0 / 6.0) <= 1e-12;
    report(5, "rate_weights([2,10]) = [5/6, 1/6]", ok);
}

void criterion_effective_periodicity() {
    const WeightVector w = effective_weights({{1.0, 0.0, 0.8}, {1.0, 0.0, 0.2}});
    bool ok = std::abs(w.weights[0] - 0.8) <= 1e-12 && std::abs(w.weights[1] - 0.2) <= 1e-12;

    // matching schedule: both every 1 s, the second writer 0.8 s after the
    // first, so the first holds the state for 0.8 s of each cycle
    ScenarioConfig c = ScenarioConfig::defaults();
    c.slices = {{"embb", 2.0, 12}};
    c.duration = 1000.0;
    const std::vector<AgentSpec> agents{
        {"holder", Policy::ENERGY_SAVER, 3, {1.0, 0.0, std::nullopt}},
        {"breaker", Policy::THROUGHPUT_MAX, 3, {1.0, 0.8, std::nullopt}},
    };
    const auto frac = occupancy_fractions(run_concurrent(c, agents));
    ok = ok && std::abs(frac.at("holder") - 0.8) <= 0.01 && std::abs(frac.at("breaker") - 0.2) <= 0.01;
    report(6, "800ms/200ms effective-periodicity example", ok,
           "occupancy " + std::to_string(frac.at("holder")) + "/" +
               std::to_string(frac.at("breaker")));
}

// ---- criteria 7 and 8 ------------------------------------------------------

struct SummaryRow {
    std::string config, variable, slice;
    double ks = 0.0, int_ = 0.0;
};

std::vector<SummaryRow> parse_summary(const std::string& path) {
    std::ifstream is(path);
    std::vector<SummaryRow> rows;
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        SummaryRow r;
        std::string ks, in;
        std::getline(ls, r.config, '\t');
        std::getline(ls, r.variable, '\t');
        std::getline(ls, r.slice, '\t');
        std::getline(ls, ks, '\t');
        std::getline(ls, in, '\t');
        r.ks = std::stod(ks);
        r.int_ = std::stod(in);
        rows.push_back(std::move(r));
    }
    return rows;
}

void criteria_end_to_end(const fs::path& dir) {
    const auto start = Clock::now();
    bool ran = true;
    std::string why;
    try {
        cmd_reproduce(dir.string(), std::nullopt);
    } catch (const std::exception& e) {
        ran = false;
        why = e.what();
    }
    const double elapsed = seconds_since(start);

    bool ok7 = ran;
    double worst_ks = 0.0, worst_int = 0.0;
    if (ran) {
        const auto rows = parse_summary((dir / "summary.tsv").string());
        ok7 = !rows.empty();
        for (const auto& r : rows) {
            if (r.variable == "slice_prb") {
                ok7 = ok7 && r.int_ <= 0.05 && r.ks <= 0.15;
            } else {
                ok7 = ok7 && r.int_ <= 0.05;
            }
            worst_ks = std::max(worst_ks, r.ks);
            worst_int = std::max(worst_int, r.int_);
        }
        ok7 = ok7 && elapsed < 120.0;
    }
    report(7, "end-to-end prediction accuracy across the three timescale pairings", ok7,
           ran ? "max KS " + std::to_string(worst_ks) + ", max INT " + std::to_string(worst_int) +
                     ", runtime " + std::to_string(elapsed) + " s"
               : why);

    bool ok8 = ran;
    if (ran) {
        try {
            for (const auto& [label, fast] :
                 std::vector<std::pair<std::string, std::string>>{{"ES2-TM10", "es"},
                                                                  {"ES10-TM2", "tm"}}) {
                const Profile measured =
                    read_profile_file((dir / (label + ".measured.profile.tsv")).string());
                const Profile es = read_profile_file((dir / (label + ".es.profile.tsv")).string());
                const Profile tm = read_profile_file((dir / (label + ".tm.profile.tsv")).string());
                for (const std::string slice : {"embb", "mmtc", "urllc"}) {
                    const VarKey key{"slice_prb", slice};
                    const Ecdf m = build_ecdf(measured, key);
                    const double to_es = int_distance(m, build_ecdf(es, key));
                    const double to_tm = int_distance(m, build_ecdf(tm, key));
                    const double to_fast = fast == "es" ? to_es : to_tm;
                    const double to_slow = fast == "es" ? to_tm : to_es;
                    ok8 = ok8 && to_fast <= to_slow;
                }
            }
        } catch (const std::exception&) {
            ok8 = false;
        }
    }
    report(8, "faster application dominates the measured PRB distribution", ok8);
}

// ---- criterion 9 -----------------------------------------------------------

void criterion_conservation() {
    constexpr double kBytesPerMbit = 1e6 / 8.0;
    std::mt19937_64 rng(1009);
    std::uniform_int_distribution<int> slice_count(1, 3);
    std::uniform_int_distribution<int> rbg(2, 4);
    std::uniform_real_distribution<double> demand(0.3, 2.5);
    std::uniform_real_distribution<double> offset(0.0, 0.5);
    bool ok = true;
    for (int trial = 0; trial < 100 && ok; ++trial) {
        ScenarioConfig c;
        c.total_prbs = 50;
        c.rbg_size = rbg(rng);
        c.tick = 0.1;
        c.duration = 300.0;
        c.seed = 2000 + static_cast<std::uint64_t>(trial);
        c.demand_jitter = (trial % 2 == 0) ? 0.0 : 0.1;
        const int n = slice_count(rng);
        static const char* names[] = {"embb", "mmtc", "urllc"};
        for (int s = 0; s < n; ++s) {
            c.slices.push_back({names[s], demand(rng), c.rbg_size});
        }
        const AgentSpec es{"es", Policy::ENERGY_SAVER, c.rbg_size, {1.0, offset(rng), std::nullopt}};
        const SimTrace trace = run_single(c, es);

        std::vector<double> buffer(n, 0.0);
        std::vector<double> served_total(n, 0.0);
        for (std::size_t t = 0; t < trace.num_ticks && ok; ++t) {
            int total_alloc = 0;
            for (int s = 0; s < n; ++s) {
                const TickRecord& r = trace.records[t * n + s];
                total_alloc += r.prbs_allocated;
                const double arrivals = c.slices[s].demand * kBytesPerMbit * c.tick *
                                        arrival_noise_factor(c.seed, t, s, c.demand_jitter);
                const double capacity =
                    c.capacity_per_prb * r.prbs_allocated * kBytesPerMbit * c.tick;
                const double queue = buffer[s] + arrivals;
                const double served = std::min(queue, capacity);
                buffer[s] = queue - served;
                // bitwise conservation: arrivals = served + queue growth
                ok = ok && r.buffer_bytes == buffer[s];
                ok = ok && r.throughput_mbps == served / (kBytesPerMbit * c.tick);
                served_total[s] += served;
            }
            ok = ok && total_alloc <= c.total_prbs;
        }
        if (c.demand_jitter == 0.0) {
            for (int s = 0; s < n && ok; ++s) {
                const double avg_tput = served_total[s] / (kBytesPerMbit * c.duration);
                ok = avg_tput >= 0.99 * c.slices[s].demand;
            }
        }
    }
    report(9, "simulator conservation, PRB budget safety, and demand delivery", ok);
}

// ---- criterion 10 ----------------------------------------------------------

void criterion_performance() {
    std::vector<double> xs(100000), ys(100000);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        xs[k] = static_cast<double>(2 * k);
        ys[k] = static_cast<double>(2 * k + 1);
    }
    const Ecdf a = build_ecdf(xs);
    const Ecdf b = build_ecdf(ys);
    const std::vector<Ecdf> pair{a, b};

    auto t0 = Clock::now();
    const PredictedCdf mix =
        weighted_ecdf_average(pair, WeightVector{{0.5, 0.5}, WeightMode::RATE});
    const double avg_ms = seconds_since(t0) * 1e3;

    t0 = Clock::now();
    const double ks = ks_distance(a, b);
    const double ks_ms = seconds_since(t0) * 1e3;

    t0 = Clock::now();
    const double in = int_distance(a, b);
    const double int_ms = seconds_since(t0) * 1e3;

    const bool ok = mix.support.size() == 200000 && ks > 0.0 && in > 0.0 && avg_ms < 100.0 &&
                    ks_ms < 50.0 && int_ms < 50.0;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "average %.1f ms, KS %.1f ms, INT %.1f ms", avg_ms,
                  ks_ms, int_ms);
    report(10, "distance and mixture kernels at 10^5-point scale", ok, detail);
}

}  // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / "conflictlens_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    criterion_cdf_validity();
    criterion_metric_axioms();
    criterion_wasserstein_oracle();
    criterion_mixture_oracle();
    criterion_weight_formula();
    criterion_effective_periodicity();
    criteria_end_to_end(work);
    criterion_conservation();
    criterion_performance();

    fs::remove_all(work);
    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
