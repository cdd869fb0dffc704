#include "cvkit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "cvkit/datagen.hpp"
#include "cvkit/partition.hpp"

namespace cvkit {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::micro>(b - a).count();
}

struct FrameCost {
    double distance_us = 0.0;
    double closure_us = 0.0;
    double extract_us = 0.0;
    int partitions = 0;
};

FrameCost process_frame(const Timeframe& frame, double range_m) {
    FrameCost cost;
    const auto t0 = Clock::now();
    const DistanceMatrix d = distance_matrix(frame);
    const auto t1 = Clock::now();
    auto [closed, trace] = multihop_closure(connectivity_from_distances(d, range_m));
    const auto t2 = Clock::now();
    const PartitionAssignment parts = extract_partitions(closed);
    const auto t3 = Clock::now();
    cost.distance_us = elapsed_us(t0, t1);
    cost.closure_us = elapsed_us(t1, t2);
    cost.extract_us = elapsed_us(t2, t3);
    cost.partitions = parts.partition_count;
    return cost;
}

}  // namespace

DegenerateInput::DegenerateInput(const std::string& detail)
    : Error("degenerate input: " + detail) {}

std::vector<StageTiming> run_benchmark(const std::vector<int>& ns,
                                       std::uint64_t seed,
                                       double range_m) {
    std::vector<StageTiming> out;
    out.reserve(ns.size());
    for (const int n : ns) {
        GenConfig cfg;
        cfg.n_vehicles = n;
        cfg.seed = seed;
        const std::string csv = generate_dataset(cfg);
        const std::vector<Timeframe> frames = group_into_timeframes(parse_bsm_csv(csv));

        process_frame(frames.front(), range_m);  // warm-up, not recorded

        StageTiming timing;
        timing.n = n;
        std::int64_t partition_sum = 0;
        for (const auto& frame : frames) {
            const FrameCost cost = process_frame(frame, range_m);
            timing.distance_us += cost.distance_us;
            timing.closure_us += cost.closure_us;
            timing.extract_us += cost.extract_us;
            partition_sum += cost.partitions;
        }
        timing.timeframes_measured = static_cast<int>(frames.size());
        timing.distance_us /= timing.timeframes_measured;
        timing.closure_us /= timing.timeframes_measured;
        timing.extract_us /= timing.timeframes_measured;
        timing.mean_partitions =
            static_cast<double>(partition_sum) / timing.timeframes_measured;
        out.push_back(timing);
    }
    return out;
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) {
        throw DegenerateInput("need at least 3 points for a slope fit");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].first <= 0.0 || points[i].second <= 0.0) {
            throw DegenerateInput("slope fit requires positive n and time");
        }
        if (i > 0 && points[i].first <= points[i - 1].first) {
            throw DegenerateInput("slope fit requires strictly increasing n");
        }
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, t] : points) {
        const double x = std::log(n);
        const double y = std::log(t);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double count = static_cast<double>(points.size());
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

std::vector<DensitySample> partition_density_sweep(const std::vector<int>& ns,
                                                   int trials,
                                                   double range_m,
                                                   std::uint64_t seed,
                                                   bool parallel_trials) {
    if (trials < 1) throw DegenerateInput("trials must be >= 1");
    const double area = rectangle_area_km2(ann_arbor_rect());

    std::vector<DensitySample> out;
    out.reserve(ns.size());
    for (const int n : ns) {
        // One frame per trial, each keyed by its own timestamp so trials are
        // independent draws from the same configuration.
        std::vector<std::int64_t> counts(static_cast<std::size_t>(trials), 0);
        auto run_trial = [&](int trial) {
            GenConfig cfg;
            cfg.n_vehicles = n;
            cfg.seed = seed;
            const Timeframe frame = generate_timeframe(cfg, trial);
            const DistanceMatrix d = distance_matrix(frame);
            auto [closed, trace] = multihop_closure(connectivity_from_distances(d, range_m));
            counts[static_cast<std::size_t>(trial)] =
                extract_partitions(closed).partition_count;
        };

        if (parallel_trials) {
            const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
            std::vector<std::thread> workers;
            std::atomic<int> next{0};
            for (unsigned w = 0; w < hw; ++w) {
                workers.emplace_back([&] {
                    for (int trial = next.fetch_add(1); trial < trials;
                         trial = next.fetch_add(1)) {
                        run_trial(trial);
                    }
                });
            }
            for (auto& th : workers) th.join();
        } else {
            for (int trial = 0; trial < trials; ++trial) run_trial(trial);
        }

        std::int64_t sum = 0;
        for (const auto c : counts) sum += c;
        DensitySample sample;
        sample.n = n;
        sample.density = n / area;
        sample.mean_partitions = static_cast<double>(sum) / trials;
        sample.trials = trials;
        out.push_back(sample);
    }
    return out;
}

ResultRow to_result_row(const StageTiming& t, double area_km2) {
    ResultRow row;
    row.n = t.n;
    row.density = t.n / area_km2;
    row.distance_us = t.distance_us;
    row.closure_us = t.closure_us;
    row.extract_us = t.extract_us;
    row.mean_partitions = t.mean_partitions;
    row.trials = t.timeframes_measured;
    return row;
}

ResultRow to_result_row(const DensitySample& s) {
    ResultRow row;
    row.n = s.n;
    row.density = s.density;
    row.distance_us = std::numeric_limits<double>::quiet_NaN();
    row.closure_us = std::numeric_limits<double>::quiet_NaN();
    row.extract_us = std::numeric_limits<double>::quiet_NaN();
    row.mean_partitions = s.mean_partitions;
    row.trials = s.trials;
    return row;
}

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
    out << "n,density,distance_us,closure_us,extract_us,mean_partitions,trials\n";
    auto cell = [&](double v) {
        if (std::isnan(v)) return;  // unmeasured -> empty field
        out << v;
    };
    for (const auto& r : rows) {
        out << r.n << ',' << r.density << ',';
        cell(r.distance_us);
        out << ',';
        cell(r.closure_us);
        out << ',';
        cell(r.extract_us);
        out << ',' << r.mean_partitions << ',' << r.trials << '\n';
    }
}

}  // namespace cvkit
