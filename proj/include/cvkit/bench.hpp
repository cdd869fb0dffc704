#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "cvkit/errors.hpp"

namespace cvkit {

// Mean wall-clock cost of the per-timeframe pipeline stages at one vehicle
// count, plus the mean partition count seen while measuring.
struct StageTiming {
    int n = 0;
    double distance_us = 0.0;
    double closure_us = 0.0;
    double extract_us = 0.0;
    int timeframes_measured = 0;
    double mean_partitions = 0.0;
};

struct DensitySample {
    int n = 0;
    double density = 0.0;  // vehicles per km² of the test rectangle
    double mean_partitions = 0.0;
    int trials = 0;
};

class DegenerateInput : public Error {
public:
    explicit DegenerateInput(const std::string& detail);
};

// For each n: generates a size-capped dataset, parses it back through the
// CSV path, then times distance -> closure -> extract per timeframe with a
// monotonic clock. The first timeframe runs once untimed as warm-up.
std::vector<StageTiming> run_benchmark(const std::vector<int>& ns,
                                       std::uint64_t seed,
                                       double range_m);

// Least-squares slope of log(time) vs log(n). Throws DegenerateInput for
// fewer than 3 points, non-increasing n, or non-positive values.
double fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

// Mean partition count over `trials` independently seeded timeframes in the
// Ann Arbor rectangle, for each n. Trials use integer partition counts, so
// the mean is identical whether trials run sequentially or in parallel.
std::vector<DensitySample> partition_density_sweep(const std::vector<int>& ns,
                                                   int trials,
                                                   double range_m,
                                                   std::uint64_t seed,
                                                   bool parallel_trials = false);

// One row of the plottable results CSV. Timing cells may be NaN when the
// producing run did not measure them; they serialize as empty fields.
struct ResultRow {
    int n = 0;
    double density = 0.0;
    double distance_us = 0.0;
    double closure_us = 0.0;
    double extract_us = 0.0;
    double mean_partitions = 0.0;
    int trials = 0;
};

ResultRow to_result_row(const StageTiming& t, double area_km2);
ResultRow to_result_row(const DensitySample& s);

// Header: n,density,distance_us,closure_us,extract_us,mean_partitions,trials
void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);

}  // namespace cvkit
