#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvkit/errors.hpp"
#include "cvkit/spat/emulator.hpp"

namespace cvkit::spat {

struct LatencyStats {
    std::size_t samples = 0;
    double median_ms = 0.0;
    double p95_ms = 0.0;
    double max_ms = 0.0;
};

// Nearest-rank percentiles over the raw samples; median <= p95 <= max by
// construction.
LatencyStats latency_stats(std::vector<double> latencies_ms);

class Unreachable : public Error {
public:
    explicit Unreachable(const std::string& url);
};

class NoChangesObserved : public Error {
public:
    NoChangesObserved();
};

struct WatchOptions {
    std::string base_url;  // e.g. "http://127.0.0.1:8080"
    std::chrono::milliseconds duration{30000};
    // Emulator transition log so far; re-queried after every observed change.
    std::function<std::vector<TransitionRecord>()> transitions;
    std::ostream* live_out = nullptr;  // one line per observed change
};

// Long-polls /spat?since=k for the duration. Each observed change is matched
// to the latest logged transition into the same state, and the latency is
// receipt time minus that send stamp (both on the host monotonic clock).
// Throws Unreachable when the gateway never answers and NoChangesObserved
// when the run ends with zero samples.
LatencyStats watch_client(const WatchOptions& opts);

}  // namespace cvkit::spat
