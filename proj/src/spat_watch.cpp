#include "cvkit/spat/watch.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <httplib.h>
#include <json.hpp>

#include "cvkit/spat/gateway.hpp"

namespace cvkit::spat {

Unreachable::Unreachable(const std::string& url)
    : Error("gateway unreachable at " + url) {}

NoChangesObserved::NoChangesObserved()
    : Error("no state changes observed within the watch duration") {}

LatencyStats latency_stats(std::vector<double> latencies_ms) {
    LatencyStats stats;
    if (latencies_ms.empty()) return stats;
    std::sort(latencies_ms.begin(), latencies_ms.end());
    const std::size_t n = latencies_ms.size();
    auto nearest_rank = [&](double q) {
        const std::size_t rank =
            static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
        return latencies_ms[std::max<std::size_t>(rank, 1) - 1];
    };
    stats.samples = n;
    stats.median_ms = nearest_rank(0.50);
    stats.p95_ms = nearest_rank(0.95);
    stats.max_ms = latencies_ms.back();
    return stats;
}

namespace {

struct ObservedChange {
    std::uint64_t sequence = 0;
    IntersectionState state;
};

bool parse_snapshot_body(const std::string& body, ObservedChange& out) {
    nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("sequence") || !doc.contains("phases")) {
        return false;
    }
    out.sequence = doc["sequence"].get<std::uint64_t>();
    const auto& phases = doc["phases"];
    if (!phases.is_array() || phases.size() != kPhaseCount) return false;
    for (int i = 0; i < kPhaseCount; ++i) {
        out.state.phases[static_cast<std::size_t>(i)] =
            phase_color_from_string(phases[static_cast<std::size_t>(i)].get<std::string>());
    }
    return true;
}

}  // namespace

LatencyStats watch_client(const WatchOptions& opts) {
    httplib::Client cli(opts.base_url);
    cli.set_connection_timeout(std::chrono::seconds(3));
    // Long polls park for up to 5 s server-side; keep the read timeout above that.
    cli.set_read_timeout(kLongPollTimeout + std::chrono::seconds(3));
    cli.set_keep_alive(true);

    auto baseline = cli.Get("/spat");
    if (!baseline || baseline->status != 200) throw Unreachable(opts.base_url);
    ObservedChange current;
    if (!parse_snapshot_body(baseline->body, current)) throw Unreachable(opts.base_url);
    std::uint64_t since = current.sequence;

    std::vector<double> latencies_ms;
    const auto deadline = std::chrono::steady_clock::now() + opts.duration;
    int consecutive_failures = 0;

    while (std::chrono::steady_clock::now() < deadline) {
        auto res = cli.Get("/spat?since=" + std::to_string(since));
        const auto recv_time = std::chrono::steady_clock::now();
        if (!res || res->status != 200) {
            if (++consecutive_failures >= 3) throw Unreachable(opts.base_url);
            continue;
        }
        consecutive_failures = 0;

        ObservedChange change;
        if (!parse_snapshot_body(res->body, change)) continue;
        if (change.sequence <= since) continue;  // long-poll timeout, nothing new
        since = change.sequence;

        if (!opts.transitions) continue;

        // The observed state maps to the most recent logged transition into
        // that state; anything newer than our receipt time is a different,
        // later occurrence.
        const std::vector<TransitionRecord> log = opts.transitions();
        const TransitionRecord* match = nullptr;
        for (const auto& rec : log) {
            if (rec.send_time <= recv_time && rec.state == change.state) match = &rec;
        }
        if (match == nullptr) continue;

        const double latency_ms =
            std::chrono::duration<double, std::milli>(recv_time - match->send_time).count();
        latencies_ms.push_back(latency_ms);
        if (opts.live_out != nullptr) {
            (*opts.live_out) << "change sequence=" << change.sequence
                             << " state=" << state_letters(change.state)
                             << " latency_ms=" << latency_ms << '\n';
        }
    }

    if (latencies_ms.empty()) throw NoChangesObserved();
    return latency_stats(std::move(latencies_ms));
}

}  // namespace cvkit::spat
