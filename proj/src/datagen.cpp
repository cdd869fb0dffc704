#include "cvkit/datagen.hpp"

#include <cstdio>
#include <string>

namespace cvkit {

namespace {

// splitmix64 finalizer; full 64-bit avalanche.
std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

// Counter-based generator: a unit double keyed by (seed, t, vehicle, dim).
double unit_double(std::uint64_t seed, std::int64_t t, std::uint64_t vehicle, std::uint64_t dim) {
    std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ull);
    h = mix64(h ^ static_cast<std::uint64_t>(t));
    h = mix64(h ^ vehicle);
    h = mix64(h ^ dim);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

constexpr double kMaxSpeedMps = 30.0;

}  // namespace

GeoRect ann_arbor_rect() {
    return GeoRect(42.226673, 42.356186, -83.816270, -83.522030);
}

CapTooSmall::CapTooSmall(double frame_kb, double max_file_kb)
    : Error("one timeframe serializes to " + std::to_string(frame_kb) +
            " KB, above the file cap of " + std::to_string(max_file_kb) + " KB") {}

Timeframe generate_timeframe(const GenConfig& cfg, std::int64_t t) {
    Timeframe frame;
    frame.timestamp = t;
    frame.vehicles.reserve(static_cast<std::size_t>(cfg.n_vehicles));
    const double lat_span = cfg.rect.lat_max() - cfg.rect.lat_min();
    const double lon_span = cfg.rect.lon_max() - cfg.rect.lon_min();
    for (int i = 0; i < cfg.n_vehicles; ++i) {
        const auto vi = static_cast<std::uint64_t>(i);
        BsmRecord r;
        r.vehicle_id = "v" + std::to_string(i);
        r.timestamp = t;
        r.latitude = cfg.rect.lat_min() + unit_double(cfg.seed, t, vi, 0) * lat_span;
        r.longitude = cfg.rect.lon_min() + unit_double(cfg.seed, t, vi, 1) * lon_span;
        r.speed = unit_double(cfg.seed, t, vi, 2) * kMaxSpeedMps;
        frame.vehicles.push_back(std::move(r));
    }
    return frame;
}

std::string generate_dataset(const GenConfig& cfg) {
    const std::size_t cap_bytes = static_cast<std::size_t>(cfg.max_file_kb * 1024.0);

    if (cfg.n_timeframes) {
        std::vector<Timeframe> frames;
        frames.reserve(static_cast<std::size_t>(*cfg.n_timeframes));
        for (int t = 0; t < *cfg.n_timeframes; ++t) {
            frames.push_back(generate_timeframe(cfg, t));
        }
        return serialize_bsm_csv(frames);
    }

    // Auto mode: keep appending whole frames while the file stays under the cap.
    std::string out{kBsmCsvHeader};
    out += '\n';
    for (std::int64_t t = 0;; ++t) {
        const std::string frame_text =
            serialize_bsm_csv(std::vector<Timeframe>{generate_timeframe(cfg, t)})
                .substr(kBsmCsvHeader.size() + 1);
        if (out.size() + frame_text.size() > cap_bytes) {
            if (t == 0) {
                throw CapTooSmall((out.size() + frame_text.size()) / 1024.0, cfg.max_file_kb);
            }
            return out;
        }
        out += frame_text;
    }
}

}  // namespace cvkit
