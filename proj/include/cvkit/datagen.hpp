#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cvkit/bsm.hpp"
#include "cvkit/errors.hpp"
#include "cvkit/geo.hpp"

namespace cvkit {

// The Ann Arbor test region: the fixed 348 km² rectangle all generated
// positions fall in.
GeoRect ann_arbor_rect();

struct GenConfig {
    int n_vehicles = 1;
    GeoRect rect = ann_arbor_rect();
    // Timeframe count; nullopt sizes the dataset to max_file_kb.
    std::optional<int> n_timeframes;
    std::uint64_t seed = 0;
    double max_file_kb = 4500.0;
};

class CapTooSmall : public Error {
public:
    CapTooSmall(double frame_kb, double max_file_kb);
};

// n_vehicles records placed uniformly i.i.d. in cfg.rect, speeds uniform in
// [0, 30] m/s, ids "v0".."v{n-1}". Deterministic in (seed, t) alone via a
// counter-based generator, so frames are independent across timestamps and
// generable in any order.
Timeframe generate_timeframe(const GenConfig& cfg, std::int64_t t);

// Serializes timeframes at t = 0, 1, 2, ... into BSM CSV text. With
// n_timeframes unset, emits the largest frame count whose serialized size
// stays within max_file_kb and throws CapTooSmall when not even one frame
// fits. Byte-identical for equal configs.
std::string generate_dataset(const GenConfig& cfg);

}  // namespace cvkit
