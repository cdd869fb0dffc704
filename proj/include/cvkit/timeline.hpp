#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvkit/bsm.hpp"
#include "cvkit/partition.hpp"

namespace cvkit {

// One timeframe of the exported simulation: positions plus the partition
// label each vehicle landed in.
struct TimelineVehicle {
    std::string vehicle_id;
    double latitude = 0.0;
    double longitude = 0.0;
    int partition = 0;
};

struct TimelineRecord {
    std::int64_t timestamp = 0;
    std::vector<TimelineVehicle> vehicles;
    int partition_count = 0;
};

inline constexpr std::string_view kTimelineFormatName = "cvkit-timeline";
inline constexpr int kTimelineFormatVersion = 1;

TimelineRecord make_timeline_record(const Timeframe& frame, const PartitionAssignment& parts);

struct TimelineSummary {
    std::size_t frames = 0;
    std::size_t vehicle_rows = 0;
    double mean_partitions = 0.0;
};

// Runs distance -> closure -> extract per frame and writes line-delimited
// JSON: a {"format","version"} header line, then one record per frame in
// timestamp order. Deterministic byte-for-byte for equal inputs.
TimelineSummary write_timeline(std::ostream& out,
                               const std::vector<Timeframe>& frames,
                               double range_m);

}  // namespace cvkit
