#include "cvkit/timeline.hpp"

#include <ostream>

#include <json.hpp>

#include "cvkit/geo.hpp"

namespace cvkit {

TimelineRecord make_timeline_record(const Timeframe& frame, const PartitionAssignment& parts) {
    TimelineRecord rec;
    rec.timestamp = frame.timestamp;
    rec.partition_count = parts.partition_count;
    rec.vehicles.reserve(frame.vehicles.size());
    for (std::size_t i = 0; i < frame.vehicles.size(); ++i) {
        const auto& v = frame.vehicles[i];
        rec.vehicles.push_back(TimelineVehicle{v.vehicle_id, v.latitude, v.longitude,
                                               parts.labels[i]});
    }
    return rec;
}

namespace {

nlohmann::ordered_json record_to_json(const TimelineRecord& rec) {
    nlohmann::ordered_json doc;
    doc["timestamp"] = rec.timestamp;
    doc["partition_count"] = rec.partition_count;
    nlohmann::ordered_json vehicles = nlohmann::ordered_json::array();
    for (const auto& v : rec.vehicles) {
        nlohmann::ordered_json entry;
        entry["vehicle_id"] = v.vehicle_id;
        entry["latitude"] = v.latitude;
        entry["longitude"] = v.longitude;
        entry["partition"] = v.partition;
        vehicles.push_back(std::move(entry));
    }
    doc["vehicles"] = std::move(vehicles);
    return doc;
}

}  // namespace

TimelineSummary write_timeline(std::ostream& out,
                               const std::vector<Timeframe>& frames,
                               double range_m) {
    out << "{\"format\":\"" << kTimelineFormatName << "\",\"version\":"
        << kTimelineFormatVersion << "}\n";

    TimelineSummary summary;
    std::int64_t partition_sum = 0;
    for (const auto& frame : frames) {
        const DistanceMatrix d = distance_matrix(frame);
        auto [closed, trace] = multihop_closure(connectivity_from_distances(d, range_m));
        const PartitionAssignment parts = extract_partitions(closed);
        const TimelineRecord rec = make_timeline_record(frame, parts);
        out << record_to_json(rec).dump() << '\n';
        ++summary.frames;
        summary.vehicle_rows += rec.vehicles.size();
        partition_sum += rec.partition_count;
    }
    summary.mean_partitions =
        summary.frames == 0 ? 0.0
                            : static_cast<double>(partition_sum) /
                                  static_cast<double>(summary.frames);
    return summary;
}

}  // namespace cvkit
