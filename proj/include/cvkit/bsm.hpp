#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cvkit/errors.hpp"

namespace cvkit {

// One cleaned Basic Safety Message row. Timestamps are integer deciseconds
// since the dataset epoch (BSMs are broadcast every tenth of a second), so
// grouping never compares floating point.
struct BsmRecord {
    std::string vehicle_id;
    std::int64_t timestamp = 0;  // deciseconds
    double latitude = 0.0;       // degrees, WGS-84, [-90, 90]
    double longitude = 0.0;      // degrees, WGS-84, [-180, 180]
    double speed = 0.0;          // meters/second, >= 0

    bool operator==(const BsmRecord&) const = default;
};

// All records sharing one timestamp. Vehicle order is first appearance in
// the source file; no vehicle_id repeats within a frame.
struct Timeframe {
    std::int64_t timestamp = 0;
    std::vector<BsmRecord> vehicles;
};

class MalformedRow : public Error {
public:
    MalformedRow(std::size_t line, const std::string& detail);
    std::size_t line;
};

class OutOfRange : public Error {
public:
    OutOfRange(std::size_t line, const std::string& field, double value);
    std::size_t line;
    std::string field;
};

inline constexpr std::string_view kBsmCsvHeader =
    "vehicle_id,timestamp,latitude,longitude,speed";

// Parses the 5-column BSM CSV format. Accepts LF or CRLF line endings; the
// header row is consumed and validated. Throws MalformedRow for a wrong
// column count, an unparseable number, or an empty vehicle id, and
// OutOfRange for coordinates/speed outside their bounds. Line numbers in
// errors are 1-based file lines.
std::vector<BsmRecord> parse_bsm_csv(std::string_view text);

// Inverse of parse_bsm_csv. Doubles are written in shortest round-trip
// form, so parse(serialize(x)) == x holds exactly.
std::string serialize_bsm_csv(const std::vector<BsmRecord>& records);
std::string serialize_bsm_csv(const std::vector<Timeframe>& frames);

// Buckets records by timestamp, ascending. Within a frame vehicles keep
// first-appearance order; a duplicate (vehicle_id, timestamp) pair keeps
// the fields of the last occurrence (a re-sent message supersedes the
// earlier one).
std::vector<Timeframe> group_into_timeframes(const std::vector<BsmRecord>& records);

}  // namespace cvkit
