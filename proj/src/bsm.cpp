#include "cvkit/bsm.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <unordered_map>

namespace cvkit {

namespace {

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

// Splits one CSV line into exactly 5 fields; returns false on any other count.
bool split5(std::string_view line, std::array<std::string_view, 5>& out) {
    std::size_t field = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (field >= 5) return false;
            out[field++] = line.substr(start, i - start);
            start = i + 1;
        }
    }
    return field == 5;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !s.empty();
}

void append_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

void append_record(std::string& out, const BsmRecord& r) {
    out += r.vehicle_id;
    out += ',';
    out += std::to_string(r.timestamp);
    out += ',';
    append_double(out, r.latitude);
    out += ',';
    append_double(out, r.longitude);
    out += ',';
    append_double(out, r.speed);
    out += '\n';
}

}  // namespace

MalformedRow::MalformedRow(std::size_t line_no, const std::string& detail)
    : Error("malformed row at line " + std::to_string(line_no) + ": " + detail),
      line(line_no) {}

OutOfRange::OutOfRange(std::size_t line_no, const std::string& field_name, double value)
    : Error("out-of-range " + field_name + " at line " + std::to_string(line_no) + ": " +
            std::to_string(value)),
      line(line_no),
      field(field_name) {}

std::vector<BsmRecord> parse_bsm_csv(std::string_view text) {
    std::vector<BsmRecord> records;
    std::size_t line_no = 0;
    bool header_seen = false;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;

        if (!header_seen) {
            if (line != kBsmCsvHeader) {
                throw MalformedRow(line_no, "expected header '" + std::string(kBsmCsvHeader) + "'");
            }
            header_seen = true;
            continue;
        }

        std::array<std::string_view, 5> f;
        if (!split5(line, f)) {
            throw MalformedRow(line_no, "expected 5 comma-separated columns");
        }

        BsmRecord r;
        r.vehicle_id = std::string(f[0]);
        if (r.vehicle_id.empty()) {
            throw MalformedRow(line_no, "empty vehicle_id");
        }
        if (!parse_number(f[1], r.timestamp)) {
            throw MalformedRow(line_no, "unparseable timestamp '" + std::string(f[1]) + "'");
        }
        if (!parse_number(f[2], r.latitude)) {
            throw MalformedRow(line_no, "unparseable latitude '" + std::string(f[2]) + "'");
        }
        if (!parse_number(f[3], r.longitude)) {
            throw MalformedRow(line_no, "unparseable longitude '" + std::string(f[3]) + "'");
        }
        if (!parse_number(f[4], r.speed)) {
            throw MalformedRow(line_no, "unparseable speed '" + std::string(f[4]) + "'");
        }

        if (r.latitude < -90.0 || r.latitude > 90.0) {
            throw OutOfRange(line_no, "latitude", r.latitude);
        }
        if (r.longitude < -180.0 || r.longitude > 180.0) {
            throw OutOfRange(line_no, "longitude", r.longitude);
        }
        if (r.speed < 0.0) {
            throw OutOfRange(line_no, "speed", r.speed);
        }
        records.push_back(std::move(r));
    }

    if (!header_seen) {
        throw MalformedRow(1, "missing header row");
    }
    return records;
}

std::string serialize_bsm_csv(const std::vector<BsmRecord>& records) {
    std::string out{kBsmCsvHeader};
    out += '\n';
    for (const auto& r : records) append_record(out, r);
    return out;
}

std::string serialize_bsm_csv(const std::vector<Timeframe>& frames) {
    std::string out{kBsmCsvHeader};
    out += '\n';
    for (const auto& frame : frames) {
        for (const auto& r : frame.vehicles) append_record(out, r);
    }
    return out;
}

std::vector<Timeframe> group_into_timeframes(const std::vector<BsmRecord>& records) {
    // Keyed map keeps frames sorted by timestamp; per-frame index map
    // enforces the keep-last collapse without disturbing first-seen order.
    std::map<std::int64_t, Timeframe> frames;
    std::map<std::int64_t, std::unordered_map<std::string, std::size_t>> index;

    for (const auto& r : records) {
        auto& frame = frames[r.timestamp];
        frame.timestamp = r.timestamp;
        auto& ids = index[r.timestamp];
        auto it = ids.find(r.vehicle_id);
        if (it == ids.end()) {
            ids.emplace(r.vehicle_id, frame.vehicles.size());
            frame.vehicles.push_back(r);
        } else {
            frame.vehicles[it->second] = r;
        }
    }

    std::vector<Timeframe> out;
    out.reserve(frames.size());
    for (auto& [t, frame] : frames) out.push_back(std::move(frame));
    return out;
}

}  // namespace cvkit
