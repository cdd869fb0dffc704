#include "cvkit/spat/codec.hpp"

#include <string>

namespace cvkit::spat {

BadLength::BadLength(std::size_t actual_len)
    : Error("SPaT datagram must be 241 or 245 bytes, got " + std::to_string(actual_len)),
      actual(actual_len) {}

ConflictingBits::ConflictingBits(int phase_no)
    : Error("phase " + std::to_string(phase_no) + " has both green and yellow bits set"),
      phase(phase_no) {}

std::string_view to_string(PhaseColor c) {
    switch (c) {
        case PhaseColor::Red: return "red";
        case PhaseColor::Yellow: return "yellow";
        case PhaseColor::Green: return "green";
    }
    return "red";
}

PhaseColor phase_color_from_string(std::string_view s) {
    if (s == "red") return PhaseColor::Red;
    if (s == "yellow") return PhaseColor::Yellow;
    if (s == "green") return PhaseColor::Green;
    throw Error("unknown phase color '" + std::string(s) + "'");
}

SpatFrame parse_spat_packet(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kFrameBytes && bytes.size() != kFrameBytesPedestrian) {
        throw BadLength(bytes.size());
    }
    SpatFrame frame;
    frame.raw.assign(bytes.begin(), bytes.end());
    frame.red_bits = bytes[kRedOffset];
    frame.yellow_bits = bytes[kYellowOffset];
    frame.green_bits = bytes[kGreenOffset];
    frame.has_pedestrian_bytes = bytes.size() == kFrameBytesPedestrian;
    return frame;
}

IntersectionState interpret_state(const SpatFrame& frame) {
    IntersectionState state;
    for (int phase = 0; phase < kPhaseCount; ++phase) {
        const bool green = (frame.green_bits >> phase) & 1u;
        const bool yellow = (frame.yellow_bits >> phase) & 1u;
        if (green && yellow) throw ConflictingBits(phase + 1);
        state.phases[static_cast<std::size_t>(phase)] =
            green ? PhaseColor::Green : (yellow ? PhaseColor::Yellow : PhaseColor::Red);
    }
    return state;
}

std::vector<int> consistency_check(const SpatFrame& frame) {
    std::vector<int> inconsistent;
    for (int phase = 0; phase < kPhaseCount; ++phase) {
        const bool red = (frame.red_bits >> phase) & 1u;
        const bool green_or_yellow =
            ((frame.green_bits | frame.yellow_bits) >> phase) & 1u;
        // The derived rule says red exactly when neither green nor yellow.
        if (red == green_or_yellow) inconsistent.push_back(phase + 1);
    }
    return inconsistent;
}

std::vector<std::uint8_t> encode_spat_packet(const IntersectionState& state, bool pedestrian) {
    std::vector<std::uint8_t> bytes(pedestrian ? kFrameBytesPedestrian : kFrameBytes, 0);
    std::uint8_t green = 0;
    std::uint8_t yellow = 0;
    for (int phase = 0; phase < kPhaseCount; ++phase) {
        switch (state.phases[static_cast<std::size_t>(phase)]) {
            case PhaseColor::Green: green |= std::uint8_t(1u << phase); break;
            case PhaseColor::Yellow: yellow |= std::uint8_t(1u << phase); break;
            case PhaseColor::Red: break;
        }
    }
    bytes[kGreenOffset] = green;
    bytes[kYellowOffset] = yellow;
    bytes[kRedOffset] = static_cast<std::uint8_t>(~(green | yellow));
    return bytes;
}

}  // namespace cvkit::spat
