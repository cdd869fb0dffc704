#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cvkit/errors.hpp"

namespace cvkit::spat {

// NTCIP SPaT datagram layout. Offsets are zero-based byte indices into the
// frame and the bit order is LSB = phase 1; both are calibration constants —
// if real hardware disagrees, this is the one place to change.
inline constexpr std::size_t kFrameBytes = 241;
inline constexpr std::size_t kFrameBytesPedestrian = 245;  // 4 pedestrian-call bytes appended
inline constexpr std::size_t kRedOffset = 211;
inline constexpr std::size_t kYellowOffset = 213;
inline constexpr std::size_t kGreenOffset = 215;
inline constexpr int kPhaseCount = 8;

enum class PhaseColor : std::uint8_t { Red = 0, Yellow = 1, Green = 2 };

std::string_view to_string(PhaseColor c);
PhaseColor phase_color_from_string(std::string_view s);  // throws Error on unknown name

// Current color of phases 1..8 of a standard 8-phase intersection, one color
// per phase (overlap configurations are out of scope and surface as
// ConflictingBits instead).
struct IntersectionState {
    std::array<PhaseColor, kPhaseCount> phases{};  // value-init = all Red

    bool operator==(const IntersectionState&) const = default;
};

inline IntersectionState all_red_state() { return IntersectionState{}; }

// A decoded datagram: the verbatim bytes plus the three extracted masks.
// Bytes outside the known offsets are preserved untouched in raw.
struct SpatFrame {
    std::vector<std::uint8_t> raw;
    std::uint8_t red_bits = 0;
    std::uint8_t yellow_bits = 0;
    std::uint8_t green_bits = 0;
    bool has_pedestrian_bytes = false;
};

class BadLength : public Error {
public:
    explicit BadLength(std::size_t actual);
    std::size_t actual;
};

class ConflictingBits : public Error {
public:
    explicit ConflictingBits(int phase);
    int phase;  // 1-based
};

// Validates the length (241 or 245 bytes) and extracts the three masks.
// Nothing besides the length and the three offset bytes affects the result.
SpatFrame parse_spat_packet(std::span<const std::uint8_t> bytes);

// Derives per-phase colors: green bit -> Green, else yellow bit -> Yellow,
// else Red. The red mask is never consulted here (every phase without green
// or yellow is red by assumption); consistency_check audits that assumption.
// Throws ConflictingBits when a phase has both green and yellow set.
IntersectionState interpret_state(const SpatFrame& frame);

// Phases (1-based, ascending) where the red mask disagrees with the derived
// rule: red bit set on a green/yellow phase, or red bit clear on a derived-
// red phase.
std::vector<int> consistency_check(const SpatFrame& frame);

// Inverse codec for the emulator. Produces an all-zero frame except the
// three masks, with red as the complement of green|yellow, 241 or 245 bytes
// by the pedestrian flag. interpret(parse(encode(s, p))) == s.
std::vector<std::uint8_t> encode_spat_packet(const IntersectionState& state, bool pedestrian);

}  // namespace cvkit::spat
