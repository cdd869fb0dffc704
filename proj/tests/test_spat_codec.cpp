#include <doctest.h>

#include <random>

#include "cvkit/spat/codec.hpp"
#include "cvkit/spat/emulator.hpp"

using namespace cvkit::spat;

namespace {

IntersectionState random_state(std::mt19937_64& rng) {
    IntersectionState s;
    std::uniform_int_distribution<int> color(0, 2);
    for (auto& phase : s.phases) phase = static_cast<PhaseColor>(color(rng));
    return s;
}

}  // namespace

TEST_SUITE("spat_codec") {

TEST_CASE("241 zero bytes parse to empty masks") {
    const std::vector<std::uint8_t> bytes(kFrameBytes, 0);
    const SpatFrame frame = parse_spat_packet(bytes);
    CHECK(frame.red_bits == 0);
    CHECK(frame.yellow_bits == 0);
    CHECK(frame.green_bits == 0);
    CHECK_FALSE(frame.has_pedestrian_bytes);
    CHECK(frame.raw.size() == kFrameBytes);
}

TEST_CASE("245 bytes set the pedestrian flag; 243 is rejected") {
    const std::vector<std::uint8_t> ped(kFrameBytesPedestrian, 0);
    CHECK(parse_spat_packet(ped).has_pedestrian_bytes);

    const std::vector<std::uint8_t> bad(243, 0);
    try {
        parse_spat_packet(bad);
        FAIL("expected BadLength");
    } catch (const BadLength& e) {
        CHECK(e.actual == 243);
    }
    CHECK_THROWS_AS(parse_spat_packet(std::vector<std::uint8_t>{}), BadLength);
    CHECK_THROWS_AS(parse_spat_packet(std::vector<std::uint8_t>(246, 0)), BadLength);
}

TEST_CASE("green mask extracted from its offset") {
    std::vector<std::uint8_t> bytes(kFrameBytes, 0);
    bytes[kGreenOffset] = 0x22;
    const SpatFrame frame = parse_spat_packet(bytes);
    CHECK(frame.green_bits == 0x22);
    CHECK(frame.red_bits == 0);
    CHECK(frame.yellow_bits == 0);
}

TEST_CASE("parse result depends only on the three mask offsets") {
    std::mt19937_64 rng(13);
    std::vector<std::uint8_t> noise(kFrameBytes);
    for (auto& b : noise) b = static_cast<std::uint8_t>(rng());
    noise[kRedOffset] = 0xDD;
    noise[kYellowOffset] = 0x00;
    noise[kGreenOffset] = 0x22;

    std::vector<std::uint8_t> zeros(kFrameBytes, 0);
    zeros[kRedOffset] = 0xDD;
    zeros[kYellowOffset] = 0x00;
    zeros[kGreenOffset] = 0x22;

    const SpatFrame a = parse_spat_packet(noise);
    const SpatFrame b = parse_spat_packet(zeros);
    CHECK(a.red_bits == b.red_bits);
    CHECK(a.yellow_bits == b.yellow_bits);
    CHECK(a.green_bits == b.green_bits);
    CHECK(interpret_state(a) == interpret_state(b));
    CHECK(a.raw == noise);  // unknown bytes preserved verbatim
}

TEST_CASE("all-zero masks derive all-red") {
    const SpatFrame frame = parse_spat_packet(std::vector<std::uint8_t>(kFrameBytes, 0));
    const IntersectionState state = interpret_state(frame);
    for (const PhaseColor c : state.phases) CHECK(c == PhaseColor::Red);
    CHECK(state == all_red_state());
}

TEST_CASE("green bits 0x22 light phases 2 and 6") {
    std::vector<std::uint8_t> bytes(kFrameBytes, 0);
    bytes[kGreenOffset] = 0x22;
    const IntersectionState state = interpret_state(parse_spat_packet(bytes));
    for (int phase = 1; phase <= 8; ++phase) {
        const PhaseColor expected =
            (phase == 2 || phase == 6) ? PhaseColor::Green : PhaseColor::Red;
        CHECK(state.phases[static_cast<std::size_t>(phase - 1)] == expected);
    }
}

TEST_CASE("green and yellow on one phase conflict") {
    std::vector<std::uint8_t> bytes(kFrameBytes, 0);
    bytes[kGreenOffset] = 0x02;
    bytes[kYellowOffset] = 0x02;
    try {
        interpret_state(parse_spat_packet(bytes));
        FAIL("expected ConflictingBits");
    } catch (const ConflictingBits& e) {
        CHECK(e.phase == 2);
    }
}

TEST_CASE("consistency check against the red mask") {
    std::vector<std::uint8_t> bytes(kFrameBytes, 0);
    bytes[kRedOffset] = 0xDD;  // complement of 0x22
    bytes[kGreenOffset] = 0x22;
    CHECK(consistency_check(parse_spat_packet(bytes)).empty());

    bytes[kRedOffset] = 0xFF;
    CHECK(consistency_check(parse_spat_packet(bytes)) == std::vector<int>{2, 6});

    const SpatFrame zero = parse_spat_packet(std::vector<std::uint8_t>(kFrameBytes, 0));
    CHECK(consistency_check(zero) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
}

TEST_CASE("encode: all-red fills the red byte only") {
    const auto bytes = encode_spat_packet(all_red_state(), false);
    REQUIRE(bytes.size() == kFrameBytes);
    CHECK(bytes[kRedOffset] == 0xFF);
    CHECK(bytes[kYellowOffset] == 0);
    CHECK(bytes[kGreenOffset] == 0);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        if (i != kRedOffset) CHECK(bytes[i] == 0);
    }
}

TEST_CASE("encode: pedestrian flag selects the long frame") {
    CHECK(encode_spat_packet(all_red_state(), true).size() == kFrameBytesPedestrian);
    CHECK(parse_spat_packet(encode_spat_packet(all_red_state(), true)).has_pedestrian_bytes);
}

TEST_CASE("round-trip over the default cycle states") {
    for (const auto& phase : default_cycle()) {
        for (const bool ped : {false, true}) {
            const auto bytes = encode_spat_packet(phase.state, ped);
            const SpatFrame frame = parse_spat_packet(bytes);
            CHECK(interpret_state(frame) == phase.state);
            CHECK(frame.has_pedestrian_bytes == ped);
            CHECK(consistency_check(frame).empty());
        }
    }
}

TEST_CASE("property: round-trip over random valid states") {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 1000; ++iter) {
        const IntersectionState state = random_state(rng);
        const bool ped = (rng() & 1) != 0;
        const auto bytes = encode_spat_packet(state, ped);
        const SpatFrame frame = parse_spat_packet(bytes);
        CHECK(interpret_state(frame) == state);
        CHECK(frame.has_pedestrian_bytes == ped);
        CHECK(consistency_check(frame).empty());
    }
}

TEST_CASE("phase color names round-trip") {
    for (const PhaseColor c : {PhaseColor::Red, PhaseColor::Yellow, PhaseColor::Green}) {
        CHECK(phase_color_from_string(to_string(c)) == c);
    }
    CHECK_THROWS_AS(phase_color_from_string("blue"), cvkit::Error);
}

}  // TEST_SUITE
