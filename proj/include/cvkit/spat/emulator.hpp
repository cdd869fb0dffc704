#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cvkit/errors.hpp"
#include "cvkit/spat/codec.hpp"

namespace cvkit::spat {

struct CyclePhase {
    IntersectionState state;
    int dwell_ds = 1;  // deciseconds = packets at 10 Hz
};

using CycleSpec = std::vector<CyclePhase>;

// The standard phase-pair rotation: 1&5 green, yellow, 2&6 green, yellow,
// 3&7 green, yellow, 4&8 green, yellow. Eight distinct states.
CycleSpec default_cycle(int green_dwell_ds = 30, int yellow_dwell_ds = 10);

// State index for the k-th packet; dwell is counted in packets, so the
// mapping is exact regardless of send jitter.
std::size_t cycle_state_at_packet(const CycleSpec& cycle, std::uint64_t packet_index);

// JSON cycle description: [{"phases": [8 x "red"|"yellow"|"green"],
// "dwell_ds": n}, ...]. Throws Error on malformed input.
CycleSpec cycle_from_json(std::string_view text);
std::string cycle_to_json(const CycleSpec& cycle);

struct TransitionRecord {
    std::uint64_t packet_index = 0;
    IntersectionState state;
    std::chrono::steady_clock::time_point send_time{};
};

// Transition log lines: "<packet_index> <monotonic_ns> <8 letters RYG>".
// The monotonic clock is host-wide, so a reader in another process can
// compare these stamps against its own.
std::string state_letters(const IntersectionState& s);
IntersectionState state_from_letters(std::string_view letters);
void append_transition(std::ostream& out, const TransitionRecord& rec);
std::vector<TransitionRecord> parse_transition_log(std::string_view text);
std::vector<TransitionRecord> read_transition_log(const std::string& path);

struct EmulatorOptions {
    std::string target_host = "127.0.0.1";
    std::uint16_t target_port = 5010;
    CycleSpec cycle = default_cycle();
    double rate_hz = 10.0;
    bool pedestrian = false;
    // Invoked right before the first datagram of each state goes out.
    std::function<void(const TransitionRecord&)> on_transition;
};

struct EmulatorReport {
    std::uint64_t packets_sent = 0;
    std::uint64_t transitions = 0;
    std::uint64_t send_errors = 0;  // logged and retried on the next tick
};

// Sends encode_spat_packet datagrams at rate_hz, advancing through the cycle
// by packet count, until the duration elapses or *stop becomes true.
// Blocking; run it on its own thread when concurrency is needed.
EmulatorReport emulate_controller(const EmulatorOptions& opts,
                                  std::chrono::milliseconds duration,
                                  const std::atomic<bool>* stop = nullptr);

}  // namespace cvkit::spat
