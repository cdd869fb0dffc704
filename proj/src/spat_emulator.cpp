#include "cvkit/spat/emulator.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace cvkit::spat {

namespace {

IntersectionState pair_green(int a, int b) {
    IntersectionState s;
    s.phases[static_cast<std::size_t>(a - 1)] = PhaseColor::Green;
    s.phases[static_cast<std::size_t>(b - 1)] = PhaseColor::Green;
    return s;
}

IntersectionState pair_yellow(int a, int b) {
    IntersectionState s;
    s.phases[static_cast<std::size_t>(a - 1)] = PhaseColor::Yellow;
    s.phases[static_cast<std::size_t>(b - 1)] = PhaseColor::Yellow;
    return s;
}

}  // namespace

CycleSpec default_cycle(int green_dwell_ds, int yellow_dwell_ds) {
    CycleSpec cycle;
    const int pairs[4][2] = {{1, 5}, {2, 6}, {3, 7}, {4, 8}};
    for (const auto& p : pairs) {
        cycle.push_back({pair_green(p[0], p[1]), green_dwell_ds});
        cycle.push_back({pair_yellow(p[0], p[1]), yellow_dwell_ds});
    }
    return cycle;
}

std::size_t cycle_state_at_packet(const CycleSpec& cycle, std::uint64_t packet_index) {
    std::uint64_t total = 0;
    for (const auto& phase : cycle) total += static_cast<std::uint64_t>(phase.dwell_ds);
    std::uint64_t p = packet_index % total;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (p < static_cast<std::uint64_t>(cycle[i].dwell_ds)) return i;
        p -= static_cast<std::uint64_t>(cycle[i].dwell_ds);
    }
    return 0;  // unreachable for a well-formed cycle
}

CycleSpec cycle_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("cycle file is not valid JSON: ") + e.what());
    }
    if (!doc.is_array() || doc.empty()) {
        throw Error("cycle file must be a non-empty JSON array");
    }
    CycleSpec cycle;
    for (const auto& entry : doc) {
        if (!entry.contains("phases") || !entry.contains("dwell_ds")) {
            throw Error("cycle entry needs 'phases' and 'dwell_ds'");
        }
        const auto& phases = entry["phases"];
        if (!phases.is_array() || phases.size() != kPhaseCount) {
            throw Error("cycle entry 'phases' must list exactly 8 colors");
        }
        CyclePhase cp;
        for (int i = 0; i < kPhaseCount; ++i) {
            cp.state.phases[static_cast<std::size_t>(i)] =
                phase_color_from_string(phases[static_cast<std::size_t>(i)].get<std::string>());
        }
        cp.dwell_ds = entry["dwell_ds"].get<int>();
        if (cp.dwell_ds < 1) throw Error("cycle entry dwell_ds must be >= 1");
        cycle.push_back(std::move(cp));
    }
    return cycle;
}

std::string cycle_to_json(const CycleSpec& cycle) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& phase : cycle) {
        nlohmann::ordered_json entry;
        nlohmann::ordered_json colors = nlohmann::ordered_json::array();
        for (const PhaseColor c : phase.state.phases) colors.push_back(std::string(to_string(c)));
        entry["phases"] = std::move(colors);
        entry["dwell_ds"] = phase.dwell_ds;
        doc.push_back(std::move(entry));
    }
    return doc.dump(2);
}

std::string state_letters(const IntersectionState& s) {
    std::string out(kPhaseCount, 'R');
    for (int i = 0; i < kPhaseCount; ++i) {
        switch (s.phases[static_cast<std::size_t>(i)]) {
            case PhaseColor::Red: out[static_cast<std::size_t>(i)] = 'R'; break;
            case PhaseColor::Yellow: out[static_cast<std::size_t>(i)] = 'Y'; break;
            case PhaseColor::Green: out[static_cast<std::size_t>(i)] = 'G'; break;
        }
    }
    return out;
}

IntersectionState state_from_letters(std::string_view letters) {
    if (letters.size() != kPhaseCount) {
        throw Error("state letters must be exactly 8 characters");
    }
    IntersectionState s;
    for (int i = 0; i < kPhaseCount; ++i) {
        switch (letters[static_cast<std::size_t>(i)]) {
            case 'R': s.phases[static_cast<std::size_t>(i)] = PhaseColor::Red; break;
            case 'Y': s.phases[static_cast<std::size_t>(i)] = PhaseColor::Yellow; break;
            case 'G': s.phases[static_cast<std::size_t>(i)] = PhaseColor::Green; break;
            default: throw Error("state letters must be R, Y, or G");
        }
    }
    return s;
}

void append_transition(std::ostream& out, const TransitionRecord& rec) {
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                        rec.send_time.time_since_epoch())
                        .count();
    out << rec.packet_index << ' ' << ns << ' ' << state_letters(rec.state) << '\n';
    out.flush();
}

std::vector<TransitionRecord> parse_transition_log(std::string_view text) {
    std::vector<TransitionRecord> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        TransitionRecord rec;
        std::uint64_t idx = 0;
        std::int64_t ns = 0;
        std::string letters;
        if (!(ls >> idx >> ns >> letters)) {
            throw Error("malformed transition log line: " + line);
        }
        rec.packet_index = idx;
        rec.send_time =
            std::chrono::steady_clock::time_point(std::chrono::nanoseconds(ns));
        rec.state = state_from_letters(letters);
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<TransitionRecord> read_transition_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open transition log: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_transition_log(ss.str());
}

EmulatorReport emulate_controller(const EmulatorOptions& opts,
                                  std::chrono::milliseconds duration,
                                  const std::atomic<bool>* stop) {
    if (opts.cycle.empty()) throw Error("emulator cycle must not be empty");
    if (!(opts.rate_hz > 0.0)) throw Error("emulator rate must be positive");

    const int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd < 0) throw Error("socket() failed: " + std::string(std::strerror(errno)));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(opts.target_port);
    if (::inet_pton(AF_INET, opts.target_host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw Error("invalid emulator target address: " + opts.target_host);
    }

    // Pre-encode one datagram per cycle state; the payload never varies
    // within a dwell.
    std::vector<std::vector<std::uint8_t>> payloads;
    payloads.reserve(opts.cycle.size());
    for (const auto& phase : opts.cycle) {
        payloads.push_back(encode_spat_packet(phase.state, opts.pedestrian));
    }

    EmulatorReport report;
    const auto start = std::chrono::steady_clock::now();
    const auto tick = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / opts.rate_hz));
    const std::uint64_t total_packets = static_cast<std::uint64_t>(
        std::llround(opts.rate_hz * std::chrono::duration<double>(duration).count()));

    std::size_t prev_state = opts.cycle.size();  // sentinel: no state yet
    for (std::uint64_t i = 0; i < total_packets; ++i) {
        if (stop != nullptr && stop->load()) break;
        std::this_thread::sleep_until(start + i * tick);

        const std::size_t state_idx = cycle_state_at_packet(opts.cycle, i);
        if (state_idx != prev_state) {
            prev_state = state_idx;
            ++report.transitions;
            if (opts.on_transition) {
                opts.on_transition(TransitionRecord{
                    i, opts.cycle[state_idx].state, std::chrono::steady_clock::now()});
            }
        }

        const auto& payload = payloads[state_idx];
        const ssize_t sent =
            ::sendto(fd, payload.data(), payload.size(), 0,
                     reinterpret_cast<const sockaddr*>(&addr), sizeof(addr));
        if (sent < 0) {
            ++report.send_errors;
            std::cerr << "emulator: send failed (" << std::strerror(errno)
                      << "), retrying next tick\n";
        } else {
            ++report.packets_sent;
        }
    }

    ::close(fd);
    return report;
}

}  // namespace cvkit::spat
