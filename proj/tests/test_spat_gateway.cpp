#include <doctest.h>

#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "cvkit/spat/emulator.hpp"
#include "cvkit/spat/gateway.hpp"
#include "cvkit/spat/watch.hpp"

using namespace cvkit::spat;
using namespace std::chrono_literals;

namespace {

std::vector<std::uint8_t> packet_for(const IntersectionState& s) {
    return encode_spat_packet(s, false);
}

IntersectionState single_green(int phase) {
    IntersectionState s;
    s.phases[static_cast<std::size_t>(phase - 1)] = PhaseColor::Green;
    return s;
}

auto now() { return std::chrono::steady_clock::now(); }

}  // namespace

TEST_SUITE("spat_gateway") {

TEST_CASE("sentinel snapshot before any packet") {
    Gateway gw;
    const GatewaySnapshot snap = gw.current_snapshot();
    CHECK(snap.sequence == 0);
    CHECK(snap.state == all_red_state());
    CHECK(snap.packets_seen == 0);
    CHECK(snap.changes_seen == 0);
}

TEST_CASE("identical consecutive packets: one Changed then Unchanged") {
    Gateway gw;
    const auto pkt = packet_for(single_green(1));
    const IngestResult first = gw.ingest_datagram(pkt, now());
    CHECK(first.outcome == IngestOutcome::Changed);
    CHECK(first.snapshot.sequence == 1);

    const IngestResult second = gw.ingest_datagram(pkt, now());
    CHECK(second.outcome == IngestOutcome::Unchanged);
    CHECK(second.snapshot.sequence == 1);
    CHECK(second.snapshot.packets_seen == 2);
    CHECK(second.snapshot.changes_seen == 1);
}

TEST_CASE("all-red first packet matches the sentinel and is not a change") {
    Gateway gw;
    const IngestResult r = gw.ingest_datagram(packet_for(all_red_state()), now());
    CHECK(r.outcome == IngestOutcome::Unchanged);
    CHECK(r.snapshot.sequence == 0);
    CHECK(r.snapshot.packets_seen == 1);
}

TEST_CASE("bad length is rejected without touching state") {
    Gateway gw;
    gw.ingest_datagram(packet_for(single_green(2)), now());
    const std::vector<std::uint8_t> bad(243, 0);
    const IngestResult r = gw.ingest_datagram(bad, now());
    CHECK(r.outcome == IngestOutcome::Rejected);
    CHECK(!r.error.empty());
    CHECK(r.snapshot.sequence == 1);
    CHECK(r.snapshot.packets_seen == 1);  // rejected datagrams are not packets seen
    CHECK(gw.rejected_count() == 1);
}

TEST_CASE("conflicting bits are rejected") {
    Gateway gw;
    std::vector<std::uint8_t> pkt(kFrameBytes, 0);
    pkt[kGreenOffset] = 0x01;
    pkt[kYellowOffset] = 0x01;
    const IngestResult r = gw.ingest_datagram(pkt, now());
    CHECK(r.outcome == IngestOutcome::Rejected);
    CHECK(gw.rejected_count() == 1);
}

TEST_CASE("sequence counts distinct states") {
    Gateway gw;
    for (int k = 1; k <= 5; ++k) {
        gw.ingest_datagram(packet_for(single_green(k)), now());
    }
    const GatewaySnapshot snap = gw.current_snapshot();
    CHECK(snap.sequence == 5);
    CHECK(snap.changes_seen == 5);
    CHECK(snap.packets_seen == 5);
    CHECK(snap.state == single_green(5));
}

TEST_CASE("wait_for_change returns immediately when already ahead") {
    Gateway gw;
    gw.ingest_datagram(packet_for(single_green(1)), now());
    const auto t0 = now();
    const GatewaySnapshot snap = gw.wait_for_change(0, 2000ms);
    CHECK(snap.sequence == 1);
    CHECK(now() - t0 < 500ms);
}

TEST_CASE("wait_for_change blocks until a change arrives") {
    Gateway gw;
    std::thread publisher([&] {
        std::this_thread::sleep_for(150ms);
        gw.ingest_datagram(packet_for(single_green(3)), now());
    });
    const auto t0 = now();
    const GatewaySnapshot snap = gw.wait_for_change(0, 5000ms);
    const auto waited = now() - t0;
    publisher.join();
    CHECK(snap.sequence == 1);
    CHECK(waited >= 100ms);
    CHECK(waited < 3000ms);
}

TEST_CASE("wait_for_change times out and returns the unchanged snapshot") {
    Gateway gw;
    const auto t0 = now();
    const GatewaySnapshot snap = gw.wait_for_change(0, 200ms);
    CHECK(now() - t0 >= 190ms);
    CHECK(snap.sequence == 0);
}

TEST_CASE("snapshot JSON carries the contract fields") {
    Gateway gw;
    gw.ingest_datagram(packet_for(single_green(2)), now());
    const auto doc = nlohmann::json::parse(snapshot_to_json(gw.current_snapshot()));
    CHECK(doc["sequence"] == 1);
    CHECK(doc["packets_seen"] == 1);
    CHECK(doc["changes_seen"] == 1);
    REQUIRE(doc["phases"].is_array());
    REQUIRE(doc["phases"].size() == 8);
    CHECK(doc["phases"][1] == "green");
    CHECK(doc["phases"][0] == "red");
    CHECK(doc["wall_time"].is_string());

    const auto health = nlohmann::json::parse(health_to_json(gw.current_snapshot(), 7));
    CHECK(health["rejected"] == 7);
    CHECK(health["packets_seen"] == 1);
}

TEST_CASE("concurrent readers always see consistent snapshots") {
    Gateway gw;
    // Writer publishes single_green(1..8) round-robin; sequence k maps to
    // state single_green((k-1) % 8 + 1).
    std::atomic<bool> done{false};
    std::vector<std::thread> readers;
    std::atomic<int> violations{0};
    for (int r = 0; r < 10; ++r) {
        readers.emplace_back([&] {
            std::uint64_t last_seq = 0;
            while (!done) {
                const GatewaySnapshot snap = gw.current_snapshot();
                if (snap.sequence < last_seq) ++violations;
                last_seq = snap.sequence;
                if (snap.sequence == 0) {
                    if (!(snap.state == all_red_state())) ++violations;
                } else {
                    const int phase = static_cast<int>((snap.sequence - 1) % 8) + 1;
                    if (!(snap.state == single_green(phase))) ++violations;
                }
                if (snap.changes_seen > snap.packets_seen) ++violations;
            }
        });
    }

    for (int k = 0; k < 4000; ++k) {
        gw.ingest_datagram(packet_for(single_green(k % 8 + 1)), now());
    }
    done = true;
    for (auto& t : readers) t.join();
    CHECK(violations == 0);
}

TEST_CASE("in-process random garbage never crashes ingest") {
    Gateway gw;
    std::mt19937_64 rng(123);
    std::uint64_t accepted = 0;
    for (int i = 0; i < 10000; ++i) {
        const std::size_t len = rng() % 300;
        std::vector<std::uint8_t> bytes(len);
        for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
        const IngestResult r = gw.ingest_datagram(bytes, now());
        if (r.outcome != IngestOutcome::Rejected) ++accepted;
    }
    const GatewaySnapshot snap = gw.current_snapshot();
    CHECK(snap.packets_seen == accepted);
    CHECK(gw.rejected_count() == 10000 - accepted);
    CHECK(snap.changes_seen <= snap.packets_seen);
}

TEST_CASE("default cycle has eight distinct states in pair order") {
    const CycleSpec cycle = default_cycle();
    REQUIRE(cycle.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = i + 1; j < 8; ++j) {
            CHECK_FALSE(cycle[i].state == cycle[j].state);
        }
    }
    CHECK(cycle[0].state.phases[0] == PhaseColor::Green);  // phase 1
    CHECK(cycle[0].state.phases[4] == PhaseColor::Green);  // phase 5
    CHECK(cycle[1].state.phases[0] == PhaseColor::Yellow);
    CHECK(cycle[6].state.phases[3] == PhaseColor::Green);  // phase 4
    CHECK(cycle[6].state.phases[7] == PhaseColor::Green);  // phase 8
    CHECK(cycle[0].dwell_ds == 30);
    CHECK(cycle[1].dwell_ds == 10);
}

TEST_CASE("cycle_state_at_packet holds each state for its dwell") {
    const CycleSpec cycle = default_cycle(30, 10);
    std::size_t prev = cycle_state_at_packet(cycle, 0);
    std::uint64_t run = 1;
    std::vector<std::uint64_t> runs;
    for (std::uint64_t i = 1; i < 160; ++i) {  // one full cycle
        const std::size_t idx = cycle_state_at_packet(cycle, i);
        if (idx == prev) {
            ++run;
        } else {
            runs.push_back(run);
            run = 1;
            prev = idx;
        }
    }
    runs.push_back(run);
    REQUIRE(runs.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(runs[i] == static_cast<std::uint64_t>(cycle[i].dwell_ds));
    }
}

TEST_CASE("cycle JSON round-trips") {
    const CycleSpec cycle = default_cycle(3, 1);
    const CycleSpec parsed = cycle_from_json(cycle_to_json(cycle));
    REQUIRE(parsed.size() == cycle.size());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        CHECK(parsed[i].state == cycle[i].state);
        CHECK(parsed[i].dwell_ds == cycle[i].dwell_ds);
    }
    CHECK_THROWS_AS(cycle_from_json("[]"), cvkit::Error);
    CHECK_THROWS_AS(cycle_from_json("not json"), cvkit::Error);
}

TEST_CASE("transition log lines round-trip") {
    TransitionRecord rec;
    rec.packet_index = 42;
    rec.state = single_green(4);
    rec.send_time = now();
    std::ostringstream out;
    append_transition(out, rec);
    const auto parsed = parse_transition_log(out.str());
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].packet_index == 42);
    CHECK(parsed[0].state == rec.state);
    CHECK(parsed[0].send_time == rec.send_time);
    CHECK_THROWS_AS(parse_transition_log("bogus line"), cvkit::Error);
}

TEST_CASE("state letters round-trip") {
    const IntersectionState s = single_green(3);
    CHECK(state_letters(s) == "RRGRRRRR");
    CHECK(state_from_letters("RRGRRRRR") == s);
    CHECK_THROWS_AS(state_from_letters("RRG"), cvkit::Error);
    CHECK_THROWS_AS(state_from_letters("XXXXXXXX"), cvkit::Error);
}

TEST_CASE("emulator sends at the configured rate with per-dwell runs") {
    Gateway gw;
    UdpIngestServer udp(gw, "127.0.0.1", 0);
    udp.start();

    std::mutex log_mu;
    std::vector<TransitionRecord> log;
    EmulatorOptions opts;
    opts.target_host = "127.0.0.1";
    opts.target_port = udp.port();
    opts.cycle = default_cycle(2, 2);  // 200 ms per state
    opts.rate_hz = 10.0;
    opts.on_transition = [&](const TransitionRecord& rec) {
        std::lock_guard lock(log_mu);
        log.push_back(rec);
    };

    const EmulatorReport report = emulate_controller(opts, 2000ms);
    CHECK(report.packets_sent == 20);
    CHECK(report.send_errors == 0);
    CHECK(report.transitions == 10);  // every 2 packets

    // Transition stamps spaced by dwell x 100 ms, within scheduler jitter.
    REQUIRE(log.size() == 10);
    for (std::size_t i = 1; i < log.size(); ++i) {
        const double gap_ms =
            std::chrono::duration<double, std::milli>(log[i].send_time -
                                                      log[i - 1].send_time)
                .count();
        CHECK(gap_ms > 200.0 - 20.0);
        CHECK(gap_ms < 200.0 + 20.0);
    }

    std::this_thread::sleep_for(100ms);  // let the listener drain
    const GatewaySnapshot snap = gw.current_snapshot();
    CHECK(snap.packets_seen == 20);
    CHECK(snap.changes_seen == 10);
    udp.stop();
}

TEST_CASE("http server: /spat, long-poll, /health") {
    Gateway gw;
    HttpGatewayServer http(gw, "127.0.0.1", 0);
    http.start();
    httplib::Client cli("127.0.0.1", http.port());
    cli.set_read_timeout(std::chrono::seconds(8));

    auto res = cli.Get("/spat");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "application/json");
    auto doc = nlohmann::json::parse(res->body);
    CHECK(doc["sequence"] == 0);

    // Long-poll released by a change.
    std::thread publisher([&] {
        std::this_thread::sleep_for(200ms);
        gw.ingest_datagram(packet_for(single_green(5)), now());
    });
    const auto t0 = now();
    auto poll = cli.Get("/spat?since=0");
    const auto waited = now() - t0;
    publisher.join();
    REQUIRE(poll);
    auto poll_doc = nlohmann::json::parse(poll->body);
    CHECK(poll_doc["sequence"] == 1);
    CHECK(waited >= 150ms);
    CHECK(waited < 4000ms);

    // since already behind: immediate.
    auto quick = cli.Get("/spat?since=0");
    REQUIRE(quick);
    CHECK(nlohmann::json::parse(quick->body)["sequence"] == 1);

    auto bad = cli.Get("/spat?since=notanumber");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    auto health = cli.Get("/health");
    REQUIRE(health);
    CHECK(nlohmann::json::parse(health->body)["packets_seen"] == 1);
    http.stop();
}

TEST_CASE("latency stats use nearest-rank percentiles") {
    const LatencyStats stats = latency_stats({5.0, 1.0, 3.0, 2.0, 4.0});
    CHECK(stats.samples == 5);
    CHECK(stats.median_ms == 3.0);
    CHECK(stats.p95_ms == 5.0);
    CHECK(stats.max_ms == 5.0);
    CHECK(stats.median_ms <= stats.p95_ms);
    CHECK(stats.p95_ms <= stats.max_ms);

    const LatencyStats one = latency_stats({7.5});
    CHECK(one.samples == 1);
    CHECK(one.median_ms == 7.5);
    CHECK(one.max_ms == 7.5);
}

TEST_CASE("watch client measures emulator-to-client latency end to end") {
    Gateway gw;
    UdpIngestServer udp(gw, "127.0.0.1", 0);
    udp.start();
    HttpGatewayServer http(gw, "127.0.0.1", 0);
    http.start();

    std::mutex log_mu;
    std::vector<TransitionRecord> log;
    EmulatorOptions opts;
    opts.target_port = udp.port();
    opts.cycle = default_cycle(2, 2);
    opts.on_transition = [&](const TransitionRecord& rec) {
        std::lock_guard lock(log_mu);
        log.push_back(rec);
    };
    std::thread emu([&] { emulate_controller(opts, 3000ms); });

    WatchOptions wopts;
    wopts.base_url = "http://127.0.0.1:" + std::to_string(http.port());
    wopts.duration = 2500ms;
    wopts.transitions = [&] {
        std::lock_guard lock(log_mu);
        return log;
    };
    const LatencyStats stats = watch_client(wopts);
    emu.join();

    CHECK(stats.samples >= 5);
    CHECK(stats.median_ms < 100.0);
    CHECK(stats.median_ms <= stats.p95_ms);
    CHECK(stats.p95_ms <= stats.max_ms);

    udp.stop();
    http.stop();
}

TEST_CASE("watch client with no gateway is unreachable") {
    WatchOptions wopts;
    wopts.base_url = "http://127.0.0.1:1";  // nothing listens there
    wopts.duration = 500ms;
    CHECK_THROWS_AS(watch_client(wopts), Unreachable);
}

TEST_CASE("watch client with no changes reports the empty run") {
    Gateway gw;
    HttpGatewayServer http(gw, "127.0.0.1", 0);
    http.start();
    WatchOptions wopts;
    wopts.base_url = "http://127.0.0.1:" + std::to_string(http.port());
    wopts.duration = 300ms;
    wopts.transitions = [] { return std::vector<TransitionRecord>{}; };
    CHECK_THROWS_AS(watch_client(wopts), NoChangesObserved);
    http.stop();
}

}  // TEST_SUITE
