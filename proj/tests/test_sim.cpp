#include "doctest.h"

#include <cmath>

#include "ncstream/sim.hpp"

using namespace ncstream;

namespace {

// Desk-scale template: paper bandwidth ratios (B_p/B_v = 1.5, two server
// packets per node per second) with B_v scaled down so derived blocks stay
// small and runs stay fast.
ScenarioConfig small_cfg(int N, double duration_s) {
    ScenarioConfig cfg;
    cfg.N = N;
    cfg.N_m = 0;
    cfg.N_s = 15;
    cfg.k = 25;
    cfg.block_size = 0;
    cfg.B_v = 51'200;
    cfg.B_p = 76'800;               // 1.5 * B_v
    cfg.B_s = 2.0 * N * 1'024;      // two packet times per node per second
    cfg.C_t = 1.0;
    cfg.t_b = 5.0;
    cfg.duration = duration_s;
    cfg.attack_start = 0;
    cfg.attack_end = 0;
    cfg.p_poll = 0.0;
    cfg.seed = 1;
    return cfg;
}

}  // namespace

TEST_CASE("decoding map semantics") {
    DecodingMap unknown;
    CHECK(unknown.needs(0));
    CHECK(unknown.needs(17));

    DecodingMap m;
    m.first = 10;
    m.len = 4;
    m.bits = 0b0101;  // gens 10 and 12 recovered
    CHECK_FALSE(m.needs(9));   // playback passed
    CHECK_FALSE(m.needs(10));  // recovered
    CHECK(m.needs(11));
    CHECK_FALSE(m.needs(12));
    CHECK(m.needs(13));
    CHECK(m.needs(14));  // newer than the snapshot
}

TEST_CASE("suitable generations: exclusions and deadline ordering") {
    DecodingMap neighbor;
    neighbor.first = 5;
    neighbor.len = 4;
    neighbor.bits = 0b0010;  // gen 6 recovered

    std::vector<GenCandidate> region{
        {8, false, 3, true},   // fine, later deadline
        {5, false, 2, true},   // fine, earliest deadline
        {6, false, 5, true},   // neighbor already has it
        {7, true, 5, true},    // own pollution flag set
    };
    const auto got = suitable_generations(region, neighbor, 2);
    REQUIRE(got.size() == 2);
    CHECK(got[0] == 5);  // closest to the playout deadline first
    CHECK(got[1] == 8);

    // m_r gate: rank 1 < 2 excludes; empty buffer excludes.
    std::vector<GenCandidate> low{{5, false, 1, true}, {8, false, 4, false}};
    CHECK(suitable_generations(low, neighbor, 2).empty());

    // Neighbor with everything recovered: nothing suitable.
    DecodingMap full;
    full.first = 5;
    full.len = 4;
    full.bits = 0b1111;
    CHECK(suitable_generations(region, full, 1).empty());
}

TEST_CASE("clean overprovisioned run reaches CI 1.0") {
    const auto report = run_scenario(small_cfg(60, 30));
    REQUIRE(!report.ci_per_generation.empty());
    CHECK(report.ci_overall == 1.0);
    for (const auto& g : report.ci_per_generation) CHECK(g.ci == 1.0);
    CHECK(report.eps_p == 0.0);
    CHECK(report.packets_forged == 0);
    CHECK(report.eps_c >= 0.0);
    CHECK(report.detections == 0);
}

TEST_CASE("whole-run bandwidth conservation") {
    auto cfg = small_cfg(60, 30);
    const auto report = run_scenario(cfg);
    const double packet_bits = 8.0 * cfg.packet_block_bytes();
    const double peer_budget = cfg.N * (cfg.duration * cfg.B_p / packet_bits + 1);
    const double server_budget = cfg.duration * cfg.B_s / packet_bits + 1;
    CHECK(static_cast<double>(report.packets_sent + report.packets_forged) <= peer_budget);
    CHECK(static_cast<double>(report.server_packets) <= server_budget);
}

TEST_CASE("identical config and seed reproduce the identical report") {
    auto cfg = small_cfg(60, 25);
    cfg.N_m = 2;
    cfg.p_poll = 0.05;
    cfg.attack_start = 8;
    cfg.attack_end = 16;
    const auto a = run_scenario(cfg);
    const auto b = run_scenario(cfg);
    CHECK(a.trace_hash == b.trace_hash);
    CHECK(a.ci_overall == b.ci_overall);
    CHECK(a.ci_attack_window == b.ci_attack_window);
    CHECK(a.eps_c == b.eps_c);
    CHECK(a.eps_p == b.eps_p);
    CHECK(a.packets_sent == b.packets_sent);
    CHECK(a.packets_forged == b.packets_forged);
    CHECK(a.detections == b.detections);
    REQUIRE(a.ci_per_generation.size() == b.ci_per_generation.size());
    for (size_t i = 0; i < a.ci_per_generation.size(); ++i)
        CHECK(a.ci_per_generation[i].ci == b.ci_per_generation[i].ci);
    REQUIRE(a.p_tp.size() == b.p_tp.size());
    for (size_t i = 0; i < a.p_tp.size(); ++i) {
        CHECK(a.p_tp[i].count == b.p_tp[i].count);
        CHECK(a.p_tp[i].tainted == b.p_tp[i].tainted);
    }

    auto other = cfg;
    other.seed = cfg.seed + 1;
    const auto c = run_scenario(other);
    CHECK(a.trace_hash != c.trace_hash);
}

TEST_CASE("neighbor refresh keeps a clean run healthy") {
    auto cfg = small_cfg(60, 25);
    cfg.neighbor_refresh_period = 5.0;
    const auto report = run_scenario(cfg);
    CHECK(report.ci_overall == 1.0);
}

TEST_CASE("an attack without detection pollutes the stream") {
    auto cfg = small_cfg(120, 40);
    cfg.N_m = 3;
    cfg.k = 50;
    cfg.detector = DetectorKind::None;
    cfg.p_poll = 0.02;
    cfg.attack_start = 10;
    cfg.attack_end = 30;
    const auto report = run_scenario(cfg);
    CHECK(report.packets_forged > 0);
    CHECK(report.eps_p > 0.0);
    CHECK(report.ci_attack_window < 1.0);
    // Generations judged before the attack touches anything stay perfect.
    for (const auto& g : report.ci_per_generation)
        if (g.deadline_s < cfg.attack_start) CHECK(g.ci == 1.0);
}

TEST_CASE("early detection never relays more pollution than no detection") {
    // Pooled over seeds, the per-index transmitted-pollution probability with
    // the OFG detector stays at or below the detector-free curve.
    auto base = small_cfg(100, 30);
    base.N_m = 3;
    base.k = 25;
    base.p_poll = 0.05;
    base.attack_start = 5;
    base.attack_end = 25;

    std::vector<metrics::PtpBucket> ofg, none;
    auto pool = [](std::vector<metrics::PtpBucket>& into,
                   const std::vector<metrics::PtpBucket>& from) {
        if (into.size() < from.size()) into.resize(from.size());
        for (size_t i = 0; i < from.size(); ++i) {
            into[i].count += from[i].count;
            into[i].tainted += from[i].tainted;
        }
    };
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        auto cfg = base;
        cfg.seed = seed;
        cfg.detector = DetectorKind::OFG;
        pool(ofg, run_scenario(cfg).p_tp);
        cfg.detector = DetectorKind::None;
        pool(none, run_scenario(cfg).p_tp);
    }
    REQUIRE(!ofg.empty());
    REQUIRE(!none.empty());
    const uint64_t min_count = std::max<uint64_t>(100, ofg[0].count / 50);
    size_t compared = 0;
    for (size_t i = 3; i < std::min(ofg.size(), none.size()); ++i) {
        if (ofg[i].count < min_count || none[i].count < min_count) break;
        CHECK(ofg[i].probability() <= none[i].probability() + 1e-12);
        ++compared;
    }
    CHECK(compared > 10);
}
