#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ncstream/metrics.hpp"

using namespace ncstream;
using namespace ncstream::metrics;

namespace {

ScenarioConfig tiny_cfg() {
    ScenarioConfig cfg;
    cfg.N = 3;
    cfg.N_m = 1;
    cfg.N_s = 2;
    cfg.k = 2;
    cfg.block_size = 2;
    cfg.attack_start = 0;
    cfg.attack_end = 10;
    cfg.duration = 30;
    return cfg;
}

CodedPacket clean_packet(Rng& rng) {
    Generation gen;
    gen.blocks = {{0x01, 0x02}, {0x03, 0x04}};
    return encode_source(gen, rng);
}

CodedPacket tainted_packet(Rng& rng) { return forge_packet(2, 2, rng); }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("hand-built 3-node trace: one forged packet relayed once") {
    // Node 0 is malicious (excluded from metrics); nodes 1 and 2 are honest.
    // Node 1 receives the forged packet plus two clean ones and reaches full
    // rank after 3 packets; node 2 receives one clean packet and one tainted
    // relay and never decodes.
    const auto cfg = tiny_cfg();
    MetricsCollector col(cfg);
    Rng rng(1);

    const CodedPacket forged = tainted_packet(rng);
    col.on_honest_receive(1, 0, forged);
    col.on_honest_receive(1, 0, clean_packet(rng));
    col.on_honest_receive(1, 0, clean_packet(rng));

    col.on_honest_transmit(1, 0, clean_packet(rng));  // tx index 1, clean
    std::vector<CodedPacket> relay_in{forged};
    BitVec sel(1);
    sel.set(0);
    const CodedPacket relay = combine(relay_in, sel);
    col.on_honest_transmit(1, 0, relay);  // tx index 2, tainted

    col.on_honest_receive(2, 0, clean_packet(rng));
    col.on_honest_receive(2, 0, relay);

    col.judge_node(0, 1, true, 3);   // full rank, k' = 3, but tainted -> fail
    col.judge_node(0, 2, false, 0);  // no full rank -> fail
    col.close_generation(0, 5.0);

    const MetricsReport r = col.finalize();
    // Hand enumeration: CI = 0/2; eps_c = (3-2)/2 over the one full-rank
    // pair; eps_p = mean(1/2, 1/2); p_tp(1) = 0/1, p_tp(2) = 1/1.
    CHECK(r.ci_per_generation.size() == 1);
    CHECK(r.ci_per_generation[0].ci == 0.0);
    CHECK(r.eps_c == doctest::Approx(0.5));
    CHECK(r.eps_p == doctest::Approx(0.5));
    CHECK(r.eps_total == doctest::Approx(1.0));
    REQUIRE(r.p_tp.size() == 2);
    CHECK(r.p_tp[0].count == 1);
    CHECK(r.p_tp[0].tainted == 0);
    CHECK(r.p_tp[1].count == 1);
    CHECK(r.p_tp[1].tainted == 1);
    CHECK(r.ci_attack_window == 0.0);  // deadline 5 inside [0,10)
}

TEST_CASE("success requires full rank and a taint-free receive history") {
    const auto cfg = tiny_cfg();
    MetricsCollector col(cfg);
    Rng rng(2);
    col.on_honest_receive(0, 0, clean_packet(rng));
    col.judge_node(0, 0, true, 2);  // clean full-rank pair: success, eps_c 0
    col.judge_node(0, 1, true, 2);
    col.close_generation(0, 5.0);
    const MetricsReport r = col.finalize();
    CHECK(r.ci_per_generation[0].ci == 1.0);
    CHECK(r.eps_c == 0.0);
    CHECK(r.eps_p == 0.0);
}

TEST_CASE("no forged packets anywhere means zero pollution metrics") {
    const auto cfg = tiny_cfg();
    MetricsCollector col(cfg);
    Rng rng(3);
    for (int g = 0; g < 3; ++g) {
        for (uint32_t node = 1; node <= 2; ++node) {
            col.on_honest_receive(node, g, clean_packet(rng));
            col.on_honest_transmit(node, g, clean_packet(rng));
            col.judge_node(g, node, true, 2);
        }
        col.close_generation(g, 5.0 + g);
    }
    const MetricsReport r = col.finalize();
    CHECK(r.eps_p == 0.0);
    for (const auto& bucket : r.p_tp) CHECK(bucket.tainted == 0);
    CHECK(r.ci_overall == 1.0);
}

TEST_CASE("attack-window CI averages only deadlines inside the window") {
    auto cfg = tiny_cfg();
    cfg.attack_start = 6.0;
    cfg.attack_end = 8.0;
    MetricsCollector col(cfg);
    for (int g = 0; g < 4; ++g) {
        // deadlines 5,6,7,8: only 6 and 7 are inside the window
        col.judge_node(g, 1, g % 2 == 0, g % 2 == 0 ? 2 : 0);
        col.close_generation(g, 5.0 + g);
    }
    const MetricsReport r = col.finalize();
    CHECK(r.ci_overall == doctest::Approx(0.5));
    CHECK(r.ci_attack_window == doctest::Approx(0.5));  // gens 1 (0) and 2 (1)
}

TEST_CASE("csv export writes the documented schema and reparses") {
    const auto cfg = tiny_cfg();
    MetricsCollector col(cfg);
    Rng rng(4);
    col.on_honest_transmit(1, 0, clean_packet(rng));
    col.judge_node(0, 1, true, 3);
    col.close_generation(0, 5.0);
    MetricsReport r = col.finalize();

    const auto dir = std::filesystem::temp_directory_path() / "ncstream_metrics_test";
    std::filesystem::remove_all(dir);
    export_csv(r, dir.string());

    const std::string ci = slurp(dir / "ci_timeseries.csv");
    CHECK(ci == "generation_index,deadline_s,ci\n0,5.000000,1.000000\n");
    const std::string ptp = slurp(dir / "p_tp.csv");
    CHECK(ptp == "tx_index,probability,strategy,detector\n1,0.000000,Reference,OFG\n");
    const std::string ov = slurp(dir / "overhead.csv");
    CHECK(ov == "k,strategy,eps_c,eps_p,eps_total\n2,Reference,0.500000,0.000000,0.500000\n");

    // Empty report: headers only.
    MetricsCollector col2(cfg);
    export_csv(col2.finalize(), dir.string());
    CHECK(slurp(dir / "ci_timeseries.csv") == "generation_index,deadline_s,ci\n");
    CHECK(slurp(dir / "p_tp.csv") == "tx_index,probability,strategy,detector\n");
    std::filesystem::remove_all(dir);
}

TEST_CASE("post-deadline receives are not counted") {
    const auto cfg = tiny_cfg();
    MetricsCollector col(cfg);
    Rng rng(5);
    col.judge_node(0, 1, false, 0);
    col.close_generation(0, 5.0);
    col.on_honest_receive(1, 0, tainted_packet(rng));  // late, ignored
    col.judge_node(1, 1, true, 2);
    col.close_generation(1, 6.0);
    const MetricsReport r = col.finalize();
    CHECK(r.eps_p == 0.0);
    CHECK(r.ci_per_generation[1].ci == 1.0);
}
