#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "ncstream/packet.hpp"
#include "ncstream/scenario.hpp"

namespace ncstream::metrics {

struct PtpBucket {
    uint64_t count = 0;
    uint64_t tainted = 0;

    double probability() const {
        return count == 0 ? 0.0 : static_cast<double>(tainted) / static_cast<double>(count);
    }
};

struct GenerationCi {
    uint64_t generation = 0;
    double deadline_s = 0;
    double ci = 0;
};

struct MetricsReport {
    std::vector<GenerationCi> ci_per_generation;
    double ci_overall = 0;
    double ci_attack_window = 0;

    // p_tp[i] pools the (i+1)-th transmission of every honest (node,
    // generation) pair; tainted/count is the per-index pollution probability.
    std::vector<PtpBucket> p_tp;

    double eps_c = 0;      // mean (k'-k)/k over pairs that reached full rank
    double eps_p = 0;      // mean r_p/k over judged honest pairs
    double eps_total = 0;  // eps_c + eps_p

    uint64_t packets_sent = 0;    // honest recombinations delivered
    uint64_t packets_forged = 0;  // forged packets delivered
    uint64_t detections = 0;      // generation-level pollution detections
    uint64_t server_packets = 0;

    uint64_t trace_hash = 0;  // order-sensitive hash of the event trace

    std::string strategy_name;
    std::string detector_name;
    int k = 0;
};

// Ground-truth accounting over one run. The simulator core reports events
// here; this is the only component (besides tests) that reads packet taint.
class MetricsCollector {
public:
    explicit MetricsCollector(const ScenarioConfig& cfg);

    void on_honest_receive(uint32_t node, uint64_t gen, const CodedPacket& pkt);
    void on_honest_transmit(uint32_t node, uint64_t gen, const CodedPacket& pkt);
    void on_forged_sent() { ++report_.packets_forged; }
    void on_server_packet() { ++report_.server_packets; }
    void on_detection() { ++report_.detections; }

    // Per-node verdict at the playout deadline; reached_full_rank and
    // k_prime come from the node's decoder.
    void judge_node(uint64_t gen, uint32_t node, bool reached_full_rank, size_t k_prime);
    void close_generation(uint64_t gen, double deadline_s);

    void set_trace_hash(uint64_t h) { report_.trace_hash = h; }

    MetricsReport finalize();

private:
    struct PairCell {
        uint32_t r_p = 0;       // tainted packets received before the deadline
        uint32_t tx_count = 0;  // transmissions made for this generation
        bool any_taint = false;
    };

    PairCell& cell(uint32_t node, uint64_t gen);

    ScenarioConfig cfg_;
    MetricsReport report_;

    // Sliding per-generation window of per-node cells, indexed by gen.
    std::deque<std::vector<PairCell>> window_;
    uint64_t window_base_ = 0;

    uint64_t judged_success_ = 0;
    uint64_t judged_honest_ = 0;

    double eps_c_sum_ = 0;
    uint64_t eps_c_n_ = 0;
    double eps_p_sum_ = 0;
    uint64_t eps_p_n_ = 0;
};

// Stable-schema CSV outputs with fixed 6-decimal formatting:
//   ci_timeseries.csv  generation_index, deadline_s, ci
//   p_tp.csv           tx_index, probability, strategy, detector
//   overhead.csv       k, strategy, eps_c, eps_p, eps_total
void export_csv(const MetricsReport& report, const std::string& out_dir);

std::string format6(double v);

}  // namespace ncstream::metrics
