#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ncstream/metrics.hpp"
#include "ncstream/scenario.hpp"

namespace ncstream {

// Per-sender snapshot of which generations in the decoding region a node has
// recovered; piggybacked on every delivered packet. A neighbor we never heard
// from is assumed to need everything.
struct DecodingMap {
    int64_t first = -1;  // generation index of bit 0; -1 = never received
    uint32_t len = 0;
    uint64_t bits = 0;  // bit g-first set = generation recovered

    bool needs(uint64_t gen) const {
        if (first < 0) return true;                       // unknown peer
        if (gen < static_cast<uint64_t>(first)) return false;  // playback passed it
        const uint64_t off = gen - static_cast<uint64_t>(first);
        if (off >= len) return true;  // newer than the snapshot
        return ((bits >> off) & 1u) == 0;
    }
};

// One generation of a node's decoding region as seen by the scheduler.
struct GenCandidate {
    uint64_t gen = 0;
    bool flagged_polluted = false;  // own pollution vector bit (or dropped)
    size_t rank = 0;
    bool has_packets = false;
};

// Generations eligible for a transmission to the neighbor, ordered by
// proximity to the playout deadline (earliest generation first): the
// neighbor still needs them, the sender has not flagged them polluted, and
// the sender's rank reached m_r.
std::vector<uint64_t> suitable_generations(std::span<const GenCandidate> region,
                                           const DecodingMap& neighbor_map, int m_r);

// Deterministic discrete-event run of the push overlay under the configured
// attack; time advances in integer microseconds, ties break on (kind, node,
// insertion order), so a (config, seed) pair fixes the whole trace.
metrics::MetricsReport run_scenario(const ScenarioConfig& cfg);

}  // namespace ncstream
