#pragma once

#include <cstdint>
#include <vector>

#include "ncstream/rng.hpp"

namespace ncstream {

// Undirected peer mesh with bounded degree, assembled through a tracker
// model: joiners handshake random already-joined candidates, then the tracker
// links spare capacity until the mesh is (near-)regular. Malicious roles are
// a uniform subset of the nodes, independent of the structure, so any fixed
// neighborhood's malicious count is hypergeometric.
struct Topology {
    int max_degree = 0;  // N_s
    std::vector<std::vector<uint32_t>> adj;
    std::vector<uint8_t> malicious;

    size_t size() const { return adj.size(); }
    int degree(uint32_t v) const { return static_cast<int>(adj[v].size()); }
    bool adjacent(uint32_t a, uint32_t b) const;
    bool connected() const;
    size_t edge_count() const;
};

Topology build_topology(int N, int N_m, int N_s, Rng& rng);

// One refresh pass: every node drops one random neighbor and asks the tracker
// for a replacement with spare capacity. Degree bounds are preserved.
void refresh_neighbors(Topology& topo, Rng& rng);

}  // namespace ncstream
