#include "ncstream/topology.hpp"

#include <algorithm>

#include "ncstream/errors.hpp"

namespace ncstream {

namespace {

void link(Topology& t, uint32_t a, uint32_t b) {
    t.adj[a].push_back(b);
    t.adj[b].push_back(a);
}

void unlink(Topology& t, uint32_t a, uint32_t b) {
    auto drop = [](std::vector<uint32_t>& v, uint32_t x) {
        auto it = std::find(v.begin(), v.end(), x);
        v.erase(it);
    };
    drop(t.adj[a], b);
    drop(t.adj[b], a);
}

}  // namespace

bool Topology::adjacent(uint32_t a, uint32_t b) const {
    const auto& v = adj[a];
    return std::find(v.begin(), v.end(), b) != v.end();
}

bool Topology::connected() const {
    if (adj.empty()) return true;
    std::vector<uint8_t> seen(adj.size(), 0);
    std::vector<uint32_t> stack{0};
    seen[0] = 1;
    size_t visited = 1;
    while (!stack.empty()) {
        const uint32_t v = stack.back();
        stack.pop_back();
        for (uint32_t u : adj[v]) {
            if (!seen[u]) {
                seen[u] = 1;
                ++visited;
                stack.push_back(u);
            }
        }
    }
    return visited == adj.size();
}

size_t Topology::edge_count() const {
    size_t total = 0;
    for (const auto& v : adj) total += v.size();
    return total / 2;
}

Topology build_topology(int N, int N_m, int N_s, Rng& rng) {
    if (N < 2) throw ConfigError("topology: need at least 2 nodes");
    if (N_m < 0 || N_m > N) throw ConfigError("topology: need 0 <= N_m <= N");
    if (N_s < 1) throw ConfigError("topology: need N_s >= 1");
    if (N > 2 && N_s < 2) throw ConfigError("topology: N_s = 1 cannot connect more than 2 nodes");

    Topology t;
    t.max_degree = N_s;
    t.adj.assign(static_cast<size_t>(N), {});
    for (auto& v : t.adj) v.reserve(static_cast<size_t>(N_s));

    // Join phase: each joiner handshakes random earlier nodes until it holds
    // about half its capacity; the other half stays open for later joiners,
    // which keeps everyone attachable and the graph connected.
    const int quota = std::max(1, (N_s + 1) / 2);
    for (uint32_t v = 1; v < static_cast<uint32_t>(N); ++v) {
        int have = 0;
        const int want = std::min<int>(quota, static_cast<int>(v));
        const int attempts = 16 * std::max(N_s, 4);
        for (int a = 0; a < attempts && have < want; ++a) {
            const auto u = static_cast<uint32_t>(rng.below(v));
            if (t.degree(u) >= N_s || t.adjacent(v, u)) continue;
            link(t, v, u);
            ++have;
        }
        if (have == 0) {
            // Unlucky draws: scan from a random start for any open slot.
            const auto start = static_cast<uint32_t>(rng.below(v));
            for (uint32_t off = 0; off < v; ++off) {
                const uint32_t u = (start + off) % v;
                if (t.degree(u) < N_s && !t.adjacent(v, u)) {
                    link(t, v, u);
                    break;
                }
            }
        }
    }

    // Fill phase: pair remaining capacity at random until no progress.
    std::vector<uint32_t> open;
    for (uint32_t v = 0; v < static_cast<uint32_t>(N); ++v)
        if (t.degree(v) < N_s) open.push_back(v);
    int stall = 0;
    const int max_stall = 32 * N;
    while (open.size() >= 2 && stall < max_stall) {
        const size_t ia = rng.below(open.size());
        const size_t ib = rng.below(open.size());
        const uint32_t a = open[ia];
        const uint32_t b = open[ib];
        if (a == b || t.adjacent(a, b)) {
            ++stall;
            continue;
        }
        link(t, a, b);
        stall = 0;
        // Compact once nodes reach capacity; order by larger index first so
        // the swap-erase below stays valid.
        for (size_t idx : {std::max(ia, ib), std::min(ia, ib)}) {
            if (t.degree(open[idx]) >= N_s) {
                open[idx] = open.back();
                open.pop_back();
            }
        }
    }

    t.malicious.assign(static_cast<size_t>(N), 0);
    std::vector<uint32_t> ids(static_cast<size_t>(N));
    for (uint32_t v = 0; v < static_cast<uint32_t>(N); ++v) ids[v] = v;
    for (int m = 0; m < N_m; ++m) {
        const size_t pick = m + rng.below(static_cast<uint64_t>(N - m));
        std::swap(ids[m], ids[pick]);
        t.malicious[ids[m]] = 1;
    }
    return t;
}

void refresh_neighbors(Topology& t, Rng& rng) {
    const auto N = static_cast<uint32_t>(t.size());
    for (uint32_t v = 0; v < N; ++v) {
        if (t.adj[v].empty()) continue;
        const uint32_t gone = t.adj[v][rng.below(t.adj[v].size())];
        unlink(t, v, gone);
        const int attempts = 8 * std::max(t.max_degree, 4);
        for (int a = 0; a < attempts; ++a) {
            const auto u = static_cast<uint32_t>(rng.below(N));
            if (u == v || t.degree(u) >= t.max_degree || t.degree(v) >= t.max_degree ||
                t.adjacent(v, u))
                continue;
            link(t, v, u);
            break;
        }
    }
}

}  // namespace ncstream
