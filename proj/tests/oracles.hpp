// Test-side oracles, kept independent of the library's implementation paths:
// brute-force GF(2) rank, byte-loop XOR, exact hypergeometric via long double
// products, and a Monte-Carlo of the round-based propagation model.
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ncstream/model.hpp"
#include "ncstream/packet.hpp"
#include "ncstream/rng.hpp"

namespace oracle {

// Rank of a set of k-bit vectors (k <= 64), plain row reduction on words.
inline int brute_rank(std::vector<uint64_t> rows) {
    int rank = 0;
    for (int bit = 0; bit < 64; ++bit) {
        const uint64_t mask = uint64_t{1} << bit;
        size_t pivot = SIZE_MAX;
        for (size_t r = rank; r < rows.size(); ++r) {
            if (rows[r] & mask) {
                pivot = r;
                break;
            }
        }
        if (pivot == SIZE_MAX) continue;
        std::swap(rows[rank], rows[pivot]);
        for (size_t r = 0; r < rows.size(); ++r)
            if (r != static_cast<size_t>(rank) && (rows[r] & mask)) rows[r] ^= rows[rank];
        ++rank;
    }
    return rank;
}

inline uint64_t low_bits(const ncstream::BitVec& v) { return v.words().empty() ? 0 : v.words()[0]; }

// Byte-by-byte XOR of selected payloads; deliberately naive.
inline ncstream::Block xor_payload_oracle(const std::vector<ncstream::CodedPacket>& pkts,
                                          const std::vector<int>& selected) {
    ncstream::Block acc(pkts.front().payload.size(), 0);
    for (int idx : selected)
        for (size_t b = 0; b < acc.size(); ++b) acc[b] ^= pkts[idx].payload[b];
    return acc;
}

// Exact hypergeometric pmf via incremental long double products.
inline double hypergeom_pmf(int N, int K, int n, int x) {
    if (x < 0 || x > n || x > K || n - x > N - K) return 0.0;
    long double p = 1.0L;
    // C(K,x) * C(N-K, n-x) / C(N,n), interleaved to stay in range
    auto choose = [](int a, int b) {
        long double r = 1.0L;
        for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
        return r;
    };
    p = choose(K, x) * choose(N - K, n - x) / choose(N, n);
    return static_cast<double>(p);
}

// Draws x ~ Hypergeom(N, N_m, n) by sequential sampling without replacement.
inline int sample_hypergeom(int N, int N_m, int n, ncstream::Rng& rng) {
    int x = 0;
    int remaining = N;
    int bad = N_m;
    for (int draw = 0; draw < n; ++draw) {
        if (rng.below(static_cast<uint64_t>(remaining)) < static_cast<uint64_t>(bad)) {
            ++x;
            --bad;
        }
        --remaining;
    }
    return x;
}

// Monte-Carlo of the reference-node round model: each uploader delivers one
// packet per round (polluted with p_poll when the uploader is malicious) and
// the node recombines each buffered packet with probability p_r. The
// estimators mirror the closed forms' independence structure: a fresh
// uploader mix and arrival history per factor.
struct RoundModelMC {
    ncstream::model::ModelParams params;
    ncstream::Rng rng{12345};

    // Polluted arrivals accumulated by round i with x malicious uploaders.
    int arrivals(int i, int x) {
        int b = 0;
        for (int t = 0; t < i * x; ++t) b += rng.bernoulli(params.p_poll) ? 1 : 0;
        return b;
    }

    bool recombination_polluted(int b) {
        for (int j = 0; j < b; ++j)
            if (rng.bernoulli(params.p_r)) return true;
        return false;
    }

    double estimate_p_rp(int i, int x, int trials) {
        int hits = 0;
        for (int t = 0; t < trials; ++t)
            hits += recombination_polluted(arrivals(i, x)) ? 1 : 0;
        return static_cast<double>(hits) / trials;
    }

    double estimate_p_gp(int i, int trials) {
        int hits = 0;
        for (int t = 0; t < trials; ++t) {
            const int x = sample_hypergeom(params.N, params.N_m, params.n, rng);
            hits += recombination_polluted(arrivals(i, x)) ? 1 : 0;
        }
        return static_cast<double>(hits) / trials;
    }

    double estimate_p_fclean(int trials) {
        int clean = 0;
        for (int t = 0; t < trials; ++t) {
            bool ok = true;
            for (int i = 1; i <= params.rounds() && ok; ++i) {
                const int x = sample_hypergeom(params.N, params.N_m, params.n, rng);
                ok = !recombination_polluted(arrivals(i, x));
            }
            clean += ok ? 1 : 0;
        }
        return static_cast<double>(clean) / trials;
    }

    double estimate_p_rclean(int trials) {
        int clean = 0;
        for (int t = 0; t < trials; ++t) {
            const int x = sample_hypergeom(params.N, params.N_m, params.n, rng);
            clean += arrivals(params.rounds(), x) == 0 ? 1 : 0;
        }
        return static_cast<double>(clean) / trials;
    }
};

// Total-variation distance between an empirical histogram and a pmf.
inline double tv_distance(const std::vector<uint64_t>& counts, uint64_t total,
                          const std::vector<double>& pmf) {
    double tv = 0;
    for (size_t x = 0; x < pmf.size(); ++x) {
        const double emp = x < counts.size() ? static_cast<double>(counts[x]) / total : 0.0;
        tv += std::abs(emp - pmf[x]);
    }
    return tv / 2;
}

}  // namespace oracle
