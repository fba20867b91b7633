#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncstream/decoder.hpp"
#include "ncstream/packet.hpp"
#include "ncstream/rng.hpp"

namespace ncstream {

enum class StrategyKind : uint8_t { Reference, AgeBased };

// How the normalized power-law weight w(i) = i^alpha / sum_{j<=theta} j^alpha
// turns into per-slot selection coin flips for the age-based strategy.
//
//   AgeWeighted   P{c_i=1} = w(theta+1-i): the weight is read on the age rank,
//                 so the oldest slot carries the largest probability and the
//                 expected selection count is 1. Default; this is the variant
//                 that starves late (more often polluted) packets.
//   DropWeighted  c_i = 1 iff w(i) < rho: keeps a slot unless a uniform draw
//                 lands under its weight, P{c_i=1} = 1 - w(i). Selects almost
//                 the whole buffer, mildly biased against the newest slots.
//   IndexWeighted c_i = 1 iff rho < w(i): P{c_i=1} = w(i), favors the newest.
enum class DrawRule : uint8_t { AgeWeighted, DropWeighted, IndexWeighted };

struct StrategyConfig {
    StrategyKind kind = StrategyKind::Reference;
    double alpha = 1.0;       // power-law exponent, > 0
    int m_r = 1;              // minimum rank before forwarding recombinations
    DrawRule draw_rule = DrawRule::AgeWeighted;
    double p_uniform = 0.5;   // per-slot probability for Reference

    void validate() const;
};

// Received packets for one generation in arrival order; index 0 arrived first.
using InputBuffer = std::vector<CodedPacket>;

// Normalized power-law weight of 1-based slot i over a buffer of length theta.
double selection_weight(size_t i, size_t theta, double alpha);

// Selection mask over a buffer of the given length. All-zero draws are
// retried up to 64 times, then the oldest slot is forced so a transmission
// opportunity is never wasted.
BitVec draw_coefficients(size_t buffer_len, const StrategyConfig& cfg, Rng& rng);

inline BitVec draw_coefficients(const InputBuffer& buffer, const StrategyConfig& cfg, Rng& rng) {
    return draw_coefficients(buffer.size(), cfg, rng);
}

// One transmission opportunity: nothing while rank < m_r or the buffer is
// empty, otherwise the XOR of a drawn subset of the buffer.
std::optional<CodedPacket> make_transmission(const InputBuffer& buffer,
                                             const DecoderState& decoder,
                                             const StrategyConfig& cfg, Rng& rng);

}  // namespace ncstream
