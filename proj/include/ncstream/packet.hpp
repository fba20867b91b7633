#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ncstream/bitvec.hpp"
#include "ncstream/rng.hpp"

namespace ncstream {

// Fixed-size data block; all blocks of one generation share block_size.
using Block = std::vector<uint8_t>;

// Independently decodable chunk of the stream: k source blocks.
struct Generation {
    uint64_t id = 0;
    std::vector<Block> blocks;

    size_t k() const { return blocks.size(); }
    size_t block_size() const { return blocks.empty() ? 0 : blocks.front().size(); }
};

enum class OriginKind : uint8_t { Source, Recombined, Forged };

class CodedPacket;

namespace metrics {
// Ground-truth taint read. Lives here so honest-node decision logic cannot
// accidentally depend on it; only measurement and test code may call it.
bool is_tainted(const CodedPacket& pkt) noexcept;
}  // namespace metrics

CodedPacket encode_source(const Generation& gen, Rng& rng);
CodedPacket combine(std::span<const CodedPacket> packets, const BitVec& select);
CodedPacket forge_packet(size_t k, size_t block_size, Rng& rng);

// Coded packet: payload = XOR of the source blocks whose coefficient bit is
// set. The taint flag marks packets whose content is inconsistent with their
// coefficients (forged, or any combination touching a forged packet); it is
// simulation metadata, private to keep protocol logic honest.
class CodedPacket {
public:
    uint64_t generation_id = 0;
    BitVec coeffs;
    Block payload;
    OriginKind origin = OriginKind::Source;

    size_t k() const { return coeffs.size(); }
    size_t block_size() const { return payload.size(); }

private:
    bool taint_ = false;

    friend CodedPacket encode_source(const Generation&, Rng&);
    friend CodedPacket combine(std::span<const CodedPacket>, const BitVec&);
    friend CodedPacket forge_packet(size_t, size_t, Rng&);
    friend bool metrics::is_tainted(const CodedPacket&) noexcept;
};

}  // namespace ncstream
