#include <cstring>

#include "ncstream/errors.hpp"
#include "ncstream/packet.hpp"

namespace ncstream {

namespace {

constexpr int kMaxResample = 64;

void xor_into(Block& dst, const Block& src) {
    size_t n = dst.size();
    size_t w = 0;
    for (; w + 8 <= n; w += 8) {
        uint64_t a, b;
        std::memcpy(&a, dst.data() + w, 8);
        std::memcpy(&b, src.data() + w, 8);
        a ^= b;
        std::memcpy(dst.data() + w, &a, 8);
    }
    for (; w < n; ++w) dst[w] ^= src[w];
}

BitVec random_nonzero(size_t nbits, Rng& rng) {
    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
        BitVec v = BitVec::random(nbits, rng);
        if (!v.is_zero()) return v;
    }
    throw Error("random coefficient vector stayed all-zero after 64 draws");
}

}  // namespace

namespace metrics {
bool is_tainted(const CodedPacket& pkt) noexcept { return pkt.taint_; }
}  // namespace metrics

CodedPacket encode_source(const Generation& gen, Rng& rng) {
    const size_t k = gen.k();
    if (k == 0 || gen.block_size() == 0) throw Incompatible("encode_source: empty generation");

    CodedPacket pkt;
    pkt.generation_id = gen.id;
    // All-zero vectors carry no information and are redrawn at the source.
    pkt.coeffs = random_nonzero(k, rng);
    pkt.payload.assign(gen.block_size(), 0);
    for (size_t j = 0; j < k; ++j)
        if (pkt.coeffs.test(j)) xor_into(pkt.payload, gen.blocks[j]);
    pkt.origin = OriginKind::Source;
    pkt.taint_ = false;
    return pkt;
}

CodedPacket combine(std::span<const CodedPacket> packets, const BitVec& select) {
    if (select.size() != packets.size())
        throw Incompatible("combine: selection length does not match packet count");
    if (select.is_zero()) throw EmptySelection("combine: no packet selected");

    const CodedPacket* first = nullptr;
    for (size_t i = 0; i < packets.size(); ++i) {
        if (!select.test(i)) continue;
        if (!first) {
            first = &packets[i];
            continue;
        }
        if (packets[i].generation_id != first->generation_id ||
            packets[i].k() != first->k() || packets[i].block_size() != first->block_size())
            throw Incompatible("combine: packets from different generations or shapes");
    }

    CodedPacket out;
    out.generation_id = first->generation_id;
    out.coeffs = BitVec(first->k());
    out.payload.assign(first->block_size(), 0);
    out.origin = OriginKind::Recombined;
    out.taint_ = false;
    for (size_t i = 0; i < packets.size(); ++i) {
        if (!select.test(i)) continue;
        out.coeffs ^= packets[i].coeffs;
        xor_into(out.payload, packets[i].payload);
        out.taint_ = out.taint_ || packets[i].taint_;
    }
    return out;
}

CodedPacket forge_packet(size_t k, size_t block_size, Rng& rng) {
    if (k == 0 || block_size == 0) throw Incompatible("forge_packet: k and block_size must be >= 1");

    CodedPacket pkt;
    pkt.coeffs = random_nonzero(k, rng);
    pkt.payload.resize(block_size);
    size_t i = 0;
    for (; i + 8 <= block_size; i += 8) {
        uint64_t w = rng.next_u64();
        std::memcpy(pkt.payload.data() + i, &w, 8);
    }
    if (i < block_size) {
        uint64_t w = rng.next_u64();
        std::memcpy(pkt.payload.data() + i, &w, block_size - i);
    }
    pkt.origin = OriginKind::Forged;
    pkt.taint_ = true;
    return pkt;
}

}  // namespace ncstream
