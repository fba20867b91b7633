#include "ncstream/decoder.hpp"

#include <algorithm>
#include <cstring>

#include "ncstream/errors.hpp"

namespace ncstream {

namespace {

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

bool all_zero(const Block& b) {
    return std::all_of(b.begin(), b.end(), [](uint8_t v) { return v == 0; });
}

}  // namespace

InsertOutcome DecoderState::insert(const CodedPacket& pkt) {
    if (pkt.k() != k_ || pkt.block_size() != block_size_)
        throw Incompatible("insert: packet shape does not match decoder");

    ++received_count_;

    BitVec g = pkt.coeffs;
    Block y = pkt.payload;
    while (true) {
        if (g.is_zero()) {
            // 0 = y is consistent only for zero payloads.
            return all_zero(y) ? InsertOutcome::NonInnovative : detect_pollution();
        }
        const auto s = static_cast<size_t>(g.first_set());
        if (!rows_[s]) {
            rows_[s] = Row{std::move(g), std::move(y)};
            ++rank_;
            if (rank_ == k_) received_at_full_rank_ = received_count_;
            return InsertOutcome::Innovative;
        }
        if (g == rows_[s]->g) {
            // Same combination of source blocks: payloads must agree.
            return (y == rows_[s]->y) ? InsertOutcome::NonInnovative : detect_pollution();
        }
        g ^= rows_[s]->g;
        xor_into(y, rows_[s]->y);
    }
}

Generation DecoderState::recover() const {
    if (rank_ < k_) throw NotFullRank("recover: rank below generation size");

    std::vector<BitVec> g(k_);
    std::vector<Block> y(k_);
    for (size_t s = 0; s < k_; ++s) {
        g[s] = rows_[s]->g;
        y[s] = rows_[s]->y;
    }
    for (size_t s = k_; s-- > 0;) {
        for (size_t r = 0; r < s; ++r) {
            if (g[r].test(s)) {
                g[r] ^= g[s];
                xor_into(y[r], y[s]);
            }
        }
    }

    Generation out;
    out.id = generation_id_;
    out.blocks = std::move(y);
    return out;
}

}  // namespace ncstream
