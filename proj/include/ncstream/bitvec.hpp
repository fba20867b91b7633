#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ncstream/rng.hpp"

namespace ncstream {

// Packed bit vector over GF(2); XOR is vector addition.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    // Each bit set independently with probability 1/2.
    static BitVec random(size_t nbits, Rng& rng) {
        BitVec v(nbits);
        for (auto& w : v.words_) w = rng.next_u64();
        v.mask_tail();
        return v;
    }

    size_t size() const { return nbits_; }

    bool test(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set(size_t i, bool value = true) {
        const uint64_t bit = uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= bit;
        else
            words_[i >> 6] &= ~bit;
    }

    void operator^=(const BitVec& other) {
        for (size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    }

    bool is_zero() const {
        for (uint64_t w : words_)
            if (w != 0) return false;
        return true;
    }

    // Index of the first set bit, or -1 if none.
    int first_set() const {
        for (size_t w = 0; w < words_.size(); ++w)
            if (words_[w] != 0) return static_cast<int>(w * 64 + std::countr_zero(words_[w]));
        return -1;
    }

    size_t count() const {
        size_t c = 0;
        for (uint64_t w : words_) c += static_cast<size_t>(std::popcount(w));
        return c;
    }

    bool operator==(const BitVec&) const = default;

    const std::vector<uint64_t>& words() const { return words_; }
    std::vector<uint64_t>& words() { return words_; }

    void mask_tail() {
        if (nbits_ & 63) words_.back() &= (uint64_t{1} << (nbits_ & 63)) - 1;
    }

private:
    size_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace ncstream
