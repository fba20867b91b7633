#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncstream/packet.hpp"

namespace ncstream {

enum class InsertOutcome : uint8_t { Innovative, NonInnovative, PollutionDetected };

// Per-generation incremental Gaussian elimination over GF(2).
//
// Rows are kept upper-triangular: a stored row has its leading one exactly at
// its row index. Inserting a packet reduces it against the stored rows; a
// reduction that zeroes the coefficients but not the payload, or that hits an
// equal-coefficient row with a different payload, proves that some received
// packet was inconsistent — pollution is reported without waiting for full
// rank. Packets arriving after full rank run the same path and can only come
// out NonInnovative or PollutionDetected (late detection).
class DecoderState {
public:
    DecoderState(size_t k, size_t block_size, uint64_t generation_id = 0)
        : generation_id_(generation_id), k_(k), block_size_(block_size), rows_(k) {}

    InsertOutcome insert(const CodedPacket& pkt);

    // Solves the triangular system by backward substitution. The state is
    // left untouched, so recovery is repeatable.
    Generation recover() const;

    size_t rank() const { return rank_; }
    bool pollution_detected() const { return pollution_flag_; }
    size_t received_count() const { return received_count_; }

    // received_count at the instant rank reached k; 0 before full rank.
    // This is the k' that the code-overhead metric needs.
    size_t received_at_full_rank() const { return received_at_full_rank_; }

    size_t generation_size() const { return k_; }
    size_t block_size() const { return block_size_; }

    // Stored coefficient row s, or nullptr while empty (test visibility).
    const BitVec* row_coeffs(size_t s) const {
        return rows_[s] ? &rows_[s]->g : nullptr;
    }

private:
    struct Row {
        BitVec g;
        Block y;
    };

    InsertOutcome detect_pollution() {
        pollution_flag_ = true;
        return InsertOutcome::PollutionDetected;
    }

    uint64_t generation_id_;
    size_t k_;
    size_t block_size_;
    std::vector<std::optional<Row>> rows_;
    size_t rank_ = 0;
    bool pollution_flag_ = false;
    size_t received_count_ = 0;
    size_t received_at_full_rank_ = 0;
};

}  // namespace ncstream
