#include "ncstream/recombine.hpp"

#include <cmath>
#include <stdexcept>

#include "ncstream/errors.hpp"

namespace ncstream {

namespace {

constexpr int kMaxRedraw = 64;

// Cache of j^alpha and its prefix sums; one alpha is live per run, so a
// thread-local slot is enough and keeps draws O(buffer).
struct PowCache {
    double alpha = std::nan("");
    std::vector<double> pow;     // pow[j] = j^alpha, index 0 unused
    std::vector<double> prefix;  // prefix[j] = sum_{m<=j} m^alpha

    void ensure(double a, size_t n) {
        if (!(alpha == a)) {
            alpha = a;
            pow.assign(2, 0.0);
            pow[1] = 1.0;
            prefix.assign(2, 0.0);
            prefix[1] = 1.0;
        }
        while (pow.size() <= n) {
            const auto j = static_cast<double>(pow.size());
            pow.push_back(std::pow(j, a));
            prefix.push_back(prefix.back() + pow.back());
        }
    }
};

thread_local PowCache tl_pow_cache;

void draw_once(BitVec& c, size_t r, const StrategyConfig& cfg, Rng& rng) {
    switch (cfg.kind) {
        case StrategyKind::Reference: {
            if (cfg.p_uniform == 0.5) {
                // Fair coins straight from the generator words.
                for (auto& w : c.words()) w = rng.next_u64();
                c.mask_tail();
            } else {
                for (size_t i = 0; i < r; ++i) c.set(i, rng.bernoulli(cfg.p_uniform));
            }
            return;
        }
        case StrategyKind::AgeBased: {
            auto& cache = tl_pow_cache;
            cache.ensure(cfg.alpha, r);
            const double total = cache.prefix[r];
            for (size_t i = 1; i <= r; ++i) {
                const double rho = rng.uniform();
                bool selected = false;
                switch (cfg.draw_rule) {
                    case DrawRule::AgeWeighted:
                        selected = rho < cache.pow[r + 1 - i] / total;
                        break;
                    case DrawRule::DropWeighted:
                        selected = cache.pow[i] / total < rho;
                        break;
                    case DrawRule::IndexWeighted:
                        selected = rho < cache.pow[i] / total;
                        break;
                }
                c.set(i - 1, selected);
            }
            return;
        }
    }
}

}  // namespace

void StrategyConfig::validate() const {
    if (!(alpha > 0)) throw std::invalid_argument("strategy: alpha must be > 0");
    if (m_r < 1) throw std::invalid_argument("strategy: m_r must be >= 1");
    if (!(p_uniform > 0 && p_uniform < 1))
        throw std::invalid_argument("strategy: p_uniform must be in (0, 1)");
}

double selection_weight(size_t i, size_t theta, double alpha) {
    if (i < 1 || i > theta) throw std::out_of_range("selection_weight: index outside buffer");
    auto& cache = tl_pow_cache;
    cache.ensure(alpha, theta);
    return cache.pow[i] / cache.prefix[theta];
}

BitVec draw_coefficients(size_t buffer_len, const StrategyConfig& cfg, Rng& rng) {
    if (buffer_len == 0) throw EmptyBuffer("draw_coefficients: empty input buffer");
    cfg.validate();

    BitVec c(buffer_len);
    for (int attempt = 0; attempt < kMaxRedraw; ++attempt) {
        draw_once(c, buffer_len, cfg, rng);
        if (!c.is_zero()) return c;
    }
    c.set(0, true);  // oldest slot
    return c;
}

std::optional<CodedPacket> make_transmission(const InputBuffer& buffer,
                                             const DecoderState& decoder,
                                             const StrategyConfig& cfg, Rng& rng) {
    if (buffer.empty() || decoder.rank() < static_cast<size_t>(cfg.m_r)) return std::nullopt;
    const BitVec select = draw_coefficients(buffer.size(), cfg, rng);
    return combine(std::span<const CodedPacket>(buffer.data(), buffer.size()), select);
}

}  // namespace ncstream
