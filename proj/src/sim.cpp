#include "ncstream/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <queue>

#include "ncstream/decoder.hpp"
#include "ncstream/errors.hpp"
#include "ncstream/recombine.hpp"
#include "ncstream/topology.hpp"

namespace ncstream {

std::vector<uint64_t> suitable_generations(std::span<const GenCandidate> region,
                                           const DecodingMap& neighbor_map, int m_r) {
    std::vector<uint64_t> out;
    for (const auto& c : region) {
        if (c.flagged_polluted || !c.has_packets) continue;
        if (c.rank < static_cast<size_t>(m_r)) continue;
        if (!neighbor_map.needs(c.gen)) continue;
        out.push_back(c.gen);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

constexpr uint32_t kServer = UINT32_MAX;

enum EventKind : uint8_t { kDeadline = 0, kRefresh = 1, kServerTx = 2, kPeerTx = 3 };

struct Event {
    int64_t t = 0;
    uint8_t kind = 0;
    uint32_t node = 0;  // node id, or generation for kDeadline
    uint64_t seq = 0;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.kind != b.kind) return a.kind > b.kind;
        if (a.node != b.node) return a.node > b.node;
        return a.seq > b.seq;
    }
};

struct GenState {
    explicit GenState(size_t k, size_t block_size, uint64_t gen)
        : dec(k, block_size, gen) {}

    InputBuffer buffer;
    DecoderState dec;
    bool polluted = false;  // pollution vector bit
    bool dropped = false;   // packets dropped, relaying stopped
    bool recovered = false;
    bool checksum_checked = false;
};

struct Node {
    bool malicious = false;
    std::deque<GenState> gens;
    uint64_t gens_base = 0;
    std::vector<DecodingMap> last_map;
};

class Simulation {
public:
    explicit Simulation(const ScenarioConfig& cfg)
        : cfg_(cfg),
          rng_(cfg.seed, 0),
          content_rng_(cfg.seed, 1),
          topo_rng_(cfg.seed, 2),
          collector_(cfg) {
        cfg_.validate();
        block_bytes_ = static_cast<size_t>(cfg_.packet_block_bytes());
        ct_us_ = std::llround(cfg_.C_t * 1e6);
        tb_us_ = std::llround(cfg_.t_b * 1e6);
        duration_us_ = std::llround(cfg_.duration * 1e6);
        attack_start_us_ = std::llround(cfg_.attack_start * 1e6);
        attack_end_us_ = std::llround(cfg_.attack_end * 1e6);
        const double packet_bits = 8.0 * static_cast<double>(block_bytes_);
        peer_period_us_ = std::max<int64_t>(1, std::llround(std::ceil(1e6 * packet_bits / cfg_.B_p)));
        server_period_us_ = std::max<int64_t>(1, std::llround(std::ceil(1e6 * packet_bits / cfg_.B_s)));
        total_gens_ = cfg_.total_generations();
    }

    metrics::MetricsReport run() {
        topo_ = build_topology(cfg_.N, cfg_.N_m, cfg_.N_s, topo_rng_);
        nodes_.resize(static_cast<size_t>(cfg_.N));
        for (int v = 0; v < cfg_.N; ++v) {
            nodes_[v].malicious = topo_.malicious[v] != 0;
            nodes_[v].last_map.resize(static_cast<size_t>(cfg_.N));
        }

        push({0, kServerTx, kServer});
        for (uint32_t v = 0; v < static_cast<uint32_t>(cfg_.N); ++v)
            push({static_cast<int64_t>(rng_.below(static_cast<uint64_t>(peer_period_us_))),
                  kPeerTx, v});
        for (int g = 0; g < cfg_.judged_generations(); ++g)
            push({tb_us_ + g * ct_us_, kDeadline, static_cast<uint32_t>(g)});
        if (cfg_.neighbor_refresh_period > 0) {
            const auto period = std::llround(cfg_.neighbor_refresh_period * 1e6);
            for (int64_t t = period; t <= duration_us_; t += period) push({t, kRefresh, 0});
        }

        while (!queue_.empty()) {
            const Event ev = queue_.top();
            queue_.pop();
            now_ = ev.t;
            hash_event(ev);
            switch (ev.kind) {
                case kDeadline: handle_deadline(ev.node); break;
                case kRefresh: handle_refresh(); break;
                case kServerTx: handle_server_tx(); break;
                case kPeerTx: handle_peer_tx(ev.node); break;
            }
        }

        collector_.set_trace_hash(trace_hash_);
        return collector_.finalize();
    }

private:
    void push(Event ev) {
        if (ev.t > duration_us_) return;
        ev.seq = next_seq_++;
        queue_.push(ev);
    }

    void hash_event(const Event& ev) {
        auto mix = [&](uint64_t v) {
            trace_hash_ ^= v;
            trace_hash_ *= 0x100000001b3ULL;  // FNV-1a
        };
        mix(static_cast<uint64_t>(ev.t));
        mix(ev.kind);
        mix(ev.node);
    }

    // ---- region bookkeeping -------------------------------------------

    uint64_t region_lo() const {
        return now_ >= tb_us_ ? static_cast<uint64_t>((now_ - tb_us_) / ct_us_) + 1 : 0;
    }
    uint64_t region_hi() const {
        const int64_t pos = now_ / ct_us_;
        return static_cast<uint64_t>(std::min<int64_t>(pos, total_gens_ - 1));
    }

    GenState* state_if_exists(Node& n, uint64_t gen) {
        if (gen < n.gens_base || gen >= n.gens_base + n.gens.size()) return nullptr;
        return &n.gens[gen - n.gens_base];
    }

    GenState& state(Node& n, uint64_t gen) {
        const uint64_t lo = region_lo();
        if (n.gens.empty()) n.gens_base = std::max(n.gens_base, lo);
        while (n.gens_base + n.gens.size() <= gen)
            n.gens.emplace_back(static_cast<size_t>(cfg_.k), block_bytes_,
                                n.gens_base + n.gens.size());
        return n.gens[gen - n.gens_base];
    }

    void drop_gen(Node& n, uint64_t gen) {
        while (n.gens_base <= gen) {
            if (!n.gens.empty()) n.gens.pop_front();
            ++n.gens_base;
        }
    }

    DecodingMap snapshot_map(Node& n) const {
        DecodingMap m;
        const uint64_t lo = now_ >= tb_us_ ? static_cast<uint64_t>((now_ - tb_us_) / ct_us_) + 1 : 0;
        const uint64_t hi = region_hi();
        if (hi < lo) return m;
        m.first = static_cast<int64_t>(lo);
        m.len = static_cast<uint32_t>(hi - lo + 1);
        for (uint64_t g = lo; g <= hi; ++g) {
            if (g >= n.gens_base && g < n.gens_base + n.gens.size() &&
                n.gens[g - n.gens_base].recovered)
                m.bits |= uint64_t{1} << (g - lo);
        }
        return m;
    }

    const Generation& source_generation(uint64_t gen) {
        while (content_.size() <= gen) {
            Generation g;
            g.id = content_.size();
            g.blocks.assign(static_cast<size_t>(cfg_.k), Block(block_bytes_));
            for (auto& b : g.blocks) {
                size_t i = 0;
                for (; i + 8 <= b.size(); i += 8) {
                    const uint64_t w = content_rng_.next_u64();
                    std::memcpy(b.data() + i, &w, 8);
                }
                if (i < b.size()) {
                    const uint64_t w = content_rng_.next_u64();
                    std::memcpy(b.data() + i, &w, b.size() - i);
                }
            }
            content_.push_back(std::move(g));
        }
        return content_[gen];
    }

    // ---- event handlers ------------------------------------------------

    void handle_server_tx() {
        const int64_t pos = now_ / ct_us_;
        if (pos < total_gens_) {
            CodedPacket pkt = encode_source(source_generation(static_cast<uint64_t>(pos)), rng_);
            const auto target = static_cast<uint32_t>(rng_.below(static_cast<uint64_t>(cfg_.N)));
            collector_.on_server_packet();
            deliver(std::move(pkt), kServer, target, DecodingMap{});
            push({now_ + server_period_us_, kServerTx, kServer});
        }
    }

    void handle_peer_tx(uint32_t v) {
        push({now_ + peer_period_us_, kPeerTx, v});
        Node& sender = nodes_[v];
        const auto& neighbors = topo_.adj[v];
        if (neighbors.empty()) return;
        const uint32_t u = neighbors[rng_.below(neighbors.size())];

        const uint64_t lo = region_lo();
        const uint64_t hi = region_hi();
        if (hi < lo) return;
        const DecodingMap& seen = sender.last_map[u];

        if (sender.malicious && now_ >= attack_start_us_ && now_ < attack_end_us_ &&
            rng_.bernoulli(cfg_.p_poll)) {
            // Forge for the neediest generation the neighbor reports missing;
            // the attacker ignores its own rank, buffer and pollution flags.
            for (uint64_t g = lo; g <= hi; ++g) {
                if (!seen.needs(g)) continue;
                CodedPacket pkt = forge_packet(static_cast<size_t>(cfg_.k), block_bytes_, rng_);
                pkt.generation_id = g;
                collector_.on_forged_sent();
                deliver(std::move(pkt), v, u, snapshot_map(sender));
                return;
            }
            return;
        }

        // Honest path: earliest-deadline suitable generation.
        for (uint64_t g = lo; g <= hi; ++g) {
            GenState* gs = state_if_exists(sender, g);
            if (!gs || gs->dropped || gs->polluted || gs->buffer.empty()) continue;
            if (gs->dec.rank() < static_cast<size_t>(cfg_.strategy.m_r)) continue;
            if (!seen.needs(g)) continue;
            auto pkt = make_transmission(gs->buffer, gs->dec, cfg_.strategy, rng_);
            if (!pkt) return;
            if (!sender.malicious) collector_.on_honest_transmit(v, g, *pkt);
            deliver(std::move(*pkt), v, u, snapshot_map(sender));
            return;
        }
    }

    void detect(Node& n, GenState& gs) {
        gs.polluted = true;
        gs.dropped = true;
        gs.buffer.clear();
        gs.buffer.shrink_to_fit();
        if (!n.malicious) collector_.on_detection();
    }

    void deliver(CodedPacket pkt, uint32_t from, uint32_t to, DecodingMap sender_map) {
        Node& receiver = nodes_[to];
        if (from != kServer) receiver.last_map[from] = sender_map;

        const uint64_t g = pkt.generation_id;
        if (g < region_lo() || g > region_hi()) return;  // deadline passed

        if (!receiver.malicious) collector_.on_honest_receive(to, g, pkt);

        GenState& gs = state(receiver, g);
        if (gs.dropped) return;

        const InsertOutcome outcome = gs.dec.insert(pkt);
        gs.buffer.push_back(std::move(pkt));

        switch (cfg_.detector) {
            case DetectorKind::OFG:
                if (outcome == InsertOutcome::PollutionDetected) {
                    detect(receiver, gs);
                    return;
                }
                break;
            case DetectorKind::Checksum:
            case DetectorKind::None:
                break;  // the insert outcome's detection signal is unused
        }

        if (gs.dec.rank() == static_cast<size_t>(cfg_.k)) {
            gs.recovered = true;
            if (cfg_.detector == DetectorKind::Checksum && !gs.checksum_checked) {
                gs.checksum_checked = true;
                // Trusted verifier: compare the recovered payload with the
                // server's copy, at zero cost and zero latency.
                const Generation recovered = gs.dec.recover();
                if (recovered.blocks != source_generation(g).blocks) detect(receiver, gs);
            }
        }
    }

    void handle_deadline(uint32_t gen_u32) {
        const auto gen = static_cast<uint64_t>(gen_u32);
        for (uint32_t v = 0; v < static_cast<uint32_t>(cfg_.N); ++v) {
            Node& n = nodes_[v];
            if (!n.malicious) {
                const GenState* gs = state_if_exists(n, gen);
                const bool full = gs && gs->dec.rank() == static_cast<size_t>(cfg_.k);
                collector_.judge_node(gen, v, full, gs ? gs->dec.received_at_full_rank() : 0);
            }
            drop_gen(n, gen);
        }
        collector_.close_generation(gen, static_cast<double>(now_) / 1e6);
    }

    void handle_refresh() { refresh_neighbors(topo_, rng_); }

    // ---- members ---------------------------------------------------------

    ScenarioConfig cfg_;
    Rng rng_;
    Rng content_rng_;
    Rng topo_rng_;
    metrics::MetricsCollector collector_;

    size_t block_bytes_ = 0;
    int64_t ct_us_ = 0, tb_us_ = 0, duration_us_ = 0;
    int64_t attack_start_us_ = 0, attack_end_us_ = 0;
    int64_t peer_period_us_ = 0, server_period_us_ = 0;
    int64_t total_gens_ = 0;

    Topology topo_;
    std::vector<Node> nodes_;
    std::vector<Generation> content_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    uint64_t next_seq_ = 0;
    int64_t now_ = 0;
    uint64_t trace_hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

metrics::MetricsReport run_scenario(const ScenarioConfig& cfg) {
    Simulation sim(cfg);
    return sim.run();
}

}  // namespace ncstream
