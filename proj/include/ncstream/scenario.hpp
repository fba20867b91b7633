#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "ncstream/recombine.hpp"

namespace ncstream {

enum class DetectorKind : uint8_t { OFG, Checksum, None };

// Experiment parameters; field names follow the notation used everywhere
// else in this project (N, N_m, N_s, k, B_v, B_s, B_p, C_t, t_b, p_poll).
struct ScenarioConfig {
    int N = 1000;     // total peers
    int N_m = 20;     // malicious peers
    int N_s = 25;     // max neighborhood size
    int k = 50;       // generation size

    // Packet payload bytes; 0 derives B_v * C_t / (8 * k) so one generation
    // carries exactly C_t seconds of video.
    int block_size = 0;

    double B_v = 500'000;     // video bitrate, bit/s
    double B_s = 20'000'000;  // server upload bandwidth, bit/s
    double B_p = 750'000;     // peer upload bandwidth, bit/s
    double C_t = 1.0;         // generation playout duration, s
    double t_b = 10.0;        // buffering time, s

    double p_poll = 0.01;       // malicious pollution probability
    double attack_start = 90;   // s
    double attack_end = 210;    // s
    double duration = 300;      // s
    uint64_t seed = 1;

    StrategyConfig strategy;
    DetectorKind detector = DetectorKind::OFG;
    double neighbor_refresh_period = 0;  // s, 0 = static topology

    void validate() const;  // throws ConfigError

    int packet_block_bytes() const;  // block_size after derivation
    int region_generations() const { return static_cast<int>(t_b / C_t + 0.5); }
    int total_generations() const { return static_cast<int>(duration / C_t + 1e-9); }
    // Generations judged at their playout deadline (deadline <= duration).
    int judged_generations() const {
        const int n = static_cast<int>((duration - t_b) / C_t + 1e-9) + 1;
        return std::max(0, std::min(n, total_generations()));
    }
};

const char* to_string(DetectorKind d);
const char* to_string(StrategyKind s);
const char* to_string(DrawRule r);

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(std::istream& in, const std::string& name);

// Apply "key=value" (or "strategy.key=value") on top of a parsed scenario;
// used by CLI flag overrides and sweep axes.
void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value);

// key = value rendering, parseable by parse_scenario; used for manifests.
std::string serialize_scenario(const ScenarioConfig& cfg);

}  // namespace ncstream
