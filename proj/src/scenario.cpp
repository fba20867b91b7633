#include "ncstream/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ncstream/errors.hpp"

namespace ncstream {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

double parse_num(const std::string& where, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(where, "expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& where, const std::string& v) {
    const double d = parse_num(where, v);
    if (d != std::floor(d)) fail(where, "expected an integer, got '" + v + "'");
    return static_cast<int>(d);
}

DetectorKind parse_detector(const std::string& where, const std::string& v) {
    if (v == "OFG") return DetectorKind::OFG;
    if (v == "Checksum") return DetectorKind::Checksum;
    if (v == "None") return DetectorKind::None;
    fail(where, "detector must be OFG, Checksum or None");
}

StrategyKind parse_kind(const std::string& where, const std::string& v) {
    if (v == "Reference") return StrategyKind::Reference;
    if (v == "AgeBased") return StrategyKind::AgeBased;
    fail(where, "strategy kind must be Reference or AgeBased");
}

DrawRule parse_rule(const std::string& where, const std::string& v) {
    if (v == "age_weighted") return DrawRule::AgeWeighted;
    if (v == "drop_weighted") return DrawRule::DropWeighted;
    if (v == "index_weighted") return DrawRule::IndexWeighted;
    fail(where, "draw_rule must be age_weighted, drop_weighted or index_weighted");
}

void apply_key(ScenarioConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value, const std::string& where) {
    if (section == "strategy") {
        auto& s = cfg.strategy;
        if (key == "kind")
            s.kind = parse_kind(where, value);
        else if (key == "alpha")
            s.alpha = parse_num(where, value);
        else if (key == "m_r")
            s.m_r = parse_int(where, value);
        else if (key == "p_uniform")
            s.p_uniform = parse_num(where, value);
        else if (key == "draw_rule")
            s.draw_rule = parse_rule(where, value);
        else
            fail(where, "unknown strategy key '" + key + "'");
        return;
    }
    if (!section.empty()) fail(where, "unknown section '" + section + "'");

    if (key == "N")
        cfg.N = parse_int(where, value);
    else if (key == "N_m")
        cfg.N_m = parse_int(where, value);
    else if (key == "N_s")
        cfg.N_s = parse_int(where, value);
    else if (key == "k")
        cfg.k = parse_int(where, value);
    else if (key == "block_size")
        cfg.block_size = parse_int(where, value);
    else if (key == "B_v")
        cfg.B_v = parse_num(where, value);
    else if (key == "B_s")
        cfg.B_s = parse_num(where, value);
    else if (key == "B_p")
        cfg.B_p = parse_num(where, value);
    else if (key == "C_t")
        cfg.C_t = parse_num(where, value);
    else if (key == "t_b")
        cfg.t_b = parse_num(where, value);
    else if (key == "p_poll")
        cfg.p_poll = parse_num(where, value);
    else if (key == "attack_start")
        cfg.attack_start = parse_num(where, value);
    else if (key == "attack_end")
        cfg.attack_end = parse_num(where, value);
    else if (key == "duration")
        cfg.duration = parse_num(where, value);
    else if (key == "seed")
        cfg.seed = static_cast<uint64_t>(parse_num(where, value));
    else if (key == "detector")
        cfg.detector = parse_detector(where, value);
    else if (key == "neighbor_refresh_period")
        cfg.neighbor_refresh_period = parse_num(where, value);
    else
        fail(where, "unknown key '" + key + "'");
}

}  // namespace

void ScenarioConfig::validate() const {
    auto bad = [](const std::string& what) { throw ConfigError("scenario: " + what); };
    if (N < 2) bad("N must be >= 2");
    if (N_m < 0 || N_m > N) bad("need 0 <= N_m <= N");
    if (N_s < 1 || (N > 2 && N_s < 2)) bad("N_s too small to connect the overlay");
    if (k < 1) bad("k must be >= 1");
    if (!(B_v > 0 && B_s > 0 && B_p > 0)) bad("bandwidths must be positive");
    if (!(C_t > 0)) bad("C_t must be positive");
    if (!(t_b >= C_t)) bad("t_b must be at least one generation duration");
    const double region = t_b / C_t;
    if (std::abs(region - std::round(region)) > 1e-9) bad("t_b must be a multiple of C_t");
    if (region > 64) bad("t_b/C_t must be <= 64 (decoding map width)");
    if (!(duration >= t_b + C_t)) bad("duration too short to judge any generation");
    if (!(attack_start >= 0 && attack_start <= attack_end && attack_end <= duration))
        bad("need 0 <= attack_start <= attack_end <= duration");
    if (!(p_poll >= 0 && p_poll <= 1)) bad("p_poll outside [0,1]");
    if (block_size < 0) bad("block_size must be >= 0 (0 = derive)");
    if (packet_block_bytes() < 1) bad("derived block size is below one byte");
    if (neighbor_refresh_period < 0) bad("neighbor_refresh_period must be >= 0");
    try {
        strategy.validate();
    } catch (const std::exception& e) {
        bad(e.what());
    }
}

int ScenarioConfig::packet_block_bytes() const {
    if (block_size > 0) return block_size;
    return static_cast<int>(std::llround(B_v * C_t / (8.0 * k)));
}

const char* to_string(DetectorKind d) {
    switch (d) {
        case DetectorKind::OFG: return "OFG";
        case DetectorKind::Checksum: return "Checksum";
        case DetectorKind::None: return "None";
    }
    return "?";
}

const char* to_string(StrategyKind s) {
    return s == StrategyKind::Reference ? "Reference" : "AgeBased";
}

const char* to_string(DrawRule r) {
    switch (r) {
        case DrawRule::AgeWeighted: return "age_weighted";
        case DrawRule::DropWeighted: return "drop_weighted";
        case DrawRule::IndexWeighted: return "index_weighted";
    }
    return "?";
}

ScenarioConfig parse_scenario(std::istream& in, const std::string& name) {
    ScenarioConfig cfg;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = name + ":" + std::to_string(lineno);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') fail(where, "unterminated section header");
            section = trim(body.substr(1, body.size() - 2));
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) fail(where, "expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty() || value.empty()) fail(where, "expected 'key = value'");
        apply_key(cfg, section, key, value, where);
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open scenario file");
    return parse_scenario(in, path);
}

void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    static const char* strategy_keys[] = {"kind", "alpha", "m_r", "p_uniform", "draw_rule"};
    std::string section;
    std::string k = key;
    if (key.rfind("strategy.", 0) == 0) {
        section = "strategy";
        k = key.substr(9);
    } else {
        for (const char* sk : strategy_keys)
            if (k == sk) section = "strategy";
        if (k == "strategy") {  // sweep axis name for the strategy kind
            section = "strategy";
            k = "kind";
        }
        if (k == "alpha" || k == "m_r") section = "strategy";
    }
    apply_key(cfg, section, k, value, "override '" + key + "'");
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "N = " << cfg.N << "\n"
        << "N_m = " << cfg.N_m << "\n"
        << "N_s = " << cfg.N_s << "\n"
        << "k = " << cfg.k << "\n"
        << "block_size = " << cfg.block_size << "\n"
        << "B_v = " << cfg.B_v << "\n"
        << "B_s = " << cfg.B_s << "\n"
        << "B_p = " << cfg.B_p << "\n"
        << "C_t = " << cfg.C_t << "\n"
        << "t_b = " << cfg.t_b << "\n"
        << "p_poll = " << cfg.p_poll << "\n"
        << "attack_start = " << cfg.attack_start << "\n"
        << "attack_end = " << cfg.attack_end << "\n"
        << "duration = " << cfg.duration << "\n"
        << "seed = " << cfg.seed << "\n"
        << "detector = " << to_string(cfg.detector) << "\n"
        << "neighbor_refresh_period = " << cfg.neighbor_refresh_period << "\n"
        << "\n[strategy]\n"
        << "kind = " << to_string(cfg.strategy.kind) << "\n"
        << "alpha = " << cfg.strategy.alpha << "\n"
        << "m_r = " << cfg.strategy.m_r << "\n"
        << "p_uniform = " << cfg.strategy.p_uniform << "\n"
        << "draw_rule = " << to_string(cfg.strategy.draw_rule) << "\n";
    return out.str();
}

}  // namespace ncstream
