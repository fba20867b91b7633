#include "ncstream/metrics.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ncstream/errors.hpp"

namespace ncstream::metrics {

MetricsCollector::MetricsCollector(const ScenarioConfig& cfg) : cfg_(cfg) {
    report_.strategy_name = to_string(cfg.strategy.kind);
    report_.detector_name = to_string(cfg.detector);
    report_.k = cfg.k;
}

MetricsCollector::PairCell& MetricsCollector::cell(uint32_t node, uint64_t gen) {
    while (window_base_ + window_.size() <= gen)
        window_.emplace_back(static_cast<size_t>(cfg_.N));
    return window_[gen - window_base_][node];
}

void MetricsCollector::on_honest_receive(uint32_t node, uint64_t gen, const CodedPacket& pkt) {
    if (gen < window_base_) return;  // deadline already passed
    auto& c = cell(node, gen);
    if (is_tainted(pkt)) {
        ++c.r_p;
        c.any_taint = true;
    }
}

void MetricsCollector::on_honest_transmit(uint32_t node, uint64_t gen, const CodedPacket& pkt) {
    ++report_.packets_sent;
    if (gen < window_base_) return;
    auto& c = cell(node, gen);
    const uint32_t index = ++c.tx_count;  // 1-based transmission index
    if (report_.p_tp.size() < index) report_.p_tp.resize(index);
    auto& bucket = report_.p_tp[index - 1];
    ++bucket.count;
    if (is_tainted(pkt)) ++bucket.tainted;
}

void MetricsCollector::judge_node(uint64_t gen, uint32_t node, bool reached_full_rank,
                                  size_t k_prime) {
    const auto& c = cell(node, gen);
    const bool success = reached_full_rank && !c.any_taint;
    ++judged_honest_;
    if (success) ++judged_success_;
    if (reached_full_rank) {
        eps_c_sum_ += (static_cast<double>(k_prime) - cfg_.k) / cfg_.k;
        ++eps_c_n_;
    }
    eps_p_sum_ += static_cast<double>(c.r_p) / cfg_.k;
    ++eps_p_n_;
}

void MetricsCollector::close_generation(uint64_t gen, double deadline_s) {
    GenerationCi row;
    row.generation = gen;
    row.deadline_s = deadline_s;
    row.ci = judged_honest_ == 0
                 ? 0.0
                 : static_cast<double>(judged_success_) / static_cast<double>(judged_honest_);
    report_.ci_per_generation.push_back(row);
    judged_success_ = 0;
    judged_honest_ = 0;
    while (window_base_ <= gen && !window_.empty()) {
        window_.pop_front();
        ++window_base_;
    }
    if (window_.empty()) window_base_ = gen + 1;
}

MetricsReport MetricsCollector::finalize() {
    double ci_sum = 0;
    double attack_sum = 0;
    uint64_t attack_n = 0;
    for (const auto& row : report_.ci_per_generation) {
        ci_sum += row.ci;
        if (row.deadline_s >= cfg_.attack_start && row.deadline_s < cfg_.attack_end) {
            attack_sum += row.ci;
            ++attack_n;
        }
    }
    const auto judged = static_cast<double>(report_.ci_per_generation.size());
    report_.ci_overall = judged == 0 ? 0.0 : ci_sum / judged;
    report_.ci_attack_window = attack_n == 0 ? 0.0 : attack_sum / static_cast<double>(attack_n);
    report_.eps_c = eps_c_n_ == 0 ? 0.0 : eps_c_sum_ / static_cast<double>(eps_c_n_);
    report_.eps_p = eps_p_n_ == 0 ? 0.0 : eps_p_sum_ / static_cast<double>(eps_p_n_);
    report_.eps_total = report_.eps_c + report_.eps_p;
    return report_;
}

std::string format6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    return out;
}

}  // namespace

void export_csv(const MetricsReport& report, const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    {
        auto out = open_out(dir / "ci_timeseries.csv");
        out << "generation_index,deadline_s,ci\n";
        for (const auto& row : report.ci_per_generation)
            out << row.generation << ',' << format6(row.deadline_s) << ',' << format6(row.ci)
                << '\n';
    }
    {
        auto out = open_out(dir / "p_tp.csv");
        out << "tx_index,probability,strategy,detector\n";
        for (size_t i = 0; i < report.p_tp.size(); ++i) {
            if (report.p_tp[i].count == 0) continue;
            out << (i + 1) << ',' << format6(report.p_tp[i].probability()) << ','
                << report.strategy_name << ',' << report.detector_name << '\n';
        }
    }
    {
        auto out = open_out(dir / "overhead.csv");
        out << "k,strategy,eps_c,eps_p,eps_total\n";
        out << report.k << ',' << report.strategy_name << ',' << format6(report.eps_c) << ','
            << format6(report.eps_p) << ',' << format6(report.eps_total) << '\n';
    }
}

}  // namespace ncstream::metrics
