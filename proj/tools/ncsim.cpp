// ncsim: batch experiment runner for the network-coded push streaming
// simulator. Subcommands: model (closed-form curves), simulate (one
// scenario), sweep (axis x seeds grid). Machine-readable summaries go to
// stdout, progress to stderr.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "ncstream/errors.hpp"
#include "ncstream/metrics.hpp"
#include "ncstream/model.hpp"
#include "ncstream/scenario.hpp"
#include "ncstream/sim.hpp"
#include "ncstream/version.hpp"

namespace fs = std::filesystem;
using ncstream::ConfigError;
using ncstream::ScenarioConfig;
using ncstream::metrics::format6;

namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ncstream::Error("cannot write " + p.string());
    return out;
}

void write_manifest(const fs::path& dir, const std::string& command, const ScenarioConfig& cfg,
                    uint64_t trace_hash) {
    auto out = open_out(dir / "manifest.txt");
    out << "version = " << ncstream::kVersion << "\n"
        << "command = " << command << "\n"
        << "trace_hash = " << trace_hash << "\n\n"
        << serialize_scenario(cfg);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

// ---- model -------------------------------------------------------------

struct ModelArgs {
    ncstream::model::ModelParams params;
    int i_max = 20;
    std::string k_list = "10,25,50,100,200";
    std::string out_dir = "model_out";
};

int cmd_model(const ModelArgs& a) {
    a.params.validate();
    fs::create_directories(a.out_dir);
    {
        auto out = open_out(fs::path(a.out_dir) / "pgp_vs_i.csv");
        out << "i,p_gp\n";
        for (int i = 1; i <= a.i_max; ++i)
            out << i << ',' << format6(ncstream::model::p_gp(i, a.params)) << '\n';
    }
    {
        auto out = open_out(fs::path(a.out_dir) / "pclean_vs_k.csv");
        out << "k,p_fclean,p_rclean\n";
        for (const auto& ks : split_csv(a.k_list)) {
            auto p = a.params;
            p.k = std::stoi(ks);
            out << p.k << ',' << format6(ncstream::model::p_fclean(p)) << ','
                << format6(ncstream::model::p_rclean(p)) << '\n';
        }
    }
    {
        auto out = open_out(fs::path(a.out_dir) / "pmn.csv");
        out << "x,p_mn\n";
        for (int x = 0; x <= a.params.n; ++x)
            out << x << ','
                << format6(ncstream::model::p_mn(a.params.N, a.params.N_m, a.params.n, x)) << '\n';
    }
    std::cout << "model N=" << a.params.N << " N_m=" << a.params.N_m << " n=" << a.params.n
              << " p_poll=" << a.params.p_poll << " out=" << a.out_dir << "\n";
    return 0;
}

// ---- simulate ----------------------------------------------------------

ScenarioConfig load_with_overrides(const std::string& scenario_path, int64_t seed,
                                   const std::vector<std::string>& sets) {
    ScenarioConfig cfg = ncstream::load_scenario(scenario_path);
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        ncstream::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
    cfg.validate();
    return cfg;
}

int cmd_simulate(const std::string& scenario_path, int64_t seed, const std::string& out_dir,
                 const std::vector<std::string>& sets, const std::string& command) {
    const ScenarioConfig cfg = load_with_overrides(scenario_path, seed, sets);
    std::cerr << "simulate: N=" << cfg.N << " k=" << cfg.k << " strategy="
              << to_string(cfg.strategy.kind) << " detector=" << to_string(cfg.detector)
              << " seed=" << cfg.seed << "\n";
    const auto report = ncstream::run_scenario(cfg);
    fs::create_directories(out_dir);
    ncstream::metrics::export_csv(report, out_dir);
    write_manifest(out_dir, command, cfg, report.trace_hash);
    std::cout << "ci_overall=" << format6(report.ci_overall)
              << " ci_attack_window=" << format6(report.ci_attack_window)
              << " eps_c=" << format6(report.eps_c) << " eps_p=" << format6(report.eps_p)
              << " eps_total=" << format6(report.eps_total) << " detections=" << report.detections
              << "\n";
    return 0;
}

// ---- sweep -------------------------------------------------------------

struct SweepSpec {
    std::string scenario;
    std::string axis;
    std::vector<std::string> values;
    std::vector<uint64_t> seeds;
};

SweepSpec load_sweep_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open sweep spec");
    SweepSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string body = line;
        body.erase(0, body.find_first_not_of(" \t\r"));
        if (body.empty()) continue;
        body.erase(body.find_last_not_of(" \t\r") + 1);
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        std::string key = body.substr(0, eq);
        std::string value = body.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        if (key == "scenario")
            spec.scenario = value;
        else if (key == "axis")
            spec.axis = value;
        else if (key == "values")
            spec.values = split_csv(value);
        else if (key == "seeds") {
            for (const auto& s : split_csv(value)) spec.seeds.push_back(std::stoull(s));
        } else
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
    return spec;
}

int cmd_sweep(const SweepSpec& spec, const std::string& out_dir, unsigned jobs,
              const std::string& command) {
    if (spec.scenario.empty()) throw ConfigError("sweep: no base scenario given");
    if (spec.axis.empty() || spec.values.empty() || spec.seeds.empty())
        throw ConfigError("sweep: axis, values and seeds must all be non-empty");

    struct Cell {
        std::string value;
        uint64_t seed;
        ScenarioConfig cfg;
    };
    std::vector<Cell> cells;
    for (const auto& value : spec.values) {
        for (const uint64_t seed : spec.seeds) {
            ScenarioConfig cfg = ncstream::load_scenario(spec.scenario);
            ncstream::apply_override(cfg, spec.axis, value);
            cfg.seed = seed;
            cfg.validate();
            cells.push_back({value, seed, std::move(cfg)});
        }
    }

    std::vector<std::future<ncstream::metrics::MetricsReport>> futures(cells.size());
    std::vector<std::string> errors(cells.size());
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
            std::promise<ncstream::metrics::MetricsReport> p;
            futures[i] = p.get_future();
            try {
                p.set_value(ncstream::run_scenario(cells[i].cfg));
                std::cerr << "sweep cell " << spec.axis << "=" << cells[i].value
                          << " seed=" << cells[i].seed << " done\n";
            } catch (const std::exception& e) {
                errors[i] = e.what();
                p.set_value({});
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<size_t>(jobs, cells.size()); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    fs::create_directories(out_dir);
    auto out = open_out(fs::path(out_dir) / "sweep.csv");
    out << "axis,value,seed,ci_overall,ci_attack_window,eps_c,eps_p,eps_total\n";
    int failures = 0;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (!errors[i].empty()) {
            std::cerr << "sweep cell " << spec.axis << "=" << cells[i].value
                      << " seed=" << cells[i].seed << " failed: " << errors[i] << "\n";
            ++failures;
            continue;
        }
        const auto r = futures[i].get();
        out << spec.axis << ',' << cells[i].value << ',' << cells[i].seed << ','
            << format6(r.ci_overall) << ',' << format6(r.ci_attack_window) << ','
            << format6(r.eps_c) << ',' << format6(r.eps_p) << ',' << format6(r.eps_total) << '\n';
    }
    {
        auto manifest = open_out(fs::path(out_dir) / "manifest.txt");
        manifest << "version = " << ncstream::kVersion << "\n"
                 << "command = " << command << "\n"
                 << "scenario = " << spec.scenario << "\n"
                 << "axis = " << spec.axis << "\n";
    }
    std::cout << "sweep cells=" << cells.size() << " failures=" << failures
              << " out=" << out_dir << "\n";
    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(ncstream::kVersion) +
                 " - pollution-resilient network-coded push streaming simulator"};
    app.require_subcommand(1);

    // model
    ModelArgs margs;
    auto* model = app.add_subcommand("model", "evaluate the closed-form propagation model");
    model->add_option("--N", margs.params.N, "total nodes");
    model->add_option("--N-m", margs.params.N_m, "malicious nodes");
    model->add_option("--n", margs.params.n, "uploaders per reference node");
    model->add_option("--k", margs.params.k, "generation size for the per-round curve");
    model->add_option("--p-poll", margs.params.p_poll, "pollution probability");
    model->add_option("--p-r", margs.params.p_r, "recombination probability");
    model->add_option("--i-max", margs.i_max, "largest round index for pgp_vs_i.csv");
    model->add_option("--k-list", margs.k_list, "comma list of k for pclean_vs_k.csv");
    model->add_option("--out", margs.out_dir, "output directory");

    // simulate
    std::string scenario_path;
    int64_t seed = -1;
    std::string out_dir = "sim_out";
    std::vector<std::string> sets;
    auto* simulate = app.add_subcommand("simulate", "run one scenario");
    simulate->add_option("--scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--seed", seed, "seed override (flag wins over the file)");
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--set", sets, "key=value override, repeatable");

    // sweep
    std::string sweep_spec_path, axis, values_csv, seeds_csv;
    std::string sweep_out = "sweep_out";
    unsigned jobs = 0;
    auto* sweep = app.add_subcommand("sweep", "run an axis x seeds grid");
    sweep->add_option("--spec", sweep_spec_path, "sweep spec file (scenario/axis/values/seeds)");
    sweep->add_option("--scenario", scenario_path, "base scenario (overrides spec)");
    sweep->add_option("--axis", axis, "axis name (overrides spec)");
    sweep->add_option("--values", values_csv, "comma list of axis values (overrides spec)");
    sweep->add_option("--seeds", seeds_csv, "comma list of seeds (overrides spec)");
    sweep->add_option("--out", sweep_out, "output directory");
    sweep->add_option("--jobs", jobs, "parallel runs (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::string command;
    for (int i = 0; i < argc; ++i) {
        if (i) command += ' ';
        command += argv[i];
    }

    try {
        if (model->parsed()) return cmd_model(margs);
        if (simulate->parsed()) return cmd_simulate(scenario_path, seed, out_dir, sets, command);
        if (sweep->parsed()) {
            SweepSpec spec;
            if (!sweep_spec_path.empty()) spec = load_sweep_spec(sweep_spec_path);
            if (!scenario_path.empty()) spec.scenario = scenario_path;
            if (!axis.empty()) spec.axis = axis;
            if (!values_csv.empty()) spec.values = split_csv(values_csv);
            if (!seeds_csv.empty()) {
                spec.seeds.clear();
                for (const auto& s : split_csv(seeds_csv)) spec.seeds.push_back(std::stoull(s));
            }
            return cmd_sweep(spec, sweep_out, jobs, command);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
