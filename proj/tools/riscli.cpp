// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: `run` executes a Monte-Carlo sweep and writes the
// per-trial records; `summarize` aggregates a record file.

#include <CLI11.hpp>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "risim/harness.hpp"

using namespace risim;

static std::vector<Method> parse_methods(const std::string& list) {
    std::vector<Method> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(method_from_string(tok));
    return out;
}

static std::vector<RunRecord> load_records(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        std::vector<RunRecord> out;
        std::string line;
        std::getline(is, line); // header
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            RunRecord r;
            std::stringstream ss(line);
            std::string f;
            std::getline(ss, r.method, ',');
            std::getline(ss, f, ',');
            r.sweep_value = std::stod(f);
            std::getline(ss, f, ',');
            r.trial = std::stoi(f);
            std::getline(ss, f, ',');
            r.min_sinr_db = std::stod(f);
            std::getline(ss, f, ',');
            r.outer_iterations = std::stoi(f);
            std::getline(ss, f, ',');
            r.sdp_solves = std::stoi(f);
            std::getline(ss, f, ',');
            r.wall_ms = std::stod(f);
            std::getline(ss, r.status, ',');
            out.push_back(r);
        }
        return out;
    }
    return load_records_json(is);
}

static void print_summary(const std::vector<SummaryRow>& rows) {
    std::cout << std::left << std::setw(8) << "method" << std::setw(12) << "sweep"
              << std::setw(8) << "count" << std::setw(9) << "skipped" << std::setw(16)
              << "mean_sinr_db" << std::setw(16) << "median_sinr_db" << std::setw(12)
              << "mean_iters" << '\n';
    for (const auto& r : rows) {
        std::cout << std::left << std::setw(8) << r.method << std::setw(12) << r.sweep_value
                  << std::setw(8) << r.count << std::setw(9) << r.skipped;
        if (r.count > 0)
            std::cout << std::setw(16) << std::setprecision(4) << std::fixed
                      << r.mean_min_sinr_db << std::setw(16) << r.median_min_sinr_db
                      << std::setw(12) << std::setprecision(2) << r.mean_outer_iterations;
        else
            std::cout << std::setw(16) << "-" << std::setw(16) << "-" << std::setw(12) << "-";
        std::cout.unsetf(std::ios::fixed);
        std::cout << '\n';
    }
}

int main(int argc, char** argv) {
    CLI::App app{"RIS phase-shift optimization experiments (AO / IC / IC-AO)"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a Monte-Carlo sweep");
    std::string config_path, sweep = "power", methods_str = "AO,IC,ICAO";
    std::string out_path = "records.json", format = "json", sweep_list;
    int trials = 50;
    std::uint64_t seed = 1;
    run->add_option("--config", config_path, "system config file (key=value)");
    run->add_option("--sweep", sweep, "sweep kind: power|elements|iters")
        ->check(CLI::IsMember({"power", "elements", "iters"}));
    run->add_option("--values", sweep_list, "comma-separated sweep values (overrides default)");
    run->add_option("--methods", methods_str, "comma-separated subset of AO,IC,ICAO");
    run->add_option("--trials", trials, "Monte-Carlo trials per sweep point");
    run->add_option("--seed", seed, "master RNG seed");
    run->add_option("--out", out_path, "output path");
    run->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    // summarize
    auto* summ = app.add_subcommand("summarize", "aggregate a record file");
    std::string in_path;
    summ->add_option("--in", in_path, "records file (.json or .csv)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run)) {
            Experiment e;
            if (!config_path.empty()) e.base = load_config_file(config_path);
            e.base.seed = seed;
            e.trials = trials;
            e.methods = parse_methods(methods_str);
            e.ao = default_ao_config();
            if (sweep == "power") {
                e.sweep = SweepKind::TxPowerDbm;
                e.sweep_values = {20, 25, 30, 35, 40};
            } else if (sweep == "elements") {
                e.sweep = SweepKind::RisElements;
                e.sweep_values = {40, 60, 64, 80};
            } else {
                e.sweep = SweepKind::MaxIters;
                e.sweep_values = {1, 2, 3, 5, 10};
            }
            if (!sweep_list.empty()) {
                e.sweep_values.clear();
                std::stringstream ss(sweep_list);
                std::string tok;
                while (std::getline(ss, tok, ',')) e.sweep_values.push_back(std::stod(tok));
            }

            const auto records = run_experiment(e);
            emit_records(records, out_path, format);
            print_summary(summarize(records));
            for (const auto& r : records)
                if (r.status != "ok") return 2;
            return 0;
        }
        if (app.got_subcommand(summ)) {
            print_summary(summarize(load_records(in_path)));
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
