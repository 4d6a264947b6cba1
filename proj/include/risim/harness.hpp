// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <json.hpp>
#include <string>
#include <vector>

#include "risim/ic.hpp"
#include "risim/maxmin.hpp"
#include "risim/scenario.hpp"

namespace risim {

enum class Method { AO, IC, ICAO };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::AO: return "AO";
        case Method::IC: return "IC";
        default: return "ICAO";
    }
}

inline Method method_from_string(const std::string& s) {
    if (s == "AO" || s == "ao") return Method::AO;
    if (s == "IC" || s == "ic") return Method::IC;
    if (s == "ICAO" || s == "icao" || s == "IC-AO") return Method::ICAO;
    throw std::invalid_argument("unknown method: " + s);
}

enum class SweepKind { TxPowerDbm, RisElements, MaxIters };

struct Experiment {
    SystemConfig base;
    SweepKind sweep = SweepKind::TxPowerDbm;
    std::vector<double> sweep_values{20, 25, 30, 35, 40};
    std::vector<Method> methods{Method::AO, Method::IC, Method::ICAO};
    int trials = 50;
    AoConfig ao;

    void validate() const {
        if (trials < 1) throw std::invalid_argument("trials must be >= 1");
        if (sweep_values.empty()) throw std::invalid_argument("sweep list must be nonempty");
        if (!std::is_sorted(sweep_values.begin(), sweep_values.end()))
            throw std::invalid_argument("sweep list must be sorted");
        if (methods.empty()) throw std::invalid_argument("methods must be nonempty");
    }
};

struct RunRecord {
    std::string method;
    double sweep_value = 0.0;
    int trial = 0;
    double min_sinr_db = 0.0;
    std::vector<double> per_link_sinrs_db;
    int outer_iterations = 0;
    int sdp_solves = 0;
    double wall_ms = 0.0;
    std::string status = "ok"; // ok | ic_unavailable | solver_fail

    bool operator==(const RunRecord&) const = default;
};

// Environment overrides for solver/algorithm knobs (documented in README).
inline double env_or(const char* name, double dflt) {
    if (const char* v = std::getenv(name)) return std::atof(v);
    return dflt;
}

inline AoConfig default_ao_config() {
    AoConfig ao;
    ao.max_outer_iters = static_cast<int>(env_or("RISIM_AO_MAX_OUTER", 20));
    ao.outer_tol = env_or("RISIM_AO_OUTER_TOL", 1e-3);
    ao.dinkelbach_tol = env_or("RISIM_DINKELBACH_TOL", 1e-3);
    ao.dinkelbach_max_iters = static_cast<int>(env_or("RISIM_DINKELBACH_MAX", 20));
    ao.num_randomizations = static_cast<int>(env_or("RISIM_RANDOMIZATIONS", 50));
    ao.sdp.tol_feas = env_or("RISIM_SDP_TOL_FEAS", 1e-6);
    ao.sdp.tol_gap = env_or("RISIM_SDP_TOL_GAP", 1e-5);
    ao.sdp.max_iters = static_cast<int>(env_or("RISIM_SDP_MAX_ITERS", 4000));
    return ao;
}

inline SystemConfig apply_sweep(SystemConfig cfg, SweepKind kind, double value) {
    switch (kind) {
        case SweepKind::TxPowerDbm:
            cfg.p_user_dbm = value;
            cfg.p_dev_dbm = value;
            break;
        case SweepKind::RisElements:
            cfg.N = static_cast<int>(value);
            break;
        case SweepKind::MaxIters:
            break; // applied to the AO config instead
    }
    return cfg;
}

inline RunRecord run_one(const SystemConfig& cfg, const Drop& drop, Method method,
                         AoConfig ao, double sweep_value, int trial,
                         std::uint64_t method_seed) {
    RunRecord rec;
    rec.method = to_string(method);
    rec.sweep_value = sweep_value;
    rec.trial = trial;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        SinrReport report;
        if (method == Method::IC || method == Method::ICAO) {
            if (!cfg.ic_available()) {
                rec.status = "ic_unavailable";
                return rec;
            }
            const StackedChannels st = stack(drop.channels, drop.cascaded);
            const IcRepresentation rep = build_representation(st);
            IcResult ic = ic_optimize(cfg, drop.channels, drop.cascaded, rep,
                                      ao.num_randomizations, ao.sdp, method_seed);
            if (method == Method::IC) {
                rec.outer_iterations = 1;
                rec.sdp_solves = ic.sdp_solves;
                report = evaluate(cfg, drop.channels, drop.cascaded, ic.phi, &ic.comb);
            } else {
                ao.init = AoInit::Given;
                ao.init_phi = ic.phi;
                ao.rand_seed = method_seed;
                AoResult r = run_ao(cfg, drop.channels, drop.cascaded, ao);
                rec.outer_iterations = static_cast<int>(r.trace.iters.size());
                rec.sdp_solves = ic.sdp_solves + r.trace.total_sdp_solves;
                report = evaluate(cfg, drop.channels, drop.cascaded, r.phi, &r.comb);
            }
        } else {
            ao.init = AoInit::Random;
            ao.rand_seed = method_seed;
            AoResult r = run_ao(cfg, drop.channels, drop.cascaded, ao);
            rec.outer_iterations = static_cast<int>(r.trace.iters.size());
            rec.sdp_solves = r.trace.total_sdp_solves;
            report = evaluate(cfg, drop.channels, drop.cascaded, r.phi, &r.comb);
        }
        rec.min_sinr_db = lin_to_db(report.min_sinr);
        for (Eigen::Index i = 0; i < report.sinr_user.size(); ++i)
            rec.per_link_sinrs_db.push_back(lin_to_db(report.sinr_user(i)));
        for (Eigen::Index i = 0; i < report.sinr_dev.size(); ++i)
            rec.per_link_sinrs_db.push_back(lin_to_db(report.sinr_dev(i)));
    } catch (const IllConditionedError&) {
        rec.status = "ic_unavailable";
    } catch (const UnderdeterminedError&) {
        rec.status = "ic_unavailable";
    } catch (const std::exception&) {
        rec.status = "solver_fail";
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rec;
}

// All requested methods see the same drop per (sweep value, trial).
inline std::vector<RunRecord> run_experiment(const Experiment& e) {
    e.validate();
    std::vector<RunRecord> out;
    for (std::size_t si = 0; si < e.sweep_values.size(); ++si) {
        const double sv = e.sweep_values[si];
        SystemConfig cfg = apply_sweep(e.base, e.sweep, sv);
        AoConfig ao = e.ao;
        if (e.sweep == SweepKind::MaxIters) ao.max_outer_iters = static_cast<int>(sv);
        for (int trial = 0; trial < e.trials; ++trial) {
            const std::uint64_t drop_id = si * 1000003ULL + static_cast<std::uint64_t>(trial);
            const Drop drop = draw_drop(cfg, drop_id);
            // one seed per drop so ICAO's internal IC stage matches the IC
            // record exactly on paired trials
            const std::uint64_t mseed = splitmix64(cfg.seed ^ splitmix64(drop_id));
            for (Method m : e.methods) out.push_back(run_one(cfg, drop, m, ao, sv, trial, mseed));
        }
    }
    // canonical order, schedule-independent
    std::sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) {
        if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
        if (a.trial != b.trial) return a.trial < b.trial;
        return a.method < b.method;
    });
    return out;
}

struct SummaryRow {
    std::string method;
    double sweep_value = 0.0;
    int count = 0;
    int skipped = 0; // non-ok records in the group
    double mean_min_sinr_db = 0.0;   // linear average, then dB
    double median_min_sinr_db = 0.0;
    double mean_outer_iterations = 0.0;
};

inline std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
    std::map<std::pair<std::string, double>, std::vector<const RunRecord*>> groups;
    for (const auto& r : records) groups[{r.method, r.sweep_value}].push_back(&r);
    std::vector<SummaryRow> rows;
    for (const auto& [key, recs] : groups) {
        SummaryRow row;
        row.method = key.first;
        row.sweep_value = key.second;
        std::vector<double> lin;
        double iter_sum = 0.0;
        for (const RunRecord* r : recs) {
            if (r->status != "ok") {
                ++row.skipped;
                continue;
            }
            lin.push_back(db_to_lin(r->min_sinr_db));
            iter_sum += r->outer_iterations;
            ++row.count;
        }
        if (row.count == 0 && row.skipped == 0) continue;
        if (row.count > 0) {
            double mean = 0.0;
            for (double v : lin) mean += v;
            mean /= row.count;
            row.mean_min_sinr_db = lin_to_db(mean);
            std::vector<double> sorted = lin;
            std::sort(sorted.begin(), sorted.end());
            const std::size_t h = sorted.size() / 2;
            const double med = (sorted.size() % 2) ? sorted[h]
                                                   : 0.5 * (sorted[h - 1] + sorted[h]);
            row.median_min_sinr_db = lin_to_db(med);
            row.mean_outer_iterations = iter_sum / row.count;
        }
        rows.push_back(row);
    }
    return rows;
}

// --- emission -------------------------------------------------------------

inline const char* kCsvHeader =
    "method,sweep_value,trial,min_sinr_db,outer_iterations,sdp_solves,wall_ms,status";

inline void emit_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    os << kCsvHeader << '\n';
    os.precision(12);
    for (const auto& r : records)
        os << r.method << ',' << r.sweep_value << ',' << r.trial << ',' << r.min_sinr_db
           << ',' << r.outer_iterations << ',' << r.sdp_solves << ',' << r.wall_ms << ','
           << r.status << '\n';
}

inline nlohmann::json to_json(const RunRecord& r) {
    return {{"method", r.method},
            {"sweep_value", r.sweep_value},
            {"trial", r.trial},
            {"min_sinr_db", r.min_sinr_db},
            {"per_link_sinrs_db", r.per_link_sinrs_db},
            {"outer_iterations", r.outer_iterations},
            {"sdp_solves", r.sdp_solves},
            {"wall_ms", r.wall_ms},
            {"status", r.status}};
}

inline RunRecord record_from_json(const nlohmann::json& j) {
    RunRecord r;
    r.method = j.at("method").get<std::string>();
    r.sweep_value = j.at("sweep_value").get<double>();
    r.trial = j.at("trial").get<int>();
    r.min_sinr_db = j.at("min_sinr_db").get<double>();
    r.per_link_sinrs_db = j.at("per_link_sinrs_db").get<std::vector<double>>();
    r.outer_iterations = j.at("outer_iterations").get<int>();
    r.sdp_solves = j.at("sdp_solves").get<int>();
    r.wall_ms = j.at("wall_ms").get<double>();
    r.status = j.at("status").get<std::string>();
    return r;
}

inline void emit_json(std::ostream& os, const std::vector<RunRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) arr.push_back(to_json(r));
    os << arr.dump(2) << '\n';
}

inline std::vector<RunRecord> load_records_json(std::istream& is) {
    nlohmann::json arr;
    is >> arr;
    std::vector<RunRecord> out;
    for (const auto& j : arr) out.push_back(record_from_json(j));
    return out;
}

inline void emit_records(const std::vector<RunRecord>& records, const std::string& path,
                         const std::string& format) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    if (format == "csv")
        emit_csv(os, records);
    else if (format == "json")
        emit_json(os, records);
    else
        throw std::invalid_argument("unknown format: " + format);
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline nlohmann::json trace_to_json(const AoTrace& t) {
    nlohmann::json iters = nlohmann::json::array();
    for (const auto& it : t.iters)
        iters.push_back({{"min_sinr", it.min_sinr},
                         {"dinkelbach_iters", it.dinkelbach_iters},
                         {"sdp_solves", it.sdp_solves},
                         {"wall_ms", it.wall_ms}});
    return {{"iters", iters},
            {"total_sdp_solves", t.total_sdp_solves},
            {"sdr_upper_bound", t.sdr_upper_bound}};
}

} // namespace risim
