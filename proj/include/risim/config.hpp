// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "risim/common.hpp"

namespace risim {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

enum class LinkClass {
    UserRis,
    TxdRis,
    RisRxd,
    RisBs,
    UserBs,
    TxdBs,
    UserRxd,
    TxdRxd,
};

struct Geometry {
    Position bs_pos{0.0, 0.0};
    Position ris_pos{100.0, 30.0};
    Position tx_cluster_center{200.0, 0.0};
    Position rx_cluster_center{50.0, 0.0};
    double cluster_radius = 25.0;
    double beta0_db = -30.0;
    double d0 = 1.0;
    // Path loss exponents per link class (RIS-adjacent 2.2, to-BS direct 4,
    // device-side direct 5).
    std::array<double, 8> pathloss_exponents{2.2, 2.2, 2.2, 2.2, 4.0, 4.0, 5.0, 5.0};

    double exponent(LinkClass lc) const { return pathloss_exponents[static_cast<int>(lc)]; }

    void validate() const {
        if (cluster_radius < 0.0) throw std::invalid_argument("cluster_radius must be >= 0");
        for (double e : pathloss_exponents)
            if (e < 2.0) throw std::invalid_argument("path loss exponents must be >= 2");
    }
};

struct SystemConfig {
    int M = 8;  // BS antennas
    int K = 2;  // cellular users
    int L = 2;  // D2D pairs
    int N = 64; // RIS elements
    double p_user_dbm = 30.0;
    double p_dev_dbm = 30.0;
    double noise_psd_dbm = -169.0; // dBm/Hz
    double bandwidth_hz = 1e6;
    std::uint64_t seed = 1;
    Geometry geometry;

    void validate() const {
        if (M < 1 || K < 1 || L < 1 || N < 1)
            throw std::invalid_argument("dimensions M, K, L, N must be >= 1");
        if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
        if (!std::isfinite(p_user_dbm) || !std::isfinite(p_dev_dbm) ||
            !std::isfinite(noise_psd_dbm))
            throw std::invalid_argument("powers must be finite");
        geometry.validate();
    }

    // Linear-scale quantities; all downstream code works in Watts.
    double p_user() const { return dbm_to_watt(p_user_dbm); }
    double p_dev() const { return dbm_to_watt(p_dev_dbm); }
    double noise_dbm() const { return noise_psd_dbm + 10.0 * std::log10(bandwidth_hz); }
    double sigma2_bs() const { return dbm_to_watt(noise_dbm()); }
    double sigma2_dev() const { return dbm_to_watt(noise_dbm()); }

    bool ic_available() const { return N >= L * (K + L); }
};

// Plain key=value config file; '#' starts a comment. Unknown keys are an error.
inline SystemConfig load_config(std::istream& in) {
    SystemConfig cfg;
    std::map<std::string, double*> dkeys = {
        {"p_user_dbm", &cfg.p_user_dbm},
        {"p_dev_dbm", &cfg.p_dev_dbm},
        {"noise_psd_dbm", &cfg.noise_psd_dbm},
        {"bandwidth_hz", &cfg.bandwidth_hz},
        {"bs_x", &cfg.geometry.bs_pos.x},
        {"bs_y", &cfg.geometry.bs_pos.y},
        {"ris_x", &cfg.geometry.ris_pos.x},
        {"ris_y", &cfg.geometry.ris_pos.y},
        {"tx_cluster_x", &cfg.geometry.tx_cluster_center.x},
        {"tx_cluster_y", &cfg.geometry.tx_cluster_center.y},
        {"rx_cluster_x", &cfg.geometry.rx_cluster_center.x},
        {"rx_cluster_y", &cfg.geometry.rx_cluster_center.y},
        {"cluster_radius", &cfg.geometry.cluster_radius},
        {"beta0_db", &cfg.geometry.beta0_db},
        {"d0", &cfg.geometry.d0},
        {"eta_user_ris", &cfg.geometry.pathloss_exponents[0]},
        {"eta_txd_ris", &cfg.geometry.pathloss_exponents[1]},
        {"eta_ris_rxd", &cfg.geometry.pathloss_exponents[2]},
        {"eta_ris_bs", &cfg.geometry.pathloss_exponents[3]},
        {"eta_user_bs", &cfg.geometry.pathloss_exponents[4]},
        {"eta_txd_bs", &cfg.geometry.pathloss_exponents[5]},
        {"eta_user_rxd", &cfg.geometry.pathloss_exponents[6]},
        {"eta_txd_rxd", &cfg.geometry.pathloss_exponents[7]},
    };
    std::map<std::string, int*> ikeys = {
        {"M", &cfg.M}, {"K", &cfg.K}, {"L", &cfg.L}, {"N", &cfg.N}};

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            // blank or comment-only line
            std::istringstream check(line);
            std::string tok;
            if (check >> tok)
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": expected key=value");
            continue;
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "seed") {
            cfg.seed = std::stoull(val);
        } else if (auto it = ikeys.find(key); it != ikeys.end()) {
            *it->second = std::stoi(val);
        } else if (auto dt = dkeys.find(key); dt != dkeys.end()) {
            *dt->second = std::stod(val);
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline SystemConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return load_config(in);
}

} // namespace risim
