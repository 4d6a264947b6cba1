// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "risim/channels.hpp"
#include "risim/config.hpp"
#include "risim/rng.hpp"

namespace risim {

struct PositionSet {
    std::vector<Position> users; // K
    std::vector<Position> txd;   // L
    std::vector<Position> rxd;   // L
};

inline Position draw_in_disk(const Position& center, double radius, RandomStream& rng) {
    // uniform over the disk: r = R*sqrt(u)
    const double r = radius * std::sqrt(rng.uniform());
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

inline PositionSet draw_positions(const SystemConfig& cfg, RandomStream& rng) {
    const Geometry& g = cfg.geometry;
    PositionSet p;
    p.users.reserve(cfg.K);
    p.txd.reserve(cfg.L);
    p.rxd.reserve(cfg.L);
    for (int k = 0; k < cfg.K; ++k)
        p.users.push_back(draw_in_disk(g.tx_cluster_center, g.cluster_radius, rng));
    for (int l = 0; l < cfg.L; ++l)
        p.txd.push_back(draw_in_disk(g.tx_cluster_center, g.cluster_radius, rng));
    for (int l = 0; l < cfg.L; ++l)
        p.rxd.push_back(draw_in_disk(g.rx_cluster_center, g.cluster_radius, rng));
    return p;
}

// beta = beta0 * (d/d0)^(-eta), linear scale
inline double pathloss(const Geometry& g, const Position& a, const Position& b,
                       LinkClass lc) {
    const double d = distance(a, b);
    if (!(d > 0.0)) throw std::invalid_argument("pathloss: collocated nodes (zero distance)");
    return db_to_lin(g.beta0_db) * std::pow(d / g.d0, -g.exponent(lc));
}

// Rayleigh small-scale fading: i.i.d. CN(0, beta) entries. `fader` can be
// replaced to plug in a different fading law.
using FadingHook = cplx (*)(RandomStream&);
inline cplx rayleigh_fader(RandomStream& rng) { return rng.cnormal(); }

inline ChannelSet draw_channels(const SystemConfig& cfg, const PositionSet& pos,
                                RandomStream& rng, FadingHook fader = rayleigh_fader) {
    if (static_cast<int>(pos.users.size()) != cfg.K ||
        static_cast<int>(pos.txd.size()) != cfg.L ||
        static_cast<int>(pos.rxd.size()) != cfg.L)
        throw DimensionError("draw_channels: positions inconsistent with config");

    const Geometry& g = cfg.geometry;
    ChannelSet ch;

    auto fill = [&](CMat& m, Eigen::Index rows, Eigen::Index cols, auto beta_of) {
        m.resize(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                m(i, j) = std::sqrt(beta_of(i, j)) * fader(rng);
    };

    // draw order is fixed; determinism depends on it
    fill(ch.H_RB, cfg.M, cfg.N, [&](Eigen::Index, Eigen::Index) {
        return pathloss(g, g.ris_pos, g.bs_pos, LinkClass::RisBs);
    });
    fill(ch.H_UD, cfg.L, cfg.K, [&](Eigen::Index l, Eigen::Index k) {
        return pathloss(g, pos.users[k], pos.rxd[l], LinkClass::UserRxd);
    });
    fill(ch.H_DD, cfg.L, cfg.L, [&](Eigen::Index l, Eigen::Index lp) {
        return pathloss(g, pos.txd[lp], pos.rxd[l], LinkClass::TxdRxd);
    });
    fill(ch.H_UB, cfg.M, cfg.K, [&](Eigen::Index, Eigen::Index k) {
        return pathloss(g, pos.users[k], g.bs_pos, LinkClass::UserBs);
    });
    fill(ch.H_DB, cfg.M, cfg.L, [&](Eigen::Index, Eigen::Index l) {
        return pathloss(g, pos.txd[l], g.bs_pos, LinkClass::TxdBs);
    });
    fill(ch.H_RD, cfg.L, cfg.N, [&](Eigen::Index l, Eigen::Index) {
        return pathloss(g, g.ris_pos, pos.rxd[l], LinkClass::RisRxd);
    });
    fill(ch.H_UR, cfg.N, cfg.K, [&](Eigen::Index, Eigen::Index k) {
        return pathloss(g, pos.users[k], g.ris_pos, LinkClass::UserRis);
    });
    fill(ch.H_DR, cfg.N, cfg.L, [&](Eigen::Index, Eigen::Index l) {
        return pathloss(g, pos.txd[l], g.ris_pos, LinkClass::TxdRis);
    });

    ch.check_dims(cfg.M, cfg.K, cfg.L, cfg.N);
    return ch;
}

// One network drop: positions + channels + cascaded channels, derived from
// (seed, trial) only.
struct Drop {
    PositionSet positions;
    ChannelSet channels;
    CascadedChannels cascaded;
};

inline Drop draw_drop(const SystemConfig& cfg, std::uint64_t trial) {
    RandomStream root(cfg.seed);
    RandomStream rng = root.substream(trial);
    Drop d;
    d.positions = draw_positions(cfg, rng);
    d.channels = draw_channels(cfg, d.positions, rng);
    d.cascaded = build_cascaded(d.channels);
    return d;
}

} // namespace risim
