// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "risim/scenario.hpp"

using namespace risim;

TEST_CASE("draw_positions: radius 0 puts everything at the cluster centers") {
    SystemConfig cfg;
    cfg.K = 3;
    cfg.L = 2;
    cfg.geometry.cluster_radius = 0.0;
    RandomStream rng(42);
    const PositionSet p = draw_positions(cfg, rng);
    for (const auto& u : p.users) {
        CHECK(u.x == doctest::Approx(cfg.geometry.tx_cluster_center.x));
        CHECK(u.y == doctest::Approx(cfg.geometry.tx_cluster_center.y));
    }
    for (const auto& d : p.rxd) {
        CHECK(d.x == doctest::Approx(cfg.geometry.rx_cluster_center.x));
        CHECK(d.y == doctest::Approx(cfg.geometry.rx_cluster_center.y));
    }
}

TEST_CASE("draw_positions: deterministic given the seed") {
    SystemConfig cfg;
    RandomStream a(987), b(987);
    const PositionSet p1 = draw_positions(cfg, a);
    const PositionSet p2 = draw_positions(cfg, b);
    for (int k = 0; k < cfg.K; ++k) {
        CHECK(p1.users[k].x == p2.users[k].x);
        CHECK(p1.users[k].y == p2.users[k].y);
    }
    for (int l = 0; l < cfg.L; ++l) {
        CHECK(p1.txd[l].x == p2.txd[l].x);
        CHECK(p1.rxd[l].y == p2.rxd[l].y);
    }
}

TEST_CASE("draw_in_disk: mean distance from center is 2R/3") {
    // E[r] for a uniform disk = int r * (2r/R^2) dr = 2R/3
    const double R = 25.0;
    RandomStream rng(7);
    const int n = 100000;
    double sum = 0.0;
    const Position c{10.0, -3.0};
    for (int i = 0; i < n; ++i) {
        const Position p = draw_in_disk(c, R, rng);
        sum += distance(p, c);
    }
    const double mean = sum / n;
    CHECK(mean == doctest::Approx(2.0 * R / 3.0).epsilon(0.01));
}

TEST_CASE("pathloss: reference distance and power law") {
    Geometry g; // beta0 = -30 dB at d0 = 1 m
    const Position a{0.0, 0.0};
    CHECK(pathloss(g, a, {1.0, 0.0}, LinkClass::UserBs) == doctest::Approx(1e-3));
    // eta = 2.2 at d = 10
    CHECK(pathloss(g, a, {10.0, 0.0}, LinkClass::UserRis) ==
          doctest::Approx(1e-3 * std::pow(10.0, -2.2)));
    // doubling d with eta = 4 divides beta by 16
    const double b1 = pathloss(g, a, {7.0, 0.0}, LinkClass::TxdBs);
    const double b2 = pathloss(g, a, {14.0, 0.0}, LinkClass::TxdBs);
    CHECK(b1 / b2 == doctest::Approx(16.0).epsilon(1e-12));
    CHECK_THROWS(pathloss(g, a, a, LinkClass::UserBs));
}

TEST_CASE("draw_channels: shapes match the channel table") {
    SystemConfig cfg;
    cfg.M = 8;
    cfg.K = 2;
    cfg.L = 2;
    cfg.N = 64;
    RandomStream rng(cfg.seed);
    const PositionSet pos = draw_positions(cfg, rng);
    const ChannelSet ch = draw_channels(cfg, pos, rng);
    CHECK(ch.H_RB.rows() == 8);
    CHECK(ch.H_RB.cols() == 64);
    CHECK(ch.H_UR.rows() == 64);
    CHECK(ch.H_UR.cols() == 2);
    CHECK(ch.H_DD.rows() == 2);
    CHECK(ch.H_DD.cols() == 2);
    CHECK(ch.H_UD.rows() == 2);
    CHECK(ch.H_RD.cols() == 64);
    CHECK(ch.H_DR.rows() == 64);
    CHECK(ch.H_UB.rows() == 8);
    CHECK(ch.H_DB.cols() == 2);
}

TEST_CASE("draw_channels: per-entry variance equals the path loss") {
    // geometry with unit distances so every beta is analytic
    SystemConfig cfg;
    cfg.M = 4;
    cfg.K = 100;
    cfg.L = 1;
    cfg.N = 250;
    cfg.geometry.bs_pos = {0.0, 0.0};
    cfg.geometry.ris_pos = {1.0, 0.0};
    cfg.geometry.tx_cluster_center = {0.0, 1.0};
    cfg.geometry.rx_cluster_center = {1.0, 1.0};
    cfg.geometry.cluster_radius = 0.0;
    cfg.geometry.beta0_db = 0.0;
    RandomStream rng(11);
    const PositionSet pos = draw_positions(cfg, rng);
    const ChannelSet ch = draw_channels(cfg, pos, rng);

    // H_UR: N x K = 25000 i.i.d. samples at distance sqrt(2), eta = 2.2
    const double beta = std::pow(std::sqrt(2.0), -2.2);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < ch.H_UR.cols(); ++j)
        for (Eigen::Index i = 0; i < ch.H_UR.rows(); ++i) acc += std::norm(ch.H_UR(i, j));
    const double var = acc / (ch.H_UR.size());
    CHECK(var / beta == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("draw_drop: bit-identical for the same seed and trial") {
    SystemConfig cfg;
    cfg.M = 2;
    cfg.N = 8;
    cfg.seed = 99;
    const Drop d1 = draw_drop(cfg, 3);
    const Drop d2 = draw_drop(cfg, 3);
    CHECK(d1.channels.H_RB == d2.channels.H_RB);
    CHECK(d1.channels.H_DR == d2.channels.H_DR);
    const Drop d3 = draw_drop(cfg, 4);
    CHECK(d1.channels.H_RB != d3.channels.H_RB);
}

TEST_CASE("config: invariants and file loading") {
    SystemConfig bad;
    bad.M = 0;
    CHECK_THROWS(bad.validate());
    bad = SystemConfig{};
    bad.bandwidth_hz = 0.0;
    CHECK_THROWS(bad.validate());

    std::istringstream in("M = 4\nK=1\nL=1\nN=16\np_user_dbm = 20 # comment\nseed = 7\n");
    const SystemConfig cfg = load_config(in);
    CHECK(cfg.M == 4);
    CHECK(cfg.N == 16);
    CHECK(cfg.p_user_dbm == doctest::Approx(20.0));
    CHECK(cfg.seed == 7);
    // untouched fields keep the defaults
    CHECK(cfg.geometry.ris_pos.x == doctest::Approx(100.0));
    CHECK(cfg.noise_psd_dbm == doctest::Approx(-169.0));

    std::istringstream badkey("M = 4\nbogus = 1\n");
    CHECK_THROWS(load_config(badkey));
}

TEST_CASE("config: noise power combines PSD and bandwidth") {
    SystemConfig cfg; // -169 dBm/Hz over 1 MHz -> -109 dBm
    CHECK(cfg.noise_dbm() == doctest::Approx(-109.0));
    CHECK(cfg.sigma2_bs() == doctest::Approx(dbm_to_watt(-109.0)));
    CHECK(cfg.sigma2_bs() == cfg.sigma2_dev());
}
