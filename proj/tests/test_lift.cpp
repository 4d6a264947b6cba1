// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "risim/lift.hpp"
#include "risim/scenario.hpp"

using namespace risim;

TEST_CASE("lift_pair: zero psi, unit alpha") {
    const CVec psi = CVec::Zero(4);
    const CMat P = lift_pair(psi, 1.0).Psi;
    CMat expect = CMat::Zero(5, 5);
    expect(4, 4) = 1.0;
    CHECK((P - expect).norm() == 0.0);
    // tr(Phi P) = 1 for every phi
    RandomStream rng(1);
    const CVec t = augment(rng.cnormal_vec(4));
    const CMat Phi = t * t.adjoint();
    CHECK((Phi.cwiseProduct(P.transpose())).sum().real() == doctest::Approx(1.0));
}

TEST_CASE("lift_pair: phi=0 gives |alpha|^2") {
    RandomStream rng(2);
    const CVec psi = rng.cnormal_vec(6);
    const cplx alpha = rng.cnormal();
    const CMat P = lift_pair(psi, alpha).Psi;
    const CVec t = augment(CVec::Zero(6));
    const CMat Phi = t * t.adjoint();
    CHECK((Phi.cwiseProduct(P.transpose())).sum().real() ==
          doctest::Approx(std::norm(alpha)).epsilon(1e-12));
}

TEST_CASE("lift_pair: trace identity equals the scalar quadratic, 1000 draws") {
    RandomStream rng(3);
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + static_cast<int>(rng.uniform() * 8);
        const CVec psi = rng.cnormal_vec(n);
        const cplx alpha = rng.cnormal();
        const CVec phi = rng.cnormal_vec(n);
        const CMat P = lift_pair(psi, alpha).Psi;
        const CVec ft = augment(phi);
        const CMat Phi = ft * ft.adjoint();
        const double via_trace = (Phi.cwiseProduct(P.transpose())).sum().real();
        const double direct = std::norm(alpha + psi.dot(phi));
        CHECK(via_trace == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("lift_pair: Hermitian and PSD") {
    RandomStream rng(4);
    for (int t = 0; t < 100; ++t) {
        const CVec psi = rng.cnormal_vec(5);
        const CMat P = lift_pair(psi, rng.cnormal()).Psi;
        CHECK((P - P.adjoint()).norm() < 1e-12);
        Eigen::SelfAdjointEigenSolver<CMat> eig(P);
        CHECK(eig.eigenvalues()(0) >= -1e-9 * P.trace().real());
    }
}

namespace {

struct Instance {
    SystemConfig cfg;
    Drop drop;
    Combiner comb;
    SinrLifts lifts;
    PhaseShift phi;
};

Instance make_instance(std::uint64_t seed) {
    Instance in;
    in.cfg.M = 4;
    in.cfg.K = 2;
    in.cfg.L = 2;
    in.cfg.N = 6;
    in.cfg.seed = seed;
    in.drop = draw_drop(in.cfg, 0);
    RandomStream rng(seed + 1);
    in.phi.phi = rng.cnormal_vec(in.cfg.N) * 0.4;
    const auto ebs = effective_bs_channels(in.drop.channels, in.drop.cascaded, in.phi);
    in.comb = lmmse_combiner(in.cfg, ebs);
    in.lifts = build_lifts(in.cfg, in.drop.channels, in.drop.cascaded, in.comb);
    return in;
}

} // namespace

TEST_CASE("lifted SINR at rank-one Phi equals the direct evaluation") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        Instance in = make_instance(40 + s);
        const CVec t = augment(in.phi.phi);
        const CMat Phi = t * t.adjoint();
        const auto ebs = effective_bs_channels(in.drop.channels, in.drop.cascaded, in.phi);
        const auto edev = effective_device_channels(in.drop.channels, in.drop.cascaded, in.phi);
        const RVec su = sinr_user(in.cfg, ebs, in.comb);
        const RVec sd = sinr_device(in.cfg, edev);
        for (int k = 0; k < in.cfg.K; ++k)
            CHECK(lifted_sinr_user(in.cfg, in.lifts, k, Phi) ==
                  doctest::Approx(su(k)).epsilon(1e-10));
        for (int l = 0; l < in.cfg.L; ++l)
            CHECK(lifted_sinr_device(in.cfg, in.lifts, l, Phi) ==
                  doctest::Approx(sd(l)).epsilon(1e-10));
    }
}

TEST_CASE("lifted SINR at Phi for phi=0 equals the direct-channel SINR") {
    Instance in = make_instance(77);
    const int N = in.cfg.N;
    CMat Phi = CMat::Zero(N + 1, N + 1);
    Phi(N, N) = 1.0;
    PhaseShift off;
    off.phi = CVec::Zero(N);
    const auto ebs = effective_bs_channels(in.drop.channels, in.drop.cascaded, off);
    const RVec su = sinr_user(in.cfg, ebs, in.comb);
    for (int k = 0; k < in.cfg.K; ++k)
        CHECK(lifted_sinr_user(in.cfg, in.lifts, k, Phi) ==
              doctest::Approx(su(k)).epsilon(1e-10));
}

TEST_CASE("lifted SINR: ratio homogeneity under common scaling") {
    Instance in = make_instance(78);
    const CVec t = augment(in.phi.phi);
    const CMat Phi = t * t.adjoint();
    const double base = lifted_sinr_user(in.cfg, in.lifts, 0, Phi);
    // scale all Psi and zeta by c > 0
    const double c = 3.7;
    SinrLifts scaled = in.lifts;
    for (auto& row : scaled.Psi_UB)
        for (auto& m : row) m *= c;
    for (auto& row : scaled.Psi_DB)
        for (auto& m : row) m *= c;
    scaled.zeta *= c;
    CHECK(lifted_sinr_user(in.cfg, scaled, 0, Phi) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("zeta matches the combiner norm times the BS noise power") {
    Instance in = make_instance(79);
    for (int k = 0; k < in.cfg.K; ++k) {
        const double expect =
            in.comb.W.row(k).squaredNorm() * in.cfg.sigma2_bs();
        CHECK(in.lifts.zeta(k) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("built lifts satisfy the trace identity against the scalar forms") {
    Instance in = make_instance(80);
    RandomStream rng(81);
    for (int t = 0; t < 20; ++t) {
        PhaseShift ps{rng.cnormal_vec(in.cfg.N) * 0.6};
        const CVec ft = augment(ps.phi);
        const CMat Phi = ft * ft.adjoint();
        const auto ebs = effective_bs_channels(in.drop.channels, in.drop.cascaded, ps);
        for (int k = 0; k < in.cfg.K; ++k)
            for (int kp = 0; kp < in.cfg.K; ++kp) {
                const CVec wk = in.comb.W.row(k).adjoint();
                const double direct = std::norm(wk.dot(ebs.f_UB[kp]));
                const double lifted =
                    (Phi.cwiseProduct(in.lifts.Psi_UB[k][kp].transpose())).sum().real();
                CHECK(lifted == doctest::Approx(direct).epsilon(1e-10));
            }
    }
}
