// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "risim/channels.hpp"
#include "risim/config.hpp"
#include "risim/sinr.hpp"

namespace risim {

// Hermitian (N+1)x(N+1) matrix Psi with tr(phi_tilde phi_tilde^H Psi) =
// |alpha + psi^H phi|^2, phi_tilde = [phi; 1].
struct LiftedQuadratic {
    CMat Psi;
};

inline LiftedQuadratic lift_pair(const CVec& psi, cplx alpha) {
    const Eigen::Index n = psi.size();
    CMat P(n + 1, n + 1);
    P.topLeftCorner(n, n) = psi * psi.adjoint();
    P.topRightCorner(n, 1) = alpha * psi;
    P.bottomLeftCorner(1, n) = std::conj(alpha) * psi.adjoint();
    P(n, n) = std::norm(alpha);
    // symmetrize away rounding asymmetry
    P = 0.5 * (P + P.adjoint()).eval();
    return {std::move(P)};
}

inline CVec augment(const CVec& phi) {
    CVec t(phi.size() + 1);
    t.head(phi.size()) = phi;
    t(phi.size()) = 1.0;
    return t;
}

// All lifting matrices of the combiner-side and device-side SINR terms,
// plus the constant denominators.
struct SinrLifts {
    int K = 0, L = 0, N = 0;
    // user side (depends on W): Psi_UB[k][kp], Psi_DB[k][l], zeta[k]
    std::vector<std::vector<CMat>> Psi_UB;
    std::vector<std::vector<CMat>> Psi_DB;
    RVec zeta; // ||w_k||^2 sigma2_bs
    // device side: Psi_DD[l][lp], Psi_UD[l][k]
    std::vector<std::vector<CMat>> Psi_DD;
    std::vector<std::vector<CMat>> Psi_UD;
};

inline void build_user_lifts(const SystemConfig& cfg, const ChannelSet& ch,
                             const CascadedChannels& casc, const Combiner& comb,
                             SinrLifts& out) {
    const int K = cfg.K, L = cfg.L;
    out.Psi_UB.assign(K, std::vector<CMat>(K));
    out.Psi_DB.assign(K, std::vector<CMat>(L));
    out.zeta.resize(K);
    for (int k = 0; k < K; ++k) {
        const CVec wk = comb.W.row(k).adjoint();
        out.zeta(k) = wk.squaredNorm() * cfg.sigma2_bs();
        for (int kp = 0; kp < K; ++kp) {
            const CVec psi = casc.G_UB[kp].adjoint() * wk; // (w^H G)^H
            const cplx alpha = wk.dot(ch.H_UB.col(kp));
            out.Psi_UB[k][kp] = lift_pair(psi, alpha).Psi;
        }
        for (int l = 0; l < L; ++l) {
            const CVec psi = casc.G_DB[l].adjoint() * wk;
            const cplx alpha = wk.dot(ch.H_DB.col(l));
            out.Psi_DB[k][l] = lift_pair(psi, alpha).Psi;
        }
    }
}

inline void build_device_lifts(const SystemConfig& cfg, const ChannelSet& ch,
                               const CascadedChannels& casc, SinrLifts& out) {
    const int K = cfg.K, L = cfg.L;
    out.Psi_DD.assign(L, std::vector<CMat>(L));
    out.Psi_UD.assign(L, std::vector<CMat>(K));
    for (int l = 0; l < L; ++l) {
        for (int lp = 0; lp < L; ++lp) {
            // stored row is g^H, so psi = conj(row)
            const CVec psi = casc.g_dd_row[l][lp].conjugate();
            out.Psi_DD[l][lp] = lift_pair(psi, ch.H_DD(l, lp)).Psi;
        }
        for (int k = 0; k < K; ++k) {
            const CVec psi = casc.g_ud_row[l][k].conjugate();
            out.Psi_UD[l][k] = lift_pair(psi, ch.H_UD(l, k)).Psi;
        }
    }
}

inline SinrLifts build_lifts(const SystemConfig& cfg, const ChannelSet& ch,
                             const CascadedChannels& casc, const Combiner& comb) {
    SinrLifts lifts;
    lifts.K = cfg.K;
    lifts.L = cfg.L;
    lifts.N = cfg.N;
    build_user_lifts(cfg, ch, casc, comb, lifts);
    build_device_lifts(cfg, ch, casc, lifts);
    return lifts;
}

inline double trace_real(const CMat& A, const CMat& B) {
    return (A.cwiseProduct(B.transpose())).sum().real();
}

// numerator / denominator of the lifted user-k SINR at a (relaxed) Phi
inline std::pair<double, double> lifted_user_ratio(const SystemConfig& cfg,
                                                   const SinrLifts& lifts, int k,
                                                   const CMat& Phi) {
    double num = cfg.p_user() * trace_real(Phi, lifts.Psi_UB[k][k]);
    double den = lifts.zeta(k);
    for (int kp = 0; kp < lifts.K; ++kp)
        if (kp != k) den += cfg.p_user() * trace_real(Phi, lifts.Psi_UB[k][kp]);
    for (int l = 0; l < lifts.L; ++l)
        den += cfg.p_dev() * trace_real(Phi, lifts.Psi_DB[k][l]);
    return {num, den};
}

inline std::pair<double, double> lifted_device_ratio(const SystemConfig& cfg,
                                                     const SinrLifts& lifts, int l,
                                                     const CMat& Phi) {
    double num = cfg.p_dev() * trace_real(Phi, lifts.Psi_DD[l][l]);
    double den = cfg.sigma2_dev();
    for (int lp = 0; lp < lifts.L; ++lp)
        if (lp != l) den += cfg.p_dev() * trace_real(Phi, lifts.Psi_DD[l][lp]);
    for (int k = 0; k < lifts.K; ++k)
        den += cfg.p_user() * trace_real(Phi, lifts.Psi_UD[l][k]);
    return {num, den};
}

inline double lifted_sinr_user(const SystemConfig& cfg, const SinrLifts& lifts, int k,
                               const CMat& Phi) {
    auto [num, den] = lifted_user_ratio(cfg, lifts, k, Phi);
    return num / den;
}

inline double lifted_sinr_device(const SystemConfig& cfg, const SinrLifts& lifts, int l,
                                 const CMat& Phi) {
    auto [num, den] = lifted_device_ratio(cfg, lifts, l, Phi);
    return num / den;
}

} // namespace risim
