// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risim/channels.hpp"
#include "risim/config.hpp"

namespace risim {

// Rows are w_k^H; scale of each row is irrelevant for the user SINR.
struct Combiner {
    CMat W; // K x M
};

struct SinrReport {
    RVec sinr_dev;  // length L, linear
    RVec sinr_user; // length K, linear
    double min_sinr = 0.0;
};

inline RVec sinr_device(const SystemConfig& cfg, const EffectiveDeviceChannels& e) {
    const int L = static_cast<int>(e.f_DD.rows());
    const int K = static_cast<int>(e.f_UD.cols());
    RVec out(L);
    for (int l = 0; l < L; ++l) {
        double den = cfg.sigma2_dev();
        for (int lp = 0; lp < L; ++lp)
            if (lp != l) den += cfg.p_dev() * std::norm(e.f_DD(l, lp));
        for (int k = 0; k < K; ++k) den += cfg.p_user() * std::norm(e.f_UD(l, k));
        out(l) = cfg.p_dev() * std::norm(e.f_DD(l, l)) / den;
    }
    return out;
}

inline RVec sinr_user(const SystemConfig& cfg, const EffectiveBsChannels& e,
                      const Combiner& comb) {
    const int K = static_cast<int>(e.f_UB.size());
    const int L = static_cast<int>(e.f_DB.size());
    RVec out(K);
    for (int k = 0; k < K; ++k) {
        const CVec wk = comb.W.row(k).adjoint(); // w_k as a column
        const double wnorm2 = wk.squaredNorm();
        if (!(wnorm2 > 0.0)) throw std::invalid_argument("sinr_user: zero combiner");
        double den = wnorm2 * cfg.sigma2_bs();
        for (int kp = 0; kp < K; ++kp)
            if (kp != k) den += cfg.p_user() * std::norm(wk.dot(e.f_UB[kp]));
        for (int l = 0; l < L; ++l) den += cfg.p_dev() * std::norm(wk.dot(e.f_DB[l]));
        out(k) = cfg.p_user() * std::norm(wk.dot(e.f_UB[k])) / den;
    }
    return out;
}

// w_k = (sum_k' p_U f_UB f_UB^H + sum_l p_D f_DB f_DB^H + sigma2 I)^-1 f_UB[k]
inline Combiner lmmse_combiner(const SystemConfig& cfg, const EffectiveBsChannels& e) {
    const int K = static_cast<int>(e.f_UB.size());
    const int L = static_cast<int>(e.f_DB.size());
    const int M = static_cast<int>(!e.f_UB.empty()   ? e.f_UB[0].size()
                                   : !e.f_DB.empty() ? e.f_DB[0].size()
                                                     : 0);
    CMat R = cfg.sigma2_bs() * CMat::Identity(M, M);
    for (int kp = 0; kp < K; ++kp) R += cfg.p_user() * e.f_UB[kp] * e.f_UB[kp].adjoint();
    for (int l = 0; l < L; ++l) R += cfg.p_dev() * e.f_DB[l] * e.f_DB[l].adjoint();
    Eigen::LLT<CMat> llt(R);
    Combiner c;
    c.W.resize(K, M);
    for (int k = 0; k < K; ++k) c.W.row(k) = llt.solve(e.f_UB[k]).adjoint();
    return c;
}

inline SinrReport make_report(const RVec& dev, const RVec& user) {
    SinrReport r;
    r.sinr_dev = dev;
    r.sinr_user = user;
    double m = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < dev.size(); ++i) m = std::min(m, dev(i));
    for (Eigen::Index i = 0; i < user.size(); ++i) m = std::min(m, user(i));
    r.min_sinr = std::isfinite(m) ? m : 0.0;
    return r;
}

// Full evaluation at a given phase shift; pass nullptr to use the LMMSE
// combiner for the resulting effective channels.
inline SinrReport evaluate(const SystemConfig& cfg, const ChannelSet& ch,
                           const CascadedChannels& casc, const PhaseShift& ps,
                           const Combiner* comb = nullptr) {
    const auto ebs = effective_bs_channels(ch, casc, ps);
    const auto edev = effective_device_channels(ch, casc, ps);
    Combiner lm;
    if (!comb) {
        lm = lmmse_combiner(cfg, ebs);
        comb = &lm;
    }
    return make_report(sinr_device(cfg, edev), sinr_user(cfg, ebs, *comb));
}

} // namespace risim
