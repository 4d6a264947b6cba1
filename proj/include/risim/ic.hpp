// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "risim/lift.hpp"
#include "risim/maxmin.hpp"
#include "risim/rng.hpp"
#include "risim/sdp.hpp"
#include "risim/sinr.hpp"

namespace risim {

// Stacked device-side effective channels f = h + A*phi with
// f = [f_DD_sig; f_DD_itf; f_UD]. The underlying vec((F_DD)^T) ordering is
// row-major over receivers: entry l*L+lp <-> F_DD(l,lp).
struct StackedChannels {
    CMat A;     // L(K+L) x N, rows [G_DD_sig; G_DD_itf; G_UD]
    CVec h_sig; // L
    CVec h_itf; // L(L-1)
    CVec h_ud;  // L*K
    std::vector<int> sig_idx; // positions of diagonal entries in vec((F_DD)^T)
    std::vector<int> itf_idx; // off-diagonal positions, ascending
};

inline StackedChannels stack(const ChannelSet& ch, const CascadedChannels& casc) {
    const int L = static_cast<int>(ch.H_DD.rows());
    const int K = static_cast<int>(ch.H_UD.cols());
    const int N = static_cast<int>(ch.H_RB.cols());

    StackedChannels st;
    for (int l = 0; l < L; ++l)
        for (int lp = 0; lp < L; ++lp)
            (l == lp ? st.sig_idx : st.itf_idx).push_back(l * L + lp);

    st.A.resize(L * (K + L), N);
    st.h_sig.resize(L);
    st.h_itf.resize(L * (L - 1));
    st.h_ud.resize(L * K);

    int r = 0;
    for (int idx : st.sig_idx) {
        const int l = idx / L, lp = idx % L;
        st.A.row(r) = casc.g_dd_row[l][lp].transpose();
        st.h_sig(r) = ch.H_DD(l, lp);
        ++r;
    }
    int ri = 0;
    for (int idx : st.itf_idx) {
        const int l = idx / L, lp = idx % L;
        st.A.row(r) = casc.g_dd_row[l][lp].transpose();
        st.h_itf(ri++) = ch.H_DD(l, lp);
        ++r;
    }
    for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k) {
            st.A.row(r) = casc.g_ud_row[l][k].transpose();
            st.h_ud(l * K + k) = ch.H_UD(l, k);
            ++r;
        }
    return st;
}

// phi = B f_sig + d nulls all device-side interference; [B, C] = A^H (A A^H)^-1.
struct IcRepresentation {
    CMat B; // N x L
    CMat C; // N x (L(K+L)-L)
    CVec d; // N
    double cond = 0.0; // condition number of A A^H
};

inline IcRepresentation build_representation(const StackedChannels& st,
                                             double cond_limit = 1e12) {
    const Eigen::Index mrows = st.A.rows();
    const Eigen::Index N = st.A.cols();
    const Eigen::Index L = st.h_sig.size();
    if (N < mrows)
        throw UnderdeterminedError("IC representation needs N >= L(K+L)");

    const CMat G = st.A * st.A.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> eig(G);
    const double lmin = eig.eigenvalues()(0);
    const double lmax = eig.eigenvalues()(mrows - 1);
    IcRepresentation rep;
    rep.cond = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<double>::infinity();
    if (!(rep.cond < cond_limit))
        throw IllConditionedError("IC representation: A A^H condition number too large");

    const CMat pinv = G.ldlt().solve(st.A).adjoint(); // A^H (A A^H)^-1, N x m
    rep.B = pinv.leftCols(L);
    rep.C = pinv.rightCols(mrows - L);

    CVec h_rest(st.h_itf.size() + st.h_ud.size());
    h_rest << st.h_itf, st.h_ud;
    rep.d = -rep.B * st.h_sig - rep.C * h_rest;
    return rep;
}

// May be infeasible (|phi_n| > 1); feasibility is the optimizer's concern.
inline PhaseShift phi_ic(const IcRepresentation& rep, const CVec& f_sig) {
    PhaseShift ps;
    ps.phi = rep.B * f_sig + rep.d;
    return ps;
}

struct IcResult {
    PhaseShift phi;
    Combiner comb;
    CVec f_sig;
    double sdr_bound = 0.0; // SDR optimum xi* (linear SINR scale)
    double min_sinr = 0.0;  // achieved, with LMMSE combiner
    int sdp_solves = 0;
    SdpStatus sdp_status = SdpStatus::NumericalTrouble;
};

namespace detail {

// |b_i^H f + d_i| <= 1 for all i, with slack
inline bool ic_phi_feasible(const IcRepresentation& rep, const CVec& f, double slack = 1e-9) {
    const CVec phi = rep.B * f + rep.d;
    for (Eigen::Index i = 0; i < phi.size(); ++i)
        if (std::abs(phi(i)) > 1.0 + slack) return false;
    return true;
}

} // namespace detail

// Transformed problem: optimize the effective D2D signal gains f_sig under the
// IC representation. Exactly one SDP solve. The per-user constraint uses the
// combiner-free upper bound p_k ||Z_k f + q_k||^2 / sigma2_B.
inline IcResult ic_optimize(const SystemConfig& cfg, const ChannelSet& ch,
                            const CascadedChannels& casc, const IcRepresentation& rep,
                            int num_randomizations = 50, SdpOptions sdp_opt = {},
                            std::uint64_t rand_seed = 777) {
    const int L = cfg.L, K = cfg.K, N = cfg.N;
    const int n = L + 1;

    // Center and scale the variable: f = f_anchor + s_f * u, where the anchor
    // is the minimum-norm-phi gain vector argmin_f ||B f + d||. This keeps the
    // phase-box rows O(1) even when the feasible gain set is a small region
    // far from the origin.
    const CVec f_anchor =
        (rep.B.adjoint() * rep.B).ldlt().solve(-(rep.B.adjoint() * rep.d));
    const CVec phi_anchor = rep.B * f_anchor + rep.d;
    double mean_bnorm = 0.0;
    for (int i = 0; i < N; ++i) mean_bnorm += rep.B.row(i).norm();
    mean_bnorm /= N;
    const double s_f = (mean_bnorm > 0.0) ? 1.0 / mean_bnorm : 1.0;

    std::vector<CMat> Z(K);
    std::vector<CVec> q(K);
    for (int k = 0; k < K; ++k) {
        Z[k] = casc.G_UB[k] * rep.B * s_f;
        q[k] = ch.H_UB.col(k) + casc.G_UB[k] * phi_anchor;
    }

    SdpProblem p;
    p.dim = n;
    p.has_xi = true;
    p.xi_obj = 1.0;
    p.C = CMat::Zero(n, n);

    // xi is kept in units of (linear SINR / xi_scale) for row balance
    const double s_gain = std::max(s_f, f_anchor.size() ? f_anchor.cwiseAbs().maxCoeff()
                                                        : 0.0);
    double xi_scale = cfg.p_dev() * s_gain * s_gain / cfg.sigma2_dev();

    for (int k = 0; k < K; ++k) {
        // Omega_k = [Z^H Z, Z^H q; q^H Z, |q|^2]
        SdpConstraint c;
        c.A.resize(n, n);
        c.A.topLeftCorner(L, L) = Z[k].adjoint() * Z[k];
        c.A.topRightCorner(L, 1) = Z[k].adjoint() * q[k];
        c.A.bottomLeftCorner(1, L) = q[k].adjoint() * Z[k];
        c.A(L, L) = q[k].squaredNorm();
        c.A = (0.5 * (c.A + c.A.adjoint())).eval();
        c.A *= cfg.p_user() / cfg.sigma2_bs() / xi_scale;
        c.xi_coeff = -1.0;
        c.sense = Sense::GE;
        c.rhs = 0.0;
        p.constraints.push_back(std::move(c));
    }
    for (int l = 0; l < L; ++l) {
        // |f_l|^2 = |f_anchor_l + s_f u_l|^2 as a rank-one row on (u_l, 1)
        SdpConstraint c;
        c.A = CMat::Zero(n, n);
        c.A(l, l) = s_f * s_f;
        c.A(l, L) = s_f * f_anchor(l);
        c.A(L, l) = s_f * std::conj(f_anchor(l));
        c.A(L, L) = std::norm(f_anchor(l));
        c.A *= cfg.p_dev() / cfg.sigma2_dev() / xi_scale;
        c.xi_coeff = -1.0;
        c.sense = Sense::GE;
        c.rhs = 0.0;
        p.constraints.push_back(std::move(c));
    }
    for (int i = 0; i < N; ++i) {
        // Upsilon_i from row i of B (as b_i^H) and d_i
        const CVec bi = rep.B.row(i).adjoint() * s_f;
        const cplx di = phi_anchor(i);
        SdpConstraint c;
        c.A.resize(n, n);
        c.A.topLeftCorner(L, L) = bi * bi.adjoint();
        c.A.topRightCorner(L, 1) = di * bi;
        c.A.bottomLeftCorner(1, L) = std::conj(di) * bi.adjoint();
        c.A(L, L) = std::norm(di);
        c.A = (0.5 * (c.A + c.A.adjoint())).eval();
        c.xi_coeff = 0.0;
        c.sense = Sense::LE;
        c.rhs = 1.0;
        p.constraints.push_back(std::move(c));
    }
    {
        SdpConstraint c;
        c.A = CMat::Zero(n, n);
        c.A(L, L) = 1.0;
        c.sense = Sense::EQ;
        c.rhs = 1.0;
        p.constraints.push_back(std::move(c));
    }

    SdpSolution sol = sdp_solve(p, sdp_opt);
    IcResult res;
    res.sdp_solves = 1;
    res.sdp_status = sol.status;
    if (sol.status == SdpStatus::Infeasible)
        throw IcInfeasibleError("IC optimization: no f_sig keeps all |phi_n| <= 1");
    if (sol.status == SdpStatus::NumericalTrouble)
        throw std::runtime_error("IC optimization: SDP solver failure");
    res.sdr_bound = sol.xi * xi_scale;

    // ---- recovery -------------------------------------------------------
    // The centering anchor doubles as the backtracking target when a
    // candidate violates the phi box.
    auto evaluate_f = [&](const CVec& f, PhaseShift& ps_out) {
        ps_out = phi_ic(rep, f);
        return evaluate(cfg, ch, casc, ps_out).min_sinr;
    };

    CVec best_f;
    PhaseShift best_phi;
    double best_val = -std::numeric_limits<double>::infinity();
    bool have_feasible = false;

    auto keep_if_better = [&](CVec f) {
        PhaseShift ps;
        const double val = evaluate_f(f, ps);
        if (val > best_val) {
            best_val = val;
            best_f = std::move(f);
            best_phi = std::move(ps);
            have_feasible = true;
        }
    };

    auto consider = [&](CVec f) {
        // scalar backtracking toward the anchor until the phi box holds
        if (!detail::ic_phi_feasible(rep, f)) {
            if (!detail::ic_phi_feasible(rep, f_anchor)) return;
            // first try a tolerance-level shrink: solver round-off can leave a
            // boundary candidate infeasible by a hair
            double t = 1.0 - 1e-7;
            bool ok = false;
            for (int h = 0; h < 11; ++h, t = (h == 1 ? 0.5 : t * 0.5)) {
                CVec cand = f_anchor + t * (f - f_anchor);
                if (detail::ic_phi_feasible(rep, cand)) {
                    f = std::move(cand);
                    ok = true;
                    break;
                }
            }
            if (!ok) f = f_anchor;
        }
        keep_if_better(std::move(f));
    };

    Eigen::SelfAdjointEigenSolver<CMat> eig(sol.X);
    const RVec ev = eig.eigenvalues().cwiseMax(0.0);
    {
        // dominant eigenvector candidate
        const CVec v = eig.eigenvectors().col(n - 1) * std::sqrt(ev(n - 1));
        if (std::abs(v(L)) > 1e-12) consider((f_anchor + s_f * (v / v(L)).head(L)).eval());
    }
    const CMat half = eig.eigenvectors() * ev.cwiseSqrt().asDiagonal();
    RandomStream rng(rand_seed);
    for (int i = 0; i < num_randomizations; ++i) {
        const CVec v = half * rng.cnormal_vec(n);
        if (std::abs(v(L)) > 1e-12) consider((f_anchor + s_f * (v / v(L)).head(L)).eval());
    }

    if (!have_feasible)
        throw IcInfeasibleError("IC optimization: randomization found no feasible phi");

    res.f_sig = best_f;
    res.phi = best_phi;
    const auto ebs = effective_bs_channels(ch, casc, res.phi);
    res.comb = lmmse_combiner(cfg, ebs);
    res.min_sinr = evaluate(cfg, ch, casc, res.phi, &res.comb).min_sinr;
    return res;
}

// Single-pair limited feedback: the receive device computes (b, d) from its
// local CSI; the BS-side problem built from them matches the full-CSI route.
struct LimitedFeedback {
    CVec b; // N
    CVec d; // N
    int feedback_count = 0; // complex coefficients forwarded
};

inline LimitedFeedback limited_feedback_single_pair(const ChannelSet& ch,
                                                    const CascadedChannels& casc) {
    const int L = static_cast<int>(ch.H_DD.rows());
    if (L != 1) throw UnsupportedError("limited feedback requires a single D2D pair");
    const int K = static_cast<int>(ch.H_UD.cols());
    const int N = static_cast<int>(ch.H_RB.cols());
    if (N < K + 1) throw UnderdeterminedError("limited feedback needs N >= K+1");

    // A = [g_DD row; G_UD rows], same ordering as the multi-pair stack at L=1
    CMat A(K + 1, N);
    A.row(0) = casc.g_dd_row[0][0].transpose();
    for (int k = 0; k < K; ++k) A.row(1 + k) = casc.g_ud_row[0][k].transpose();

    const CMat pinv = (A * A.adjoint()).ldlt().solve(A).adjoint(); // N x (K+1)
    LimitedFeedback lf;
    lf.b = pinv.col(0);
    CVec h(K + 1);
    h(0) = ch.H_DD(0, 0);
    for (int k = 0; k < K; ++k) h(1 + k) = ch.H_UD(0, k);
    lf.d = -pinv * h;
    lf.feedback_count = 2 * N;
    return lf;
}

enum class FeedbackMode { FullMulti, FullSingle, LimitedSingle };

inline int feedback_cost(int K, int L, int N, FeedbackMode mode) {
    if (K < 0 || L < 1 || N < 1) throw std::invalid_argument("feedback_cost: bad dims");
    switch (mode) {
        case FeedbackMode::FullMulti: return (L + K) * (N + 1); // per device
        case FeedbackMode::FullSingle: return (K + 1) * (N + 1);
        case FeedbackMode::LimitedSingle:
            if (L != 1) throw UnsupportedError("limited feedback requires L = 1");
            return 2 * N;
    }
    throw std::invalid_argument("feedback_cost: bad mode");
}

} // namespace risim
