// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <functional>
#include <vector>

#include "risim/lift.hpp"
#include "risim/rng.hpp"
#include "risim/sdp.hpp"
#include "risim/sinr.hpp"

namespace risim {

enum class AoInit { Random, Zero, Given };

struct AoConfig {
    int max_outer_iters = 30;
    double outer_tol = 1e-3; // relative min-SINR improvement threshold
    double dinkelbach_tol = 1e-3;
    int dinkelbach_max_iters = 20;
    int num_randomizations = 50; // I
    AoInit init = AoInit::Random;
    PhaseShift init_phi;
    std::uint64_t rand_seed = 12345;
    SdpOptions sdp; // solver knobs for the phi-step subproblems
};

struct AoIterRecord {
    double min_sinr = 0.0; // linear, incumbent after this iteration
    PhaseShift phi;
    int dinkelbach_iters = 0;
    int sdp_solves = 0;
    double wall_ms = 0.0;
};

struct AoTrace {
    std::vector<AoIterRecord> iters;
    int total_sdp_solves = 0;
    double sdr_upper_bound = 0.0; // last phi-step SDR optimum (linear SINR)
};

struct DinkelbachResult {
    double lambda = 0.0; // attained max-min ratio of the relaxed problem
    CMat Phi;            // relaxed (N+1)x(N+1) solution
    int iterations = 0;
    int sdp_solves = 0;
    bool converged = false;
};

// Parametric subproblem for a given lambda:
//   maximize t   s.t.  tr((Num_i - lambda*Den_i) Phi) - t*scale_i >= lambda*const_i
//                      tr(E_ii Phi) <= 1 (i = 1..N), Phi_{N+1,N+1} = 1, Phi PSD
// scale_i keeps the rows well conditioned; the root of F(lambda) is unchanged.
inline SdpProblem build_parametric_problem(const SystemConfig& cfg, const SinrLifts& lifts,
                                           double lambda, const RVec& scales) {
    const int n = lifts.N + 1;
    SdpProblem p;
    p.dim = n;
    p.has_xi = true;
    p.xi_obj = 1.0;
    p.C = CMat::Zero(n, n);

    auto add_ratio_row = [&](const CMat& num, const CMat& den_mat, double den_const,
                             double scale) {
        SdpConstraint c;
        c.A = num - lambda * den_mat;
        c.xi_coeff = -scale;
        c.sense = Sense::GE;
        c.rhs = lambda * den_const;
        // rescale the whole row so the matrix part is O(1)
        c.A /= scale;
        c.xi_coeff = -1.0;
        c.rhs /= scale;
        p.constraints.push_back(std::move(c));
    };

    int row = 0;
    for (int k = 0; k < lifts.K; ++k, ++row) {
        CMat num = cfg.p_user() * lifts.Psi_UB[k][k];
        CMat den = CMat::Zero(n, n);
        for (int kp = 0; kp < lifts.K; ++kp)
            if (kp != k) den += cfg.p_user() * lifts.Psi_UB[k][kp];
        for (int l = 0; l < lifts.L; ++l) den += cfg.p_dev() * lifts.Psi_DB[k][l];
        add_ratio_row(num, den, lifts.zeta(k), scales(row));
    }
    for (int l = 0; l < lifts.L; ++l, ++row) {
        CMat num = cfg.p_dev() * lifts.Psi_DD[l][l];
        CMat den = CMat::Zero(n, n);
        for (int lp = 0; lp < lifts.L; ++lp)
            if (lp != l) den += cfg.p_dev() * lifts.Psi_DD[l][lp];
        for (int k = 0; k < lifts.K; ++k) den += cfg.p_user() * lifts.Psi_UD[l][k];
        add_ratio_row(num, den, cfg.sigma2_dev(), scales(row));
    }

    for (int i = 0; i < lifts.N; ++i) {
        SdpConstraint c;
        c.A = CMat::Zero(n, n);
        c.A(i, i) = 1.0;
        c.sense = Sense::LE;
        c.rhs = 1.0;
        p.constraints.push_back(std::move(c));
    }
    {
        SdpConstraint c;
        c.A = CMat::Zero(n, n);
        c.A(n - 1, n - 1) = 1.0;
        c.sense = Sense::EQ;
        c.rhs = 1.0;
        p.constraints.push_back(std::move(c));
    }
    return p;
}

// min over links of the lifted ratios at Phi; also fills per-link (num, den).
inline double min_lifted_ratio(const SystemConfig& cfg, const SinrLifts& lifts,
                               const CMat& Phi, RVec* dens = nullptr) {
    const int nr = lifts.K + lifts.L;
    double lam = std::numeric_limits<double>::infinity();
    if (dens) dens->resize(nr);
    int row = 0;
    for (int k = 0; k < lifts.K; ++k, ++row) {
        auto [num, den] = lifted_user_ratio(cfg, lifts, k, Phi);
        if (dens) (*dens)(row) = den;
        lam = std::min(lam, num / den);
    }
    for (int l = 0; l < lifts.L; ++l, ++row) {
        auto [num, den] = lifted_device_ratio(cfg, lifts, l, Phi);
        if (dens) (*dens)(row) = den;
        lam = std::min(lam, num / den);
    }
    return lam;
}

// Generalized (max-min) Dinkelbach: lambda_{t+1} = min_i N_i(Phi_t)/D_i(Phi_t),
// each parametric problem an SDP. Monotone increasing in lambda.
inline DinkelbachResult dinkelbach_maxmin(const SystemConfig& cfg, const SinrLifts& lifts,
                                          const AoConfig& ao, const CMat& Phi_start) {
    DinkelbachResult res;
    RVec scales;
    double lambda = min_lifted_ratio(cfg, lifts, Phi_start, &scales);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) lambda = 0.0;
    for (Eigen::Index i = 0; i < scales.size(); ++i)
        if (!(scales(i) > 0.0) || !std::isfinite(scales(i))) scales(i) = 1.0;

    res.Phi = Phi_start;
    res.lambda = lambda;
    SdpState warm;
    SdpOptions opt = ao.sdp;
    opt.warm = &warm;

    for (int t = 1; t <= ao.dinkelbach_max_iters; ++t) {
        SdpProblem p = build_parametric_problem(cfg, lifts, lambda, scales);
        SdpSolution sol = sdp_solve(p, opt);
        ++res.sdp_solves;
        res.iterations = t;
        if (sol.status == SdpStatus::NumericalTrouble) break;

        const double lambda_new = min_lifted_ratio(cfg, lifts, sol.X, nullptr);
        if (std::isfinite(lambda_new) && lambda_new > res.lambda) {
            res.lambda = lambda_new;
            res.Phi = sol.X;
        }
        const double rel = (lambda_new - lambda) / std::max(lambda_new, 1e-300);
        lambda = std::max(lambda, lambda_new);
        if (rel < ao.dinkelbach_tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

// Candidate recovery per the randomize-normalize-project-select recipe; the
// top-eigenvector candidate is added to the pool.
inline PhaseShift gaussian_randomize(const CMat& Phi,
                                     const std::function<double(const PhaseShift&)>& evaluator,
                                     int num_candidates, RandomStream rng,
                                     double* best_value = nullptr) {
    const int n1 = static_cast<int>(Phi.rows());
    const int N = n1 - 1;
    if (std::abs(Phi(N, N)) < 1e-12)
        throw std::runtime_error("gaussian_randomize: degenerate lifted solution");

    Eigen::SelfAdjointEigenSolver<CMat> eig(Phi);
    const RVec ev = eig.eigenvalues().cwiseMax(0.0);
    const CMat half = eig.eigenvectors() * ev.cwiseSqrt().asDiagonal();

    auto project = [&](CVec phibar) {
        // normalize by the last entry, clip over-modulus entries to the circle
        for (int i = 0; i < N; ++i)
            if (std::abs(phibar(i)) > 1.0)
                phibar(i) = phibar(i) / std::abs(phibar(i));
        PhaseShift ps;
        ps.phi = phibar.head(N);
        return ps;
    };

    PhaseShift best;
    double best_val = -std::numeric_limits<double>::infinity();
    auto consider = [&](const CVec& cand_full) {
        const cplx last = cand_full(N);
        if (std::abs(last) < 1e-12) return;
        PhaseShift ps = project(cand_full / last);
        const double val = evaluator(ps);
        if (val > best_val) {
            best_val = val;
            best = std::move(ps);
        }
    };

    // deterministic candidate: dominant eigenvector
    consider(eig.eigenvectors().col(n1 - 1) * std::sqrt(ev(n1 - 1)));
    for (int i = 0; i < num_candidates; ++i) consider(half * rng.cnormal_vec(n1));

    if (best_val == -std::numeric_limits<double>::infinity())
        throw std::runtime_error("gaussian_randomize: no usable candidate");
    if (best_value) *best_value = best_val;
    return best;
}

struct PhiStepResult {
    PhaseShift phi;       // feasible, at least as good as the incumbent
    CMat Phi;             // relaxed SDR solution
    double sdr_bound = 0; // SDR optimum (upper bound on achievable min-SINR)
    double achieved = 0;  // true min-SINR of phi under the fixed combiner
    int dinkelbach_iters = 0;
    int sdp_solves = 0;
};

inline PhiStepResult phi_step(const SystemConfig& cfg, const ChannelSet& ch,
                              const CascadedChannels& casc, const Combiner& comb,
                              const AoConfig& ao, const PhaseShift& incumbent,
                              RandomStream rng) {
    const SinrLifts lifts = build_lifts(cfg, ch, casc, comb);
    const CVec inc_t = augment(incumbent.phi);
    const CMat Phi_inc = inc_t * inc_t.adjoint();

    DinkelbachResult dk = dinkelbach_maxmin(cfg, lifts, ao, Phi_inc);

    auto evaluator = [&](const PhaseShift& ps) {
        const auto ebs = effective_bs_channels(ch, casc, ps);
        const auto edev = effective_device_channels(ch, casc, ps);
        return make_report(sinr_device(cfg, edev), sinr_user(cfg, ebs, comb)).min_sinr;
    };

    PhiStepResult r;
    r.Phi = dk.Phi;
    r.sdr_bound = dk.lambda;
    r.dinkelbach_iters = dk.iterations;
    r.sdp_solves = dk.sdp_solves;

    double cand_val = 0.0;
    PhaseShift cand =
        gaussian_randomize(dk.Phi, evaluator, ao.num_randomizations, rng, &cand_val);
    const double inc_val = evaluator(incumbent);
    if (cand_val >= inc_val) {
        r.phi = std::move(cand);
        r.achieved = cand_val;
    } else {
        r.phi = incumbent; // incumbent-keeping
        r.achieved = inc_val;
    }
    return r;
}

inline PhaseShift random_unit_modulus(int N, RandomStream& rng) {
    PhaseShift ps;
    ps.phi.resize(N);
    for (int i = 0; i < N; ++i) {
        const double th = rng.uniform(0.0, 2.0 * M_PI);
        ps.phi(i) = std::polar(1.0, th);
    }
    return ps;
}

struct AoResult {
    PhaseShift phi;
    Combiner comb;
    AoTrace trace;
    double min_sinr = 0.0; // linear, with the final LMMSE combiner
};

// Alternate LMMSE combiner updates with the SDR phi-step until the incumbent
// min-SINR stops improving.
inline AoResult run_ao(const SystemConfig& cfg, const ChannelSet& ch,
                       const CascadedChannels& casc, const AoConfig& ao) {
    RandomStream rng(ao.rand_seed);
    PhaseShift phi;
    switch (ao.init) {
        case AoInit::Given: phi = ao.init_phi; break;
        case AoInit::Zero: phi.phi = CVec::Zero(cfg.N); break;
        case AoInit::Random: phi = random_unit_modulus(cfg.N, rng); break;
    }

    AoResult res;
    double prev = evaluate(cfg, ch, casc, phi).min_sinr;
    for (int it = 0; it < ao.max_outer_iters; ++it) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto ebs = effective_bs_channels(ch, casc, phi);
        const Combiner comb = lmmse_combiner(cfg, ebs);
        PhiStepResult step =
            phi_step(cfg, ch, casc, comb, ao, phi, rng.substream(1000 + it));
        phi = step.phi;

        const double cur = evaluate(cfg, ch, casc, phi).min_sinr;
        AoIterRecord rec;
        rec.min_sinr = std::max(cur, prev);
        rec.phi = phi;
        rec.dinkelbach_iters = step.dinkelbach_iters;
        rec.sdp_solves = step.sdp_solves;
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        res.trace.iters.push_back(rec);
        res.trace.total_sdp_solves += step.sdp_solves;
        res.trace.sdr_upper_bound = step.sdr_bound;

        const double improvement = (cur - prev) / std::max(prev, 1e-300);
        prev = std::max(prev, cur);
        if (improvement < ao.outer_tol) break;
    }

    res.phi = phi;
    const auto ebs = effective_bs_channels(ch, casc, phi);
    res.comb = lmmse_combiner(cfg, ebs);
    res.min_sinr = evaluate(cfg, ch, casc, phi, &res.comb).min_sinr;
    return res;
}

} // namespace risim
