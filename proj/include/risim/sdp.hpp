// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iostream>
#include <optional>
#include <vector>

#include "risim/common.hpp"

namespace risim {

// Standard-form Hermitian SDP:
//   maximize    tr(C X) + xi_obj * xi
//   subject to  tr(A_j X) + xi_coeff_j * xi  (<= | = | >=)  rhs_j
//               X Hermitian PSD, xi free scalar (only if has_xi)
//
// Solved by two-block ADMM: alternating projection onto the affine constraint
// set (with slack variables for inequalities) and onto the PSD cone, with
// over-relaxation and residual-balanced penalty updates. Constraint rows are
// normalized to unit norm before solving; X needs no unscaling.

enum class Sense { LE, EQ, GE };

struct SdpConstraint {
    CMat A;                // Hermitian dim x dim
    double xi_coeff = 0.0; // coefficient of the scalar variable
    Sense sense = Sense::EQ;
    double rhs = 0.0;
};

struct SdpProblem {
    int dim = 0;
    CMat C;               // objective matrix; zero for feasibility problems
    double xi_obj = 0.0;
    bool has_xi = false;
    std::vector<SdpConstraint> constraints;
};

enum class SdpStatus { Optimal, Infeasible, MaxIters, NumericalTrouble };

inline const char* to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::Optimal: return "Optimal";
        case SdpStatus::Infeasible: return "Infeasible";
        case SdpStatus::MaxIters: return "MaxIters";
        default: return "NumericalTrouble";
    }
}

struct SdpSolution {
    CMat X;
    double xi = 0.0;
    SdpStatus status = SdpStatus::NumericalTrouble;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    double objective = 0.0;
    int iterations = 0;
};

// Hermitian <-> real svec with tr(AB) = svec(A).dot(svec(B)).
inline Eigen::Index svec_dim(int n) { return static_cast<Eigen::Index>(n) * n; }

inline void svec_into(const CMat& A, double* out) {
    const int n = static_cast<int>(A.rows());
    const double s2 = std::sqrt(2.0);
    Eigen::Index p = 0;
    for (int i = 0; i < n; ++i) out[p++] = A(i, i).real();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            out[p++] = s2 * A(i, j).real();
            out[p++] = s2 * A(i, j).imag();
        }
}

inline RVec svec(const CMat& A) {
    RVec v(svec_dim(static_cast<int>(A.rows())));
    svec_into(A, v.data());
    return v;
}

inline CMat smat(const double* v, int n) {
    const double is2 = 1.0 / std::sqrt(2.0);
    CMat A(n, n);
    Eigen::Index p = 0;
    for (int i = 0; i < n; ++i) A(i, i) = v[p++];
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            const double re = v[p++] * is2;
            const double im = v[p++] * is2;
            A(i, j) = cplx(re, im);
            A(j, i) = cplx(re, -im);
        }
    return A;
}

// Reusable solver state for warm starting across related problems (same
// structure, slightly different data).
struct SdpState {
    RVec z, u;
    double rho = 1.0;
};

struct SdpOptions {
    double tol_feas = 1e-7;
    double tol_gap = 1e-6;
    int max_iters = 20000;
    double alpha = 1.6; // over-relaxation
    SdpState* warm = nullptr;
    bool dump = false;
};

namespace detail {
inline thread_local long g_sdp_solve_count = 0;
}

inline long sdp_solve_count() { return detail::g_sdp_solve_count; }
inline void reset_sdp_solve_count() { detail::g_sdp_solve_count = 0; }

// Debug dump of the scaled problem data for external cross-checking.
inline void dump_problem(std::ostream& os, const SdpProblem& p) {
    os << "sdp dim " << p.dim << " has_xi " << (p.has_xi ? 1 : 0) << " xi_obj " << p.xi_obj
       << " m " << p.constraints.size() << "\n";
    os.precision(17);
    os << "C\n";
    for (int i = 0; i < p.dim; ++i) {
        for (int j = 0; j < p.dim; ++j)
            os << p.C(i, j).real() << ' ' << p.C(i, j).imag() << ' ';
        os << '\n';
    }
    int idx = 0;
    for (const auto& c : p.constraints) {
        os << "A " << idx++ << " sense "
           << (c.sense == Sense::LE ? "<=" : (c.sense == Sense::EQ ? "=" : ">=")) << " rhs "
           << c.rhs << " xi " << c.xi_coeff << '\n';
        for (int i = 0; i < p.dim; ++i) {
            for (int j = 0; j < p.dim; ++j)
                os << c.A(i, j).real() << ' ' << c.A(i, j).imag() << ' ';
            os << '\n';
        }
    }
}

inline SdpSolution sdp_solve(const SdpProblem& p, SdpOptions opt = {}) {
    ++detail::g_sdp_solve_count;
    const int n = p.dim;
    const Eigen::Index nx = svec_dim(n);
    const int m = static_cast<int>(p.constraints.size());

    int m_ineq = 0;
    for (const auto& c : p.constraints)
        if (c.sense != Sense::EQ) ++m_ineq;

    const Eigen::Index d = nx + (p.has_xi ? 1 : 0) + m_ineq;
    const Eigen::Index xi_off = nx;
    const Eigen::Index slack_off = nx + (p.has_xi ? 1 : 0);

    // Build E v = b with row normalization. GE rows are negated to LE; LE rows
    // get a +1 slack.
    RMat E = RMat::Zero(m, d);
    RVec b(m);
    {
        int si = 0;
        for (int j = 0; j < m; ++j) {
            const auto& c = p.constraints[j];
            if (c.A.rows() != n || c.A.cols() != n)
                throw DimensionError("sdp: constraint matrix has wrong dimension");
            const double flip = (c.sense == Sense::GE) ? -1.0 : 1.0;
            RVec a = svec(c.A) * flip;
            double xic = flip * c.xi_coeff;
            double rhs = flip * c.rhs;
            double nrm = std::sqrt(a.squaredNorm() + xic * xic);
            if (nrm < 1e-300) nrm = 1.0;
            E.row(j).head(nx) = a / nrm;
            if (p.has_xi) E(j, xi_off) = xic / nrm;
            if (c.sense != Sense::EQ) E(j, slack_off + si++) = 1.0 / nrm;
            b(j) = rhs / nrm;
        }
    }

    // objective (minimize -obj), unit-normalized
    RVec cvec = RVec::Zero(d);
    if (p.C.size() > 0) cvec.head(nx) = -svec(p.C);
    if (p.has_xi) cvec(xi_off) = -p.xi_obj;
    double cnorm = cvec.norm();
    if (cnorm < 1e-300) cnorm = 1.0;
    RVec c = cvec / cnorm;

    if (opt.dump) dump_problem(std::cerr, p);

    RMat M = E * E.transpose();
    M.diagonal().array() += 1e-12;
    Eigen::LDLT<RMat> Mf(M);

    RVec z = RVec::Zero(d), u = RVec::Zero(d);
    double rho = 1.0;
    if (opt.warm && opt.warm->z.size() == d) {
        z = opt.warm->z;
        u = opt.warm->u;
        rho = opt.warm->rho;
    }
    // feasible-ish start for the last-diagonal=1 style problems
    RVec v = RVec::Zero(d), y = RVec::Zero(m);

    Eigen::SelfAdjointEigenSolver<CMat> eig;
    const double bnorm = 1.0 + b.norm();

    double best_res = std::numeric_limits<double>::infinity();
    int best_res_iter = 0;
    double rp = 0, rd = 0, gap = 0;
    int it = 0;
    SdpStatus status = SdpStatus::MaxIters;

    for (it = 1; it <= opt.max_iters; ++it) {
        // affine projection
        RVec w = z - u - c / rho;
        RVec lam = Mf.solve(E * w - b);
        v = w - E.transpose() * lam;
        y = rho * lam; // multiplier estimate for E v = b

        // over-relaxation + cone projection
        RVec vh = opt.alpha * v + (1.0 - opt.alpha) * z;
        RVec zw = vh + u;
        RVec z_new(d);
        {
            eig.compute(smat(zw.data(), n), Eigen::ComputeEigenvectors);
            const RVec ev = eig.eigenvalues().cwiseMax(0.0);
            CMat Xp = eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().adjoint();
            svec_into(Xp, z_new.data());
            if (p.has_xi) z_new(xi_off) = zw(xi_off);
            for (Eigen::Index i = slack_off; i < d; ++i) z_new(i) = std::max(0.0, zw(i));
        }
        u += vh - z_new;

        rd = rho * (z_new - z).norm() / std::sqrt(static_cast<double>(d));
        z = z_new;
        rp = (v - z).norm() / std::sqrt(static_cast<double>(d));
        const double aff = (E * z - b).norm() / bnorm;

        const double pobj = c.dot(z);
        const double dobj = -b.dot(y);
        gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

        const double comb = std::max({rp, rd, aff});
        if (comb < best_res * 0.99) {
            best_res = comb;
            best_res_iter = it;
        }

        if (rp <= opt.tol_feas && aff <= opt.tol_feas && rd <= 10.0 * opt.tol_feas &&
            gap <= opt.tol_gap) {
            status = SdpStatus::Optimal;
            break;
        }
        // stalled well above tolerance -> no strictly feasible point in reach
        if (it - best_res_iter >= 500 && comb > 1e3 * opt.tol_feas) {
            status = SdpStatus::Infeasible;
            break;
        }
        if ((it % 50) == 0) {
            if (rp > 10.0 * rd && rho < 1e6) {
                rho *= 2.0;
                u *= 0.5;
            } else if (rd > 10.0 * rp && rho > 1e-6) {
                rho *= 0.5;
                u *= 2.0;
            }
        }
    }

    if (opt.warm) {
        opt.warm->z = z;
        opt.warm->u = u;
        opt.warm->rho = rho;
    }

    SdpSolution sol;
    sol.X = smat(z.data(), n);
    sol.xi = p.has_xi ? z(xi_off) : 0.0;
    sol.status = status;
    sol.primal_residual = rp;
    sol.dual_residual = rd;
    sol.gap = gap;
    sol.iterations = std::min(it, opt.max_iters);
    sol.objective = 0.0;
    if (p.C.size() > 0) sol.objective += (p.C.cwiseProduct(sol.X.transpose())).sum().real();
    if (p.has_xi) sol.objective += p.xi_obj * sol.xi;
    if (!sol.X.allFinite()) sol.status = SdpStatus::NumericalTrouble;
    return sol;
}

struct FeasibilityResult {
    bool feasible = false;
    CMat X;
};

inline FeasibilityResult sdp_feasibility(SdpProblem p, SdpOptions opt = {}) {
    p.C = CMat::Zero(p.dim, p.dim);
    p.xi_obj = 0.0;
    auto sol = sdp_solve(p, opt);
    FeasibilityResult r;
    r.feasible = (sol.status == SdpStatus::Optimal);
    r.X = sol.X;
    return r;
}

} // namespace risim
