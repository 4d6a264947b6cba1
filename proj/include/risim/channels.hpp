// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iostream>
#include <vector>

#include "risim/common.hpp"

namespace risim {

// All channels of the system, sized (M BS antennas, K users, L device pairs,
// N RIS elements):
//   H_RB : M x N   RIS -> BS
//   H_UD : L x K   user -> RxD
//   H_DD : L x L   TxD -> RxD
//   H_UB : M x K   user -> BS (columns h_UB[k])
//   H_DB : M x L   TxD -> BS
//   H_RD : L x N   RIS -> RxD (row l is h_RD[l]^H)
//   H_UR : N x K   user -> RIS
//   H_DR : N x L   TxD -> RIS
struct ChannelSet {
    CMat H_RB, H_UD, H_DD, H_UB, H_DB, H_RD, H_UR, H_DR;

    void check_dims(int M, int K, int L, int N) const {
        auto req = [](const CMat& m, int r, int c, const char* name) {
            if (m.rows() != r || m.cols() != c)
                throw DimensionError(std::string("channel ") + name + " has wrong shape");
        };
        req(H_RB, M, N, "H_RB");
        req(H_UD, L, K, "H_UD");
        req(H_DD, L, L, "H_DD");
        req(H_UB, M, K, "H_UB");
        req(H_DB, M, L, "H_DB");
        req(H_RD, L, N, "H_RD");
        req(H_UR, N, K, "H_UR");
        req(H_DR, N, L, "H_DR");
    }
};

// Cascaded channels through the RIS. These are the quantities assumed known;
// the individual RIS links exist only at generation time.
//
// g_dd_row[l][lp] is the 1xN row (g_DD)^H with f_DD(l,lp) = h + row * phi,
// likewise g_ud_row[l][k]. G_UB[k] and G_DB[l] are M x N.
struct CascadedChannels {
    std::vector<std::vector<CVec>> g_dd_row; // [L][L], each length N
    std::vector<std::vector<CVec>> g_ud_row; // [L][K]
    std::vector<CMat> G_UB;                  // [K], M x N
    std::vector<CMat> G_DB;                  // [L], M x N
};

inline CascadedChannels build_cascaded(const ChannelSet& ch) {
    const int L = static_cast<int>(ch.H_DD.rows());
    const int K = static_cast<int>(ch.H_UB.cols());
    const int N = static_cast<int>(ch.H_RB.cols());

    CascadedChannels c;
    c.g_dd_row.assign(L, std::vector<CVec>(L));
    c.g_ud_row.assign(L, std::vector<CVec>(K));
    c.G_UB.resize(K);
    c.G_DB.resize(L);

    for (int l = 0; l < L; ++l) {
        // row l of H_RD is already (h_RD[l])^H
        const auto hrd_row = ch.H_RD.row(l);
        for (int lp = 0; lp < L; ++lp) {
            CVec g(N);
            for (int n = 0; n < N; ++n) g(n) = hrd_row(n) * ch.H_DR(n, lp);
            c.g_dd_row[l][lp] = std::move(g);
        }
        for (int k = 0; k < K; ++k) {
            CVec g(N);
            for (int n = 0; n < N; ++n) g(n) = hrd_row(n) * ch.H_UR(n, k);
            c.g_ud_row[l][k] = std::move(g);
        }
    }
    for (int k = 0; k < K; ++k) c.G_UB[k] = ch.H_RB * ch.H_UR.col(k).asDiagonal();
    for (int l = 0; l < L; ++l) c.G_DB[l] = ch.H_RB * ch.H_DR.col(l).asDiagonal();
    return c;
}

struct PhaseShift {
    CVec phi;

    static constexpr double kFeasSlack = 1e-9;

    bool feasible(double slack = kFeasSlack) const {
        for (Eigen::Index i = 0; i < phi.size(); ++i)
            if (std::abs(phi(i)) > 1.0 + slack) return false;
        return true;
    }
    double max_abs() const {
        double m = 0.0;
        for (Eigen::Index i = 0; i < phi.size(); ++i) m = std::max(m, std::abs(phi(i)));
        return m;
    }
};

// f_UB[k] = h_UB[k] + G_UB[k] * phi,  f_DB[l] = h_DB[l] + G_DB[l] * phi
struct EffectiveBsChannels {
    std::vector<CVec> f_UB; // [K], length M
    std::vector<CVec> f_DB; // [L], length M
};

inline EffectiveBsChannels effective_bs_channels(const ChannelSet& ch,
                                                 const CascadedChannels& casc,
                                                 const PhaseShift& ps) {
    const int K = static_cast<int>(ch.H_UB.cols());
    const int L = static_cast<int>(ch.H_DB.cols());
    EffectiveBsChannels e;
    e.f_UB.resize(K);
    e.f_DB.resize(L);
    for (int k = 0; k < K; ++k) e.f_UB[k] = ch.H_UB.col(k) + casc.G_UB[k] * ps.phi;
    for (int l = 0; l < L; ++l) e.f_DB[l] = ch.H_DB.col(l) + casc.G_DB[l] * ps.phi;
    return e;
}

// f_DD(l,lp) = H_DD(l,lp) + g_dd_row[l][lp] * phi, f_UD analogous.
struct EffectiveDeviceChannels {
    CMat f_DD; // L x L
    CMat f_UD; // L x K
};

inline EffectiveDeviceChannels effective_device_channels(const ChannelSet& ch,
                                                         const CascadedChannels& casc,
                                                         const PhaseShift& ps) {
    const int L = static_cast<int>(ch.H_DD.rows());
    const int K = static_cast<int>(ch.H_UD.cols());
    EffectiveDeviceChannels e;
    e.f_DD.resize(L, L);
    e.f_UD.resize(L, K);
    for (int l = 0; l < L; ++l) {
        for (int lp = 0; lp < L; ++lp)
            e.f_DD(l, lp) =
                ch.H_DD(l, lp) + (casc.g_dd_row[l][lp].transpose() * ps.phi).value();
        for (int k = 0; k < K; ++k)
            e.f_UD(l, k) =
                ch.H_UD(l, k) + (casc.g_ud_row[l][k].transpose() * ps.phi).value();
    }
    return e;
}

// --- fixture serialization ------------------------------------------------
// Text format: one "name rows cols" header per matrix followed by row-major
// "re im" pairs, full double precision.

inline void write_cmat(std::ostream& os, const char* name, const CMat& m) {
    os << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    os.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            os << m(i, j).real() << ' ' << m(i, j).imag() << (j + 1 < m.cols() ? ' ' : '\n');
        if (m.cols() == 0) os << '\n';
    }
}

inline CMat read_cmat(std::istream& is, const std::string& expect_name) {
    std::string name;
    Eigen::Index rows, cols;
    if (!(is >> name >> rows >> cols) || name != expect_name)
        throw std::runtime_error("fixture: expected matrix " + expect_name);
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            double re, im;
            if (!(is >> re >> im)) throw std::runtime_error("fixture: truncated matrix data");
            m(i, j) = cplx(re, im);
        }
    return m;
}

inline void save_channels(std::ostream& os, const ChannelSet& ch) {
    write_cmat(os, "H_RB", ch.H_RB);
    write_cmat(os, "H_UD", ch.H_UD);
    write_cmat(os, "H_DD", ch.H_DD);
    write_cmat(os, "H_UB", ch.H_UB);
    write_cmat(os, "H_DB", ch.H_DB);
    write_cmat(os, "H_RD", ch.H_RD);
    write_cmat(os, "H_UR", ch.H_UR);
    write_cmat(os, "H_DR", ch.H_DR);
}

inline ChannelSet load_channels(std::istream& is) {
    ChannelSet ch;
    ch.H_RB = read_cmat(is, "H_RB");
    ch.H_UD = read_cmat(is, "H_UD");
    ch.H_DD = read_cmat(is, "H_DD");
    ch.H_UB = read_cmat(is, "H_UB");
    ch.H_DB = read_cmat(is, "H_DB");
    ch.H_RD = read_cmat(is, "H_RD");
    ch.H_UR = read_cmat(is, "H_UR");
    ch.H_DR = read_cmat(is, "H_DR");
    return ch;
}

} // namespace risim
