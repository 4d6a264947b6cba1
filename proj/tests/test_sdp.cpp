// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "risim/rng.hpp"
#include "risim/sdp.hpp"

using namespace risim;

namespace {

CMat random_hermitian(int n, RandomStream& rng) {
    const CMat A = rng.cnormal_mat(n, n);
    return 0.5 * (A + A.adjoint());
}

// maximize tr(CX) s.t. tr(X) = 1, X PSD  ->  lambda_max(C)
SdpProblem lambda_max_problem(const CMat& C) {
    SdpProblem p;
    p.dim = static_cast<int>(C.rows());
    p.C = C;
    SdpConstraint tr;
    tr.A = CMat::Identity(p.dim, p.dim);
    tr.sense = Sense::EQ;
    tr.rhs = 1.0;
    p.constraints.push_back(tr);
    return p;
}

} // namespace

TEST_CASE("sdp_solve: lambda_max oracle on random Hermitian 8x8") {
    RandomStream rng(1);
    for (int t = 0; t < 5; ++t) {
        const CMat C = random_hermitian(8, rng);
        const SdpSolution sol = sdp_solve(lambda_max_problem(C));
        REQUIRE(sol.status == SdpStatus::Optimal);
        Eigen::SelfAdjointEigenSolver<CMat> eig(C);
        const double lmax = eig.eigenvalues()(7);
        CHECK(sol.objective == doctest::Approx(lmax).epsilon(1e-6));
        // X should be (close to) the top eigenvector outer product
        const CVec v = eig.eigenvectors().col(7);
        CHECK((sol.X - v * v.adjoint()).norm() < 1e-4);
    }
}

TEST_CASE("sdp_solve: n=1 scalar LP, maximize x s.t. x <= 5") {
    SdpProblem p;
    p.dim = 1;
    p.C = CMat::Ones(1, 1);
    SdpConstraint c;
    c.A = CMat::Ones(1, 1);
    c.sense = Sense::LE;
    c.rhs = 5.0;
    p.constraints.push_back(c);
    const SdpSolution sol = sdp_solve(p);
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(sol.X(0, 0).real() == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("sdp_solve: diagonal entry cannot exceed the trace") {
    // tr(X) = 1 together with X_11 >= 2 is infeasible
    SdpProblem p;
    p.dim = 4;
    p.C = CMat::Zero(4, 4);
    SdpConstraint tr;
    tr.A = CMat::Identity(4, 4);
    tr.sense = Sense::EQ;
    tr.rhs = 1.0;
    p.constraints.push_back(tr);
    SdpConstraint e11;
    e11.A = CMat::Zero(4, 4);
    e11.A(0, 0) = 1.0;
    e11.sense = Sense::GE;
    e11.rhs = 2.0;
    p.constraints.push_back(e11);
    const SdpSolution sol = sdp_solve(p);
    CHECK(sol.status == SdpStatus::Infeasible);
}

TEST_CASE("sdp_feasibility: trace simplex is feasible") {
    SdpProblem p;
    p.dim = 3;
    SdpConstraint tr;
    tr.A = CMat::Identity(3, 3);
    tr.sense = Sense::EQ;
    tr.rhs = 1.0;
    p.constraints.push_back(tr);
    const auto r = sdp_feasibility(p);
    CHECK(r.feasible);
    CHECK(r.X.trace().real() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("sdp_feasibility: contradictory equalities are infeasible") {
    SdpProblem p;
    p.dim = 3;
    SdpConstraint a;
    a.A = CMat::Identity(3, 3);
    a.sense = Sense::EQ;
    a.rhs = 1.0;
    p.constraints.push_back(a);
    a.rhs = 2.0;
    p.constraints.push_back(a);
    const auto r = sdp_feasibility(p);
    CHECK(!r.feasible);
}

TEST_CASE("sdp_feasibility: construct-then-solve on random instances") {
    RandomStream rng(2);
    for (int t = 0; t < 10; ++t) {
        const int n = 4;
        const CMat G = rng.cnormal_mat(n, n);
        const CMat X0 = G * G.adjoint(); // PSD by construction
        SdpProblem p;
        p.dim = n;
        for (int j = 0; j < 5; ++j) {
            SdpConstraint c;
            c.A = random_hermitian(n, rng);
            c.sense = Sense::EQ;
            c.rhs = (c.A.cwiseProduct(X0.transpose())).sum().real();
            p.constraints.push_back(c);
        }
        const auto r = sdp_feasibility(p);
        REQUIRE(r.feasible);
        for (const auto& c : p.constraints) {
            const double got = (c.A.cwiseProduct(r.X.transpose())).sum().real();
            CHECK(got == doctest::Approx(c.rhs).epsilon(1e-4));
        }
    }
}

TEST_CASE("sdp_solve: scalar variable in objective and constraints") {
    // maximize xi s.t. xi <= tr(X), tr(X) = 2, X PSD  ->  xi = 2
    SdpProblem p;
    p.dim = 2;
    p.has_xi = true;
    p.xi_obj = 1.0;
    p.C = CMat::Zero(2, 2);
    SdpConstraint tr;
    tr.A = CMat::Identity(2, 2);
    tr.sense = Sense::EQ;
    tr.rhs = 2.0;
    p.constraints.push_back(tr);
    SdpConstraint lim;
    lim.A = -CMat::Identity(2, 2);
    lim.xi_coeff = 1.0;
    lim.sense = Sense::LE;
    lim.rhs = 0.0;
    p.constraints.push_back(lim);
    const SdpSolution sol = sdp_solve(p);
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(sol.xi == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("sdp_solve: solution X is Hermitian and essentially PSD") {
    RandomStream rng(3);
    const CMat C = random_hermitian(6, rng);
    const SdpSolution sol = sdp_solve(lambda_max_problem(C));
    CHECK((sol.X - sol.X.adjoint()).norm() < 1e-10);
    Eigen::SelfAdjointEigenSolver<CMat> eig(sol.X);
    CHECK(eig.eigenvalues()(0) >= -1e-8 * sol.X.norm());
}

TEST_CASE("sdp_solve: deterministic, identical inputs give identical outputs") {
    RandomStream rng(4);
    const CMat C = random_hermitian(5, rng);
    const SdpSolution a = sdp_solve(lambda_max_problem(C));
    const SdpSolution b = sdp_solve(lambda_max_problem(C));
    CHECK(a.X == b.X);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("sdp solve counter") {
    reset_sdp_solve_count();
    RandomStream rng(5);
    const CMat C = random_hermitian(3, rng);
    sdp_solve(lambda_max_problem(C));
    sdp_solve(lambda_max_problem(C));
    CHECK(sdp_solve_count() == 2);
}

TEST_CASE("dump_problem emits parsable text") {
    SdpProblem p;
    p.dim = 2;
    p.C = CMat::Identity(2, 2);
    SdpConstraint tr;
    tr.A = CMat::Identity(2, 2);
    tr.sense = Sense::EQ;
    tr.rhs = 1.0;
    p.constraints.push_back(tr);
    std::ostringstream os;
    dump_problem(os, p);
    CHECK(os.str().find("sdp dim 2") != std::string::npos);
    CHECK(os.str().find("rhs 1") != std::string::npos);
}
