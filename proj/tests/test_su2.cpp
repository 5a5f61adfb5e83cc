#include <gtest/gtest.h>

#include <cmath>
#include <utility>

#include "phasebound/errors.hpp"
#include "phasebound/su2.hpp"

using namespace phasebound;

namespace {

Matrix basis_projector(double j, double m) {
    const int d = static_cast<int>(std::lround(2 * j)) + 1;
    Matrix p = Matrix::Zero(d, d);
    const int i = static_cast<int>(std::lround(m + j));
    p(i, i) = 1.0;
    return p;
}

}  // namespace

TEST(Su2, SpinMatricesSatisfyCommutationAndCasimir) {
    for (double j : {0.5, 1.0, 1.5, 3.0}) {
        auto s = spin_matrices(j);
        const Complex i(0.0, 1.0);
        Matrix comm = s[0] * s[1] - s[1] * s[0];
        EXPECT_LT((comm - i * s[2]).cwiseAbs().maxCoeff(), 1e-13);
        Matrix cas = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
        const int d = static_cast<int>(2 * j + 1);
        EXPECT_LT((cas - j * (j + 1) * Matrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Su2, CoherentStateOverlapWithPole) {
    // |<j, j|j, Omega>|^2 = cos^{4j}(theta/2).
    const double j = 1.5, theta = 1.1;
    Vector v = su2_coherent(j, {theta, 0.4});
    EXPECT_NEAR(v.squaredNorm(), 1.0, 1e-14);
    EXPECT_NEAR(std::norm(v(3)), std::pow(std::cos(theta / 2), 4 * j), 1e-14);
}

TEST(Su2, QIntegratesToTrace) {
    auto st = SpinOperator::state(1.0, basis_projector(1.0, 0.0));
    double s = 0.0;
    const int nt = 400, np = 64;
    for (int a = 0; a < nt; ++a) {
        const double th = (a + 0.5) * M_PI / nt;
        for (int b = 0; b < np; ++b) s += su2_q(st, {th, 2 * M_PI * b / np}) * std::sin(th) * (M_PI / nt) * (2 * M_PI / np);
    }
    EXPECT_NEAR(s, 1.0, 1e-4);
}

TEST(Su2, SelfTestOnBasisState) {
    auto st = SpinOperator::state(1.0, basis_projector(1.0, 0.0));
    auto povm = SpinOperator::povm_element(1.0, basis_projector(1.0, 0.0));
    auto r = su2_state_test(st, povm);
    EXPECT_NEAR(r.probability, 1.0, 1e-15);
    EXPECT_NEAR(r.bound, 0.5, 1e-9);
    EXPECT_NEAR(r.violation_pct, 100.0, 1e-6);
}

TEST(Su2, PhaseAveragedProbe) {
    auto probe = phase_averaged_equatorial(1.0);
    EXPECT_NEAR(probe.matrix()(0, 0).real(), 0.25, 1e-15);
    EXPECT_NEAR(probe.matrix()(1, 1).real(), 0.5, 1e-15);
    auto r = su2_measurement_test(SpinOperator::povm_element(1.0, basis_projector(1.0, 0.0)), probe);
    EXPECT_NEAR(r.probability, 0.5, 1e-15);
    EXPECT_NEAR(r.bound, 0.375, 1e-8);
    EXPECT_NEAR(r.violation_pct, 100.0 / 3.0, 1e-5);
    EXPECT_THROW(phase_averaged_equatorial(2.0), UnsupportedJ);
}

TEST(Su2, CovarianceOfBasisState) {
    auto st = SpinOperator::state(1.0, basis_projector(1.0, 0.0));
    Eigen::Matrix3d z = covariance_z(st);
    Eigen::Matrix3d target = Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal();
    EXPECT_LT((z - target).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(covariance_z_min_eigenvalue(st), -1.0, 1e-12);
}

TEST(Su2, CoherentStatesHaveSemidefiniteCovariance) {
    // The indicator is only meaningful for j = 1; for j = 1/2 the -delta term
    // alone makes Z indefinite (Z_zz = -3/4 on |1/2, 1/2>).
    for (auto [theta, phi] : {std::pair{0.0, 0.0}, {0.7, -1.2}, {2.1, 0.4}}) {
        Vector v = su2_coherent(1.0, {theta, phi});
        auto st = SpinOperator::state(1.0, v * v.adjoint());
        EXPECT_NEAR(covariance_z_min_eigenvalue(st), 0.0, 1e-12);
    }
    Vector half = su2_coherent(0.5, {0.0, 0.0});
    EXPECT_NEAR(covariance_z_min_eigenvalue(SpinOperator::state(0.5, half * half.adjoint())), -0.75, 1e-12);
}

TEST(Su2, ClosedFormAndGridMaximaAgree) {
    Vector v = su2_coherent(0.5, {0.9, 0.3});
    Matrix m = 0.7 * v * v.adjoint() + 0.15 * Matrix::Identity(2, 2);
    auto op = SpinOperator::povm_element(0.5, m);
    auto closed = su2_q_max(op);
    auto grid = su2_q_max_numeric(op);
    EXPECT_TRUE(closed.closed_form);
    EXPECT_NEAR(closed.value, grid.value, 1e-9);
    EXPECT_NEAR(closed.argmax.theta, 0.9, 1e-5);
}

TEST(Su2, SpinHalfCannotViolate) {
    auto chk = spin_half_no_violation_check(20000, 17);
    EXPECT_EQ(chk.state_violations, 0);
    EXPECT_EQ(chk.measurement_violations, 0);
    EXPECT_LE(chk.max_ratio, 1.0 + 1e-12);
    EXPECT_LT(chk.max_numeric_discrepancy, 1e-8);
}

TEST(Su2, Validation) {
    EXPECT_THROW(SpinOperator::state(0.7, Matrix::Identity(2, 2) * 0.5), UnsupportedJ);
    EXPECT_THROW(SpinOperator::state(1.0, Matrix::Identity(2, 2) * 0.5), SpaceMismatch);
}
