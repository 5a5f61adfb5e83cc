#include <gtest/gtest.h>

#include <cmath>

#include "phasebound/catalog.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"
#include "phasebound/statistics.hpp"

using namespace phasebound;

namespace {

double gaussian(double x, double mean, double var) {
    return std::exp(-(x - mean) * (x - mean) / (2 * var)) / std::sqrt(2 * M_PI * var);
}

}  // namespace

TEST(Statistics, VacuumDensityAtOrigin) {
    EXPECT_NEAR(quadrature_density(vacuum_state().op, 0.0), std::sqrt(2.0 / M_PI), 1e-15);
}

TEST(Statistics, ThermalIsGaussianWithWidenedVariance) {
    const double n_tc = 1.7;
    auto e = thermal_state(n_tc);
    const double var = (1 + 2 * n_tc) / 4;
    for (double x : {-2.0, -0.4, 0.0, 1.1}) {
        for (double theta : {0.0, 0.9}) EXPECT_NEAR(quadrature_density(e.op, x, theta), gaussian(x, 0, var), 1e-10);
    }
}

TEST(Statistics, CoherentDensityFollowsRotatedMean) {
    const PhasePoint a{0.8, 0.5};
    auto e = coherent_state(a);
    const double theta = 0.7;
    const double mean = a.re * std::cos(theta) - a.im * std::sin(theta);
    for (double x : {-0.5, 0.3, 1.2}) EXPECT_NEAR(quadrature_density(e.op, x, theta), gaussian(x, mean, 0.25), 1e-10);
}

TEST(Statistics, DensityNormalizedAndNonnegative) {
    for (const auto& e : {photon_added_thermal(0.7), cat_state({1.1, 0.4}, Parity::odd), number_state(3),
                          thermal_number_mixture(0.5, 9.0, 1)}) {
        auto r = numerics::integrate_adaptive([&](double x) { return quadrature_density(e.op, x, 0.3); }, -20.0, 20.0);
        EXPECT_NEAR(r.value, 1.0 - e.op.truncation_loss(), 1e-8) << e.label;
        for (double x = -4.0; x <= 4.0; x += 0.05) EXPECT_GE(quadrature_density(e.op, x, 0.3), -1e-13);
    }
}

TEST(Statistics, EvenCatImaginaryAlphaClosedForm) {
    const double a = 1.3;
    auto e = cat_state({0.0, a}, Parity::even, {60});
    const double u = a * a;
    for (double x : {0.0, 0.2, 0.9}) {
        const double closed = std::exp(u) / std::cosh(u) * std::sqrt(2 / M_PI) * std::pow(std::cos(2 * a * x), 2) *
                              std::exp(-2 * x * x);
        EXPECT_NEAR(quadrature_density(e.op, x), closed, 1e-10);
        EXPECT_NEAR(quadrature_density(e, x), closed, 1e-12);
    }
}

TEST(Statistics, TopLevelContributionRaisesTruncationError) {
    // D = 300 keeps the discarded weight below tol_trunc but not the amplitudes
    // the density is built from.
    auto sq = squeezed_vacuum(0.1, {300});
    EXPECT_THROW(quadrature_density(sq.op, 0.0), TruncationError);
    EXPECT_NEAR(quadrature_density(sq, 0.0), 1.0 / (std::sqrt(2 * M_PI) * 0.1), 1e-12);
    auto roomy = squeezed_vacuum(0.1);
    EXPECT_NEAR(quadrature_density(roomy.op, 0.0), 1.0 / (std::sqrt(2 * M_PI) * 0.1), 1e-9);
}

TEST(Statistics, DiagonalStatesHaveAngleIndependentVariance) {
    auto e = photon_added_thermal(1.3);
    const double v0 = quadrature_variance(e.op, 0.0);
    for (double theta : {0.3, 1.0, 2.2, 3.0}) EXPECT_NEAR(quadrature_variance(e.op, theta), v0, 1e-12);
}

TEST(Statistics, GaussianPeakMatchesWidth) {
    auto e = thermal_state(0.6);
    const double dx = std::sqrt(1 + 2 * 0.6) / 2;
    EXPECT_NEAR(quadrature_density(e.op, 0.0), 1 / (std::sqrt(2 * M_PI) * dx), 1e-10);
}

TEST(Statistics, MandelParameter) {
    EXPECT_NEAR(mandel_q(number_state(4).op).q_mandel, -1.0, 1e-12);
    EXPECT_NEAR(mandel_q(coherent_state({1.0, 1.0}).op).q_mandel, 0.0, 1e-8);
    EXPECT_NEAR(mandel_q(thermal_state(2.5).op).q_mandel, 2.5, 1e-8);
    EXPECT_THROW(mandel_q(vacuum_state().op), DegenerateState);
}

TEST(Statistics, SqueezingPercentage) {
    EXPECT_EQ(squeezing_percentage(thermal_state(1.0).op), 0.0);
    EXPECT_LT(squeezing(thermal_state(1.0).op).raw, 0.0);
    EXPECT_NEAR(squeezing_percentage(vacuum_state().op), 0.0, 1e-12);
    EXPECT_NEAR(squeezing_percentage(squeezed_vacuum(0.3).op), 40.0, 1e-7);
}

TEST(Statistics, RotationOfCoherentState) {
    const PhasePoint a{1.0, 0.2};
    const double theta = 0.8;
    auto rotated = rotate_phase(coherent_state(a).op, theta);
    auto target = coherent_state(PhasePoint::polar(a.abs(), std::atan2(a.im, a.re) + theta));
    EXPECT_LT((rotated.matrix() - target.op.embedded(rotated.dim()).matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Statistics, NumberDistributionAccessors) {
    auto d = number_statistics(number_state(2).op);
    EXPECT_EQ(d.at(2), 1.0);
    EXPECT_EQ(d.at(100), 0.0);
    EXPECT_EQ(d.mean(), 2.0);
}
