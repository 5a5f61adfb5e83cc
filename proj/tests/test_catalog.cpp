#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "phasebound/catalog.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"
#include "phasebound/phase_space.hpp"
#include "phasebound/statistics.hpp"

using namespace phasebound;

namespace {

// Closed-form Q against the matrix path at a spread of phase-space points.
void expect_q_agrees(const CatalogEntry& e, double tol) {
    ASSERT_TRUE(e.analytic.q);
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-1.8, 1.8);
    for (int i = 0; i < 25; ++i) {
        PhasePoint a{u(gen), u(gen)};
        EXPECT_NEAR(e.analytic.q(a), q_value(e.op, a), tol) << e.label << " at " << a.re << "," << a.im;
    }
}

double squeezed_population(int n, double delta_x) {
    if (n % 2) return 0.0;
    const double r = -std::log(2.0 * delta_x);
    const int k = n / 2;
    return std::exp(numerics::log_factorial(2 * k) - 2 * numerics::log_factorial(k) - k * std::log(4.0)) *
           std::pow(std::tanh(r), 2 * k) / std::cosh(r);
}

}  // namespace

TEST(Catalog, ThermalMeanAndTruncation) {
    for (double n_tc : {0.3, 1.0, 9.0}) {
        auto e = thermal_state(n_tc);
        const double xi = thermal_ratio(n_tc);
        EXPECT_NEAR(number_statistics(e.op).mean(), n_tc, 1e-9);
        EXPECT_NEAR(e.op.truncation_loss(), std::pow(xi, e.op.dim()), 1e-15);
        EXPECT_NEAR(e.op.trace(), 1.0 - e.op.truncation_loss(), 1e-13);
        EXPECT_LE(e.op.truncation_loss(), kTolTrunc);
    }
}

TEST(Catalog, NumberAndCoherentStates) {
    auto n3 = number_state(3);
    EXPECT_NEAR(n3.op.matrix()(3, 3).real(), 1.0, 0.0);
    auto c = coherent_state({1.2, -0.4});
    EXPECT_NEAR(number_statistics(c.op).mean(), 1.6, 1e-9);
    EXPECT_EQ(c.p.tag, PTag::singular);
    EXPECT_THROW(p_value(c, {0.0, 0.0}), SingularP);
}

TEST(Catalog, ClosedFormQMatchesMatrix) {
    expect_q_agrees(number_state(2), 1e-12);
    expect_q_agrees(coherent_state({0.5, 0.5}), 1e-12);
    expect_q_agrees(thermal_state(1.5), 1e-11);
    expect_q_agrees(photon_added_thermal(0.7), 1e-11);
    expect_q_agrees(cat_state({1.3, 0.2}, Parity::even), 1e-11);
    expect_q_agrees(cat_state({0.9, -0.7}, Parity::odd), 1e-11);
    expect_q_agrees(squeezed_vacuum(0.3), 1e-10);
    expect_q_agrees(povm_coherent({0.4, -0.2}), 1e-12);
    expect_q_agrees(contaminated_one_photon(1.0, 0.1), 1e-12);
}

TEST(Catalog, SqueezedPopulations) {
    auto e = squeezed_vacuum(0.25);
    auto dist = number_statistics(e.op);
    for (int n = 0; n < 20; ++n) EXPECT_NEAR(dist.at(n), squeezed_population(n, 0.25), 1e-13);
    EXPECT_NEAR(min_variance_over_theta(e.op).value, 0.0625, 1e-9);
}

TEST(Catalog, PhotonAddedThermalPopulationsAndP) {
    const double n_tc = 0.7, b = 1.0 / (1.0 + n_tc), xi = n_tc / (1.0 + n_tc);
    auto e = photon_added_thermal(n_tc);
    auto dist = number_statistics(e.op);
    EXPECT_EQ(dist.at(0), 0.0);
    for (int n = 1; n < 12; ++n) EXPECT_NEAR(dist.at(n), b * b * n * std::pow(xi, n - 1), 1e-14);
    EXPECT_EQ(e.p.tag, PTag::regular_negative);
    EXPECT_LT(p_value(e, {0.0, 0.0}), 0.0);
    EXPECT_NEAR(p_value(e, {0.0, 0.0}), -1.0 / (M_PI * n_tc * n_tc), 1e-12);
}

TEST(Catalog, ThermalPIsPositiveGaussian) {
    auto e = thermal_state(2.0);
    EXPECT_EQ(e.p.tag, PTag::regular_nonnegative);
    EXPECT_NEAR(p_value(e, {1.0, 0.0}), std::exp(-0.5) / (2.0 * M_PI), 1e-14);
}

TEST(Catalog, EvenCatMandelParameter) {
    for (double a : {0.5, 1.0, 2.0}) {
        auto e = cat_state({a, 0.0}, Parity::even);
        const double u = a * a;
        EXPECT_NEAR(mandel_q(e.op).q_mandel, 2.0 * u / std::sinh(2.0 * u), 1e-9);
    }
    EXPECT_THROW(cat_state({0.0, 0.0}, Parity::odd), DegenerateState);
}

TEST(Catalog, MixtureValidationAndClassification) {
    EXPECT_THROW(mixture({{0.6, vacuum_state()}, {0.6, number_state(1)}}), WeightError);
    EXPECT_THROW(mixture({{-0.1, vacuum_state()}, {1.1, number_state(1)}}), WeightError);
    auto m = mixture({{0.5, thermal_state(1.0)}, {0.5, photon_added_thermal(1.0)}});
    EXPECT_EQ(m.p.tag, PTag::regular_negative);
    auto s = mixture({{0.5, thermal_state(1.0)}, {0.5, number_state(1)}});
    EXPECT_EQ(s.p.tag, PTag::singular);
    auto t = mixture({{0.5, thermal_state(1.0)}, {0.5, thermal_state(2.0)}});
    EXPECT_EQ(t.p.tag, PTag::regular_nonnegative);
    EXPECT_NEAR(number_statistics(t.op).mean(), 1.5, 1e-9);
}

TEST(Catalog, VacuumNumberMixture) {
    auto e = vacuum_number_mixture(0.3, 2);
    auto d = number_statistics(e.op);
    EXPECT_NEAR(d.at(0), 0.7, 1e-15);
    EXPECT_NEAR(d.at(2), 0.3, 1e-15);
    EXPECT_THROW(vacuum_number_mixture(1.5, 2), WeightError);
}

TEST(Catalog, PovmElements) {
    EXPECT_NEAR(povm_number(4).op.trace(), 1.0, 0.0);
    EXPECT_NEAR(povm_coherent({1.0, 0.0}).op.trace(), 1.0 / M_PI, 1e-10);
    EXPECT_NEAR(contaminated_one_photon(1.0, 0.1).op.trace(), 1.2, 1e-15);
    EXPECT_THROW(contaminated_one_photon(-0.1, 0.1), DomainError);
    EXPECT_THROW(contaminated_one_photon(1.2, 0.1), Error);
    EXPECT_NEAR(povm_quadrature(0.3).reduced_trace(), 1.0 / M_PI, 0.0);
}

TEST(Catalog, DoublingDimensionBarelyMovesExpectations) {
    using Make = std::function<CatalogEntry(const TruncationPolicy&)>;
    const std::vector<Make> makers = {
        [](const TruncationPolicy& p) { return coherent_state({1.2, -0.7}, p); },
        [](const TruncationPolicy& p) { return thermal_state(2.5, p); },
        [](const TruncationPolicy& p) { return photon_added_thermal(0.7, p); },
        [](const TruncationPolicy& p) { return cat_state({1.4, 0.3}, Parity::even, p); },
        [](const TruncationPolicy& p) { return squeezed_vacuum(0.3, p); },
    };
    for (const auto& make : makers) {
        auto a = make({});
        auto b = make({2 * a.op.dim()});
        const auto ma = mandel_q(a.op), mb = mandel_q(b.op);
        EXPECT_LT(std::abs(ma.mean - mb.mean), 10 * kTolTrunc) << a.label;
        EXPECT_LT(std::abs(ma.variance - mb.variance), 10 * kTolTrunc) << a.label;
        EXPECT_LT(std::abs(quadrature_variance(a.op, 0.4) - quadrature_variance(b.op, 0.4)), 10 * kTolTrunc) << a.label;
        for (PhasePoint z : {PhasePoint{0.0, 0.0}, PhasePoint{0.9, -0.4}, PhasePoint{-1.5, 1.1}}) {
            EXPECT_LT(std::abs(q_value(a.op, z) - q_value(b.op, z)), 10 * kTolTrunc) << a.label;
        }
        for (double x : {-1.0, 0.0, 0.6}) {
            EXPECT_LT(std::abs(quadrature_density(a.op, x, 0.4) - quadrature_density(b.op, x, 0.4)), 10 * kTolTrunc)
                << a.label;
        }
    }
}
