#include <gtest/gtest.h>

#include <cmath>

#include "phasebound/catalog.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"
#include "phasebound/phase_space.hpp"

using namespace phasebound;

TEST(PhaseSpace, NumberStateQMaximum) {
    for (int n : {1, 2, 5}) {
        auto e = number_state(n);
        const double expected = std::exp(-n) * std::pow(n, n) / std::tgamma(n + 1.0) / M_PI;
        auto numeric = q_max(e.op);
        EXPECT_NEAR(numeric.value, expected, 1e-9 * expected);
        EXPECT_NEAR(numeric.argmax.abs(), std::sqrt(n), 1e-4);
        auto closed = q_max(e);
        EXPECT_EQ(closed.method, MaxMethod::closed_form);
        EXPECT_NEAR(closed.value, expected, 1e-15);
    }
}

TEST(PhaseSpace, NonRadialMaximumOfDisplacedCat) {
    auto cat = cat_state({1.5, 0.5}, Parity::even);
    auto numeric = q_max(cat.op);
    // Two lobes near +-alpha; brute-force on a fine grid as the oracle.
    double best = 0.0;
    for (int i = -300; i <= 300; ++i) {
        for (int j = -300; j <= 300; ++j) best = std::max(best, cat.analytic.q({i * 0.01, j * 0.01}));
    }
    EXPECT_GE(numeric.value, best - 1e-12);
    EXPECT_LT(numeric.value - best, 1e-4);
}

TEST(PhaseSpace, QIsNormalized) {
    auto e = photon_added_thermal(0.5);
    // Radial integral 2 pi int r Q(r) dr of a phase-symmetric Q.
    auto r = numerics::integrate_adaptive([&](double rad) { return 2 * M_PI * rad * q_value(e, {rad, 0.0}); }, 0.0,
                                          20.0);
    EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(PhaseSpace, QValueOutsideValidDiscThrows) {
    // |alpha = 1> cut at D = 13 discards about 6e-11 of its weight.
    const int dim = 13;
    FockVector v(FockSpace(dim), coherent_amplitudes({1.0, 0.0}, dim), numerics::poisson_tail(dim, 1.0));
    auto op = FockOperator::pure_state(v);
    EXPECT_NO_THROW(q_value(op, {0.5, 0.0}));
    EXPECT_THROW(q_value(op, {20.0, 0.0}), TruncationError);
    // Exactly supported operators have no discarded part to couple to.
    auto e = number_state(1);
    const double exact = 400.0 * std::exp(-400.0) / M_PI;
    EXPECT_NEAR(q_value(e.op, {20.0, 0.0}), exact, 1e-12 * exact);
}

TEST(PhaseSpace, MarginalMatchesClosedForms) {
    for (const auto& e : {vacuum_state(), squeezed_vacuum(0.2), thermal_state(0.8), photon_added_thermal(1.2)}) {
        ASSERT_TRUE(e.analytic.q_marginal);
        for (double x : {-1.3, -0.2, 0.0, 0.7}) EXPECT_NEAR(q_marginal(e.op, x), e.analytic.q_marginal(x), 1e-11);
        EXPECT_NEAR(q_marginal_max(e.op).value, *e.analytic.q_marginal_max, 1e-9);
    }
}

TEST(PhaseSpace, MarginalOfNonDiagonalState) {
    auto c = coherent_state({0.6, 0.9});
    // Q~ of |alpha> is a unit-variance-1/2 Gaussian in x centred at Re alpha.
    for (double x : {-0.5, 0.6, 1.4}) {
        EXPECT_NEAR(q_marginal(c.op, x), std::exp(-(x - 0.6) * (x - 0.6)) / std::sqrt(M_PI), 1e-11);
    }
}

TEST(PhaseSpace, MaximizeLineFindsInteriorPeak) {
    auto m = maximize_line([](double x) { return std::sin(3 * x) * std::exp(-x * x); }, -3.0, 3.0);
    EXPECT_NEAR(m.argmax.re, 0.430447, 1e-5);
}

TEST(PhaseSpace, PValueForThermalAndSingularTags) {
    EXPECT_THROW(p_value(number_state(1), {0.0, 0.0}), SingularP);
    EXPECT_THROW(p_value(squeezed_vacuum(0.2), {0.0, 0.0}), SingularP);
    EXPECT_GT(p_value(thermal_state(1.0), {0.3, 0.1}), 0.0);
}
