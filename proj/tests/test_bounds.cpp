#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "phasebound/bounds.hpp"
#include "phasebound/catalog.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/statistics.hpp"

using namespace phasebound;

TEST(Bounds, NumberBoundValues) {
    EXPECT_EQ(classical_number_bound(0), 1.0);
    EXPECT_NEAR(classical_number_bound(1), std::exp(-1.0), 1e-16);
    EXPECT_NEAR(classical_number_bound(2), 2 * std::exp(-2.0), 1e-16);
    const double stirling = classical_number_bound(50) * std::sqrt(2 * M_PI * 50);
    EXPECT_GT(stirling, 0.98);
    EXPECT_LT(stirling, 1.01);
}

TEST(Bounds, NumberBoundIsPoissonPeak) {
    // p_{b,n} is the largest Poisson weight of outcome n over all means.
    for (int n = 1; n < 15; ++n) {
        double best = 0.0;
        for (double m = 0.0; m < 30.0; m += 0.001) {
            best = std::max(best, std::exp(-m + n * std::log(std::max(m, 1e-300)) - std::lgamma(n + 1.0)));
        }
        EXPECT_NEAR(classical_number_bound(n), best, 1e-7);
    }
}

TEST(Bounds, OnePhotonMeasurementTest) {
    auto r = measurement_test(povm_number(1), number_state(1));
    EXPECT_EQ(r.probability, 1.0);
    EXPECT_NEAR(r.bound, std::exp(-1.0), 1e-12);
    EXPECT_TRUE(r.violated);
    EXPECT_NEAR(r.violation_pct, 100 * (std::exp(1.0) - 1), 1e-8);
    EXPECT_EQ(r.test_kind, TestKind::measurement_test);
}

TEST(Bounds, StateTestUsesNumberBound) {
    auto r = state_test(number_state(2), povm_number(2));
    EXPECT_NEAR(r.bound, classical_number_bound(2), 1e-12);
    EXPECT_TRUE(r.violated);
    EXPECT_FALSE(state_test(number_state(2), povm_number(1)).violated);
}

TEST(Bounds, SaturationIsNotViolation) {
    auto r = make_report(0.5, 0.5, TestKind::state_test, "x", false, Provenance::analytic, Provenance::analytic);
    EXPECT_FALSE(r.violated);
    EXPECT_EQ(r.violation_pct, 0.0);
    auto c = coherent_state({1.0, 0.0});
    EXPECT_FALSE(state_test(c, povm_number(1)).violated);
    EXPECT_NEAR(state_test(c, povm_number(1)).probability, classical_number_bound(1), 1e-10);
}

TEST(Bounds, CoherentProbesNeverViolate) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 40; ++i) {
        auto probe = coherent_state({u(gen), u(gen)});
        EXPECT_FALSE(measurement_test(povm_number(i % 7), probe).violated);
        EXPECT_FALSE(measurement_test(povm_coherent({u(gen), u(gen)}), probe).violated);
        EXPECT_FALSE(measurement_test(contaminated_one_photon(0.9, 0.05), probe).violated);
        // Quadrature elements have no finite trace, so only the state side applies.
        EXPECT_FALSE(state_test(probe, povm_quadrature(u(gen)), u(gen)).violated);
    }
}

TEST(Bounds, VacuumQuadratureMeasurementTest) {
    auto vac = vacuum_state();
    auto r = measurement_test(povm_quadrature(0.0), vac);
    EXPECT_NEAR(r.probability, std::sqrt(2 / M_PI), 1e-12);
    EXPECT_NEAR(r.bound, 1 / std::sqrt(M_PI), 1e-10);
    EXPECT_NEAR(r.violation_pct, 100 * (std::sqrt(2.0) - 1), 1e-7);
    EXPECT_TRUE(r.density);
    // Coherent states saturate the state-side density bound.
    EXPECT_FALSE(state_test(vac, povm_quadrature(0.0)).violated);
    EXPECT_NEAR(classical_quadrature_state_bound(), std::sqrt(2 / M_PI), 1e-16);
}

TEST(Bounds, GaussianViolatingInterval) {
    auto iv = violating_interval(vacuum_state(), 1 / std::sqrt(M_PI));
    const double x = std::sqrt(std::log(std::sqrt(2.0)) / 2);
    EXPECT_NEAR(iv.hi, x, 1e-10);
    EXPECT_NEAR(iv.lo, -x, 1e-10);
    EXPECT_NEAR(iv.captured_probability, std::erf(std::sqrt(2.0) * x), 1e-10);
    EXPECT_TRUE(violating_interval(GaussianQuadrature{0.0, 0.5}, 1.0).empty());
    EXPECT_THROW(violating_interval(number_state(1), 0.5), NotGaussian);
}

TEST(Bounds, ScanFindsBothLobes) {
    auto density = [](double x) {
        return 0.5 * (std::exp(-2 * (x - 1.5) * (x - 1.5)) + std::exp(-2 * (x + 1.5) * (x + 1.5))) * std::sqrt(2 / M_PI);
    };
    const double bound = 0.3;
    auto regions = scan_violating_regions(density, bound, -4.0, 4.0);
    ASSERT_EQ(regions.size(), 2u);
    // Lobes barely overlap, so each edge is close to the single-Gaussian root.
    const double half = std::sqrt(-std::log(bound / (0.5 * std::sqrt(2 / M_PI))) / 2);
    EXPECT_NEAR(regions[1].hi, 1.5 + half, 1e-5);
    EXPECT_NEAR(regions[0].lo, -1.5 - half, 1e-5);
    EXPECT_NEAR(regions[1].captured_probability, 0.5 * std::erf(std::sqrt(2.0) * half), 1e-5);
}

TEST(Bounds, NumberScanOfPhotonAddedThermal) {
    auto scan = scan_number_outcomes(photon_added_thermal(0.5), 8);
    EXPECT_EQ(scan.reports.size(), 9u);
    EXPECT_TRUE(scan.any_violation);
    EXPECT_TRUE(scan.reports[1].violated);
    EXPECT_FALSE(scan.reports[0].violated);
}

TEST(Bounds, ThermalStatesNeverViolateNumberBounds) {
    for (double n_tc : {0.01, 0.5, 3.0, 10.0}) {
        auto e = thermal_state(n_tc);
        EXPECT_FALSE(scan_number_outcomes(e, std::min(25, e.op.dim() - 1)).any_violation);
    }
}

TEST(Bounds, NumberStatesViolateOnlyTheirOwnOutcome) {
    auto scan = scan_number_outcomes(number_state(3, {7}), 6);
    for (int n = 0; n <= 6; ++n) EXPECT_EQ(scan.reports[n].violated, n == 3);
}
