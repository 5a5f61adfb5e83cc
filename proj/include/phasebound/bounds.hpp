#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phasebound/catalog.hpp"

namespace phasebound {

/// Relative margin a probability must exceed its bound by to count as a
/// violation; saturation is not a violation.
inline constexpr double kViolationTol = 1e-12;

enum class TestKind { measurement_test, state_test };
enum class Provenance { analytic, numeric };

std::string test_kind_name(TestKind kind);
std::string provenance_name(Provenance provenance);

struct BoundReport {
    double probability = 0.0;  // a density when `density` is set
    double bound = 0.0;
    bool violated = false;
    double violation_pct = 0.0;  // 100 (p - p_b) / p_b
    TestKind test_kind = TestKind::state_test;
    std::string outcome_label;
    bool density = false;
    Provenance probability_provenance = Provenance::numeric;
    Provenance bound_provenance = Provenance::numeric;
};

BoundReport make_report(double probability, double bound, TestKind kind, std::string label, bool density,
                        Provenance probability_provenance, Provenance bound_provenance);

struct ViolationInterval {
    double lo = 0.0;
    double hi = 0.0;
    double captured_probability = 0.0;

    bool empty() const { return hi <= lo; }
};

/// e^{-n} n^n / n!, with the n = 0 value 1.
double classical_number_bound(int n);

/// Largest single-outcome density of any classical state, sqrt(2/pi).
double classical_quadrature_state_bound();

/// p_m = tr(rho Delta_m) against pi Q_{m,max}.
BoundReport state_test(const CatalogEntry& state, const CatalogEntry& povm);
/// p(x) for X_theta against sqrt(2/pi).
BoundReport state_test(const CatalogEntry& state, const QuadratureEffect& effect, double theta = 0.0);

/// p_m = tr(Delta_m rho) against pi Q_max(rho) tr Delta_m.
BoundReport measurement_test(const CatalogEntry& povm, const CatalogEntry& probe);
/// p(x) against the largest marginal Q~_max of the probe.
BoundReport measurement_test(const QuadratureEffect& effect, const CatalogEntry& probe);

/// tr(Delta rho) over the larger of the two spaces.
double outcome_probability(const FockOperator& povm, const FockOperator& state);

/// Interval of X values where a Gaussian density exceeds `bound`.
ViolationInterval violating_interval(const GaussianQuadrature& gaussian, double bound);
/// Throws NotGaussian when the entry has no Gaussian quadrature statistics.
ViolationInterval violating_interval(const CatalogEntry& state, double bound);

/// Regions of [lo, hi] where density(x) > bound, located by sign-change
/// scanning and resolved to `resolution`. Captured probabilities integrate the
/// density over each region.
std::vector<ViolationInterval> scan_violating_regions(const std::function<double(double)>& density, double bound,
                                                      double lo, double hi, double resolution = 1e-6);

struct NumberScan {
    std::vector<BoundReport> reports;
    bool any_violation = false;
};

/// State test against every |n><n| for n <= n_max.
NumberScan scan_number_outcomes(const CatalogEntry& state, int n_max);

}  // namespace phasebound
