#include "phasebound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"
#include "phasebound/phase_space.hpp"
#include "phasebound/statistics.hpp"

namespace phasebound {

namespace {

constexpr const char* kModule = "bounds";
constexpr double kPi = std::numbers::pi;

Provenance provenance_of(const MaxResult& r) {
    return r.method == MaxMethod::closed_form ? Provenance::analytic : Provenance::numeric;
}

void require_kind(const CatalogEntry& e, OperatorKind kind, const char* what) {
    if (e.op.kind() != kind) throw DomainError(kModule, e.label + " is not a " + what);
}

/// p_n from the state's closed form when the POVM is a number projector.
std::optional<double> analytic_number_probability(const CatalogEntry& state, const CatalogEntry& povm) {
    if (povm.family != Family::povm_number || !state.analytic.number_probability) return std::nullopt;
    return state.analytic.number_probability(static_cast<int>(povm.params.at("n")));
}

}  // namespace

std::string test_kind_name(TestKind kind) {
    return kind == TestKind::state_test ? "state_test" : "measurement_test";
}

std::string provenance_name(Provenance provenance) {
    return provenance == Provenance::analytic ? "analytic" : "numeric";
}

BoundReport make_report(double probability, double bound, TestKind kind, std::string label, bool density,
                        Provenance probability_provenance, Provenance bound_provenance) {
    BoundReport r;
    r.probability = probability;
    r.bound = bound;
    r.violated = probability > bound * (1.0 + kViolationTol);
    r.violation_pct = bound > 0.0 ? 100.0 * (probability - bound) / bound : 0.0;
    r.test_kind = kind;
    r.outcome_label = std::move(label);
    r.density = density;
    r.probability_provenance = probability_provenance;
    r.bound_provenance = bound_provenance;
    return r;
}

double classical_number_bound(int n) {
    if (n < 0) throw DomainError(kModule, "negative photon number");
    if (n == 0) return 1.0;
    return numerics::poisson_weight(n, n);
}

double classical_quadrature_state_bound() { return std::sqrt(2.0 / kPi); }

double outcome_probability(const FockOperator& povm, const FockOperator& state) {
    const int dim = std::max(povm.dim(), state.dim());
    return expectation(povm.embedded(dim), state.embedded(dim));
}

BoundReport state_test(const CatalogEntry& state, const CatalogEntry& povm) {
    require_kind(state, OperatorKind::state, "state");
    require_kind(povm, OperatorKind::povm_element, "POVM element");
    MaxResult qm = q_max(povm);
    auto analytic_p = analytic_number_probability(state, povm);
    double p = analytic_p ? *analytic_p : outcome_probability(povm.op, state.op);
    return make_report(p, kPi * qm.value, TestKind::state_test, povm.label, false,
                       analytic_p ? Provenance::analytic : Provenance::numeric, provenance_of(qm));
}

BoundReport state_test(const CatalogEntry& state, const QuadratureEffect& effect, double theta) {
    require_kind(state, OperatorKind::state, "state");
    bool analytic = false;
    if (state.analytic.quadrature_density) analytic = state.analytic.quadrature_density(effect.x, theta).has_value();
    double p = quadrature_density(state, effect.x, theta);
    return make_report(p, classical_quadrature_state_bound(), TestKind::state_test,
                       "x=" + format_real(effect.x), true, analytic ? Provenance::analytic : Provenance::numeric,
                       Provenance::analytic);
}

BoundReport measurement_test(const CatalogEntry& povm, const CatalogEntry& probe) {
    require_kind(povm, OperatorKind::povm_element, "POVM element");
    require_kind(probe, OperatorKind::state, "state");
    double tr = povm.op.trace();
    if (!std::isfinite(tr) || !std::isfinite(povm.op.truncation_loss())) {
        throw InfiniteTrace(kModule, povm.label + " has no finite trace");
    }
    MaxResult qm = q_max(probe);
    auto analytic_p = analytic_number_probability(probe, povm);
    double p = analytic_p ? *analytic_p : outcome_probability(povm.op, probe.op);
    return make_report(p, kPi * qm.value * tr, TestKind::measurement_test, povm.label, false,
                       analytic_p ? Provenance::analytic : Provenance::numeric, provenance_of(qm));
}

BoundReport measurement_test(const QuadratureEffect& effect, const CatalogEntry& probe) {
    require_kind(probe, OperatorKind::state, "state");
    MaxResult qm = q_marginal_max(probe);
    bool analytic = false;
    if (probe.analytic.quadrature_density) analytic = probe.analytic.quadrature_density(effect.x, 0.0).has_value();
    double p = quadrature_density(probe, effect.x, 0.0);
    return make_report(p, qm.value, TestKind::measurement_test, "x=" + format_real(effect.x), true,
                       analytic ? Provenance::analytic : Provenance::numeric, provenance_of(qm));
}

ViolationInterval violating_interval(const GaussianQuadrature& g, double bound) {
    if (!(g.delta_x > 0.0)) throw DomainError(kModule, "Gaussian width must be positive");
    if (!(bound > 0.0)) throw DomainError(kModule, "bound must be positive");
    const double peak = 1.0 / (std::sqrt(2.0 * kPi) * g.delta_x);
    if (peak <= bound) return ViolationInterval{g.mean, g.mean, 0.0};
    double half = g.delta_x * std::sqrt(2.0 * std::log(peak / bound));
    double captured = std::erf(half / (std::sqrt(2.0) * g.delta_x));
    return ViolationInterval{g.mean - half, g.mean + half, captured};
}

ViolationInterval violating_interval(const CatalogEntry& state, double bound) {
    if (!state.analytic.gaussian_quadrature) {
        throw NotGaussian(kModule, state.label + " has non-Gaussian quadrature statistics");
    }
    return violating_interval(*state.analytic.gaussian_quadrature, bound);
}

std::vector<ViolationInterval> scan_violating_regions(const std::function<double(double)>& density, double bound,
                                                      double lo, double hi, double resolution) {
    if (!(hi > lo)) throw DomainError(kModule, "scan range is empty");
    auto excess = [&](double x) { return density(x) - bound; };
    // Coarse pass fine enough to separate oscillation lobes, then bisection.
    const int steps = std::max(256, static_cast<int>(std::ceil((hi - lo) / 0.01)));
    const double h = (hi - lo) / steps;
    std::vector<ViolationInterval> regions;
    double prev_x = lo;
    const bool first = excess(lo) > 0.0;
    double start = lo;
    bool inside = first;
    for (int i = 1; i <= steps; ++i) {
        double x = lo + i * h;
        double v = excess(x);
        if ((v > 0.0) != inside) {
            double edge = numerics::bisect_root(excess, prev_x, x, resolution);
            if (!inside) {
                start = edge;
            } else {
                regions.push_back({start, edge, 0.0});
            }
            inside = !inside;
        }
        prev_x = x;
    }
    if (inside) regions.push_back({start, hi, 0.0});
    for (auto& r : regions) r.captured_probability = numerics::integrate_adaptive(density, r.lo, r.hi, 1e-10).value;
    return regions;
}

NumberScan scan_number_outcomes(const CatalogEntry& state, int n_max) {
    require_kind(state, OperatorKind::state, "state");
    if (n_max < 0 || n_max >= state.op.dim()) {
        throw DomainError(kModule, "n_max must lie in [0, D) for D = " + std::to_string(state.op.dim()));
    }
    NumberScan scan;
    for (int n = 0; n <= n_max; ++n) {
        CatalogEntry povm = povm_number(n);
        auto r = state_test(state, povm);
        scan.any_violation |= r.violated;
        scan.reports.push_back(std::move(r));
    }
    return scan;
}

}  // namespace phasebound
