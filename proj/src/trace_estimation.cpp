#include "phasebound/trace_estimation.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"
#include "phasebound/phase_space.hpp"

namespace phasebound {

namespace {

constexpr const char* kModule = "trace_estimation";
constexpr double kTailTol = 1e-6;

void require_povm(const FockOperator& op) {
    if (op.kind() != OperatorKind::povm_element) throw DomainError(kModule, "expected a POVM element");
}

/// p(r) = sum_n Delta_nn e^{-r^2} r^{2n} / n!; off-diagonal elements average out.
double radial_probability(const std::vector<double>& diag, double r) {
    double s = 0.0;
    const double u = r * r;
    for (std::size_t n = 0; n < diag.size(); ++n) s += diag[n] * numerics::poisson_weight(static_cast<int>(n), u);
    return s;
}

}  // namespace

FockOperator phase_averaged_coherent(double r, const FockSpace& space, double tol) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError(kModule, "radius must be >= 0");
    const double u = r * r;
    double loss = numerics::poisson_tail(space.dim(), u);
    if (loss > tol) {
        throw TruncationError(kModule, "phase-averaged state r = " + format_real(r) + " loses " +
                                           format_real(loss) + " beyond dimension " +
                                           std::to_string(space.dim()));
    }
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    for (int n = 0; n < space.dim(); ++n) m(n, n) = numerics::poisson_weight(n, u);
    return FockOperator::state(std::move(m), loss, tol);
}

FockOperator phase_averaged_coherent(double r, const TruncationPolicy& policy) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError(kModule, "radius must be >= 0");
    const double u = r * r;
    int dim = choose_dim([u](int d) { return numerics::poisson_tail(d, u); }, policy, u);
    return phase_averaged_coherent(r, FockSpace(dim), policy.tol);
}

RadialEstimate trace_via_radial(const FockOperator& povm, const RadialProtocolConfig& config) {
    require_povm(povm);
    const auto diag = povm.diagonal();
    auto integrand = [&](double r) { return 2.0 * r * radial_probability(diag, r); };

    RadialEstimate out;
    if (config.r_grid.empty()) {
        out.r_max = search_radius(povm);
        if (config.rule == RadialRule::adaptive) {
            out.value = numerics::integrate_adaptive(integrand, 0.0, out.r_max, 1e-10).value;
        } else {
            const int steps = 2000;
            const double h = out.r_max / steps;
            for (int i = 0; i <= steps; ++i) out.value += (i == 0 || i == steps ? 0.5 : 1.0) * h * integrand(i * h);
        }
    } else {
        const auto& g = config.r_grid;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] < 0.0 || (i > 0 && !(g[i] > g[i - 1]))) {
                throw DomainError(kModule, "radial grid must be increasing and nonnegative");
            }
        }
        out.r_max = g.back();
        if (g.front() > 0.0) out.value += numerics::integrate_adaptive(integrand, 0.0, g.front(), 1e-10).value;
        for (std::size_t i = 1; i < g.size(); ++i) {
            if (config.rule == RadialRule::adaptive) {
                out.value += numerics::integrate_adaptive(integrand, g[i - 1], g[i], 1e-10).value;
            } else {
                out.value += 0.5 * (g[i] - g[i - 1]) * (integrand(g[i - 1]) + integrand(g[i]));
            }
        }
    }
    // Exact remainder: 2 int_R^inf r e^{-r^2} r^{2n}/n! dr = Q(n + 1, R^2).
    const double u = out.r_max * out.r_max;
    for (std::size_t n = 0; n < diag.size(); ++n) {
        if (diag[n] != 0.0) out.tail += diag[n] * boost::math::gamma_q(static_cast<double>(n) + 1.0, u);
    }
    if (std::abs(out.tail) > kTailTol * std::max(std::abs(out.value), 1e-300) && std::abs(out.tail) > 1e-300) {
        throw TailError(kModule, "radial tail " + format_real(out.tail) + " exceeds tolerance");
    }
    return out;
}

ThermalEstimate trace_via_thermal(const FockOperator& povm, const ThermalProtocolConfig& config) {
    require_povm(povm);
    const auto& values = config.n_tc_values;
    if (values.empty()) throw DomainError(kModule, "no thermal mean photon numbers given");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || (i > 0 && !(values[i] > values[i - 1]))) {
            throw DomainError(kModule, "thermal mean photon numbers must be positive and increasing");
        }
    }
    if (config.extrapolate && values.size() < 2) throw DomainError(kModule, "extrapolation needs two values");

    const auto diag = povm.diagonal();
    ThermalEstimate out;
    for (double n_tc : values) {
        // Populations (1 - xi) xi^n directly, without building the thermal matrix.
        const double xi = n_tc / (n_tc + 1.0);
        double p = 0.0, weight = 1.0 - xi;
        for (double d : diag) {
            p += d * weight;
            weight *= xi;
        }
        out.ratios.push_back({n_tc, p, p * (n_tc + 1.0)});
    }
    if (config.extrapolate) {
        // Neville's scheme for the interpolating polynomial in h = 1/n_tc at h = 0.
        std::vector<double> h, t;
        for (const auto& r : out.ratios) {
            h.push_back(1.0 / r.n_tc);
            t.push_back(r.ratio);
        }
        const std::size_t k = t.size();
        for (std::size_t level = 1; level < k; ++level) {
            for (std::size_t i = 0; i + level < k; ++i) {
                t[i] = (h[i + level] * t[i] - h[i] * t[i + 1]) / (h[i + level] - h[i]);
            }
        }
        out.extrapolated = t[0];
    }
    return out;
}

}  // namespace phasebound
