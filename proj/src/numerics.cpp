#include "phasebound/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "phasebound/errors.hpp"

namespace phasebound::numerics {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double poisson_weight(int n, double mean) {
    if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(-mean + n * std::log(mean) - log_factorial(n));
}

double poisson_tail(int count, double mean) {
    if (count <= 0) return 1.0;
    if (mean == 0.0) return 0.0;
    return boost::math::gamma_p(static_cast<double>(count), mean);
}

std::vector<double> hermite_functions(double q, int count) {
    std::vector<double> phi(static_cast<std::size_t>(std::max(count, 0)), 0.0);
    if (count <= 0) return phi;
    phi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * q * q);
    if (count > 1) phi[1] = std::sqrt(2.0) * q * phi[0];
    for (int n = 1; n + 1 < count; ++n) {
        phi[n + 1] = std::sqrt(2.0 / (n + 1)) * q * phi[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * phi[n - 1];
    }
    return phi;
}

namespace {

GaussHermiteRule build_rule(int order) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);

    GaussHermiteRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    rule.scaled_weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = solver.eigenvalues()(i);
        // Newton polish on phi_order, whose zeros coincide with the nodes.
        for (int it = 0; it < 3; ++it) {
            auto phi = hermite_functions(x, order + 1);
            double value = phi[order];
            double slope = std::sqrt(2.0 * order) * phi[order - 1] - x * phi[order];
            if (slope == 0.0) break;
            x -= value / slope;
        }
        auto phi = hermite_functions(x, order);
        double sum = 0.0;
        for (double v : phi) sum += v * v;
        rule.nodes[i] = x;
        rule.scaled_weights[i] = 1.0 / sum;
        rule.weights[i] = std::exp(-x * x) / sum;
    }
    return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
    if (order < 1) throw DomainError("numerics", "Gauss-Hermite order must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussHermiteRule>(build_rule(order));
    return *slot;
}

LineMax golden_section_max(const std::function<double(double)>& f, double lo, double hi, double x_tol) {
    constexpr double inv_phi = 0.6180339887498949;
    LineMax best;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    best.evaluations = 2;
    while (b - a > x_tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++best.evaluations;
    }
    // Endpoints are candidates too: a monotone function peaks at the boundary.
    double fa = f(lo), fb = f(hi);
    best.evaluations += 2;
    best.x = fc >= fd ? c : d;
    best.value = std::max(fc, fd);
    if (fa > best.value) {
        best.x = lo;
        best.value = fa;
    }
    if (fb > best.value) {
        best.x = hi;
        best.value = fb;
    }
    return best;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double x_tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw DomainError("numerics", "bisect_root: no sign change on bracket");
    while (hi - lo > x_tol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Integral integrate_adaptive(const std::function<double(double)>& f, double lo, double hi, double abs_tol) {
    using boost::math::quadrature::gauss_kronrod;
    Integral out;
    double l1 = 0.0;
    // Boost interprets the tolerance relative to the L1 norm; tighten it so the
    // absolute target holds for integrands of order one.
    out.value = gauss_kronrod<double, 31>::integrate(f, lo, hi, 30, abs_tol * 1e-2, &out.error, &l1);
    return out;
}

}  // namespace phasebound::numerics
