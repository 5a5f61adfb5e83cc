#pragma once

#include <functional>
#include <span>
#include <vector>

namespace phasebound::numerics {

/// ln(n!) for n >= 0.
double log_factorial(int n);

/// Poisson weight e^{-mean} mean^n / n!, evaluated in log space.
double poisson_weight(int n, double mean);

/// P(N >= count) for N ~ Poisson(mean).
double poisson_tail(int count, double mean);

/// Normalized Hermite functions phi_0..phi_{count-1} at q, with
/// phi_n(q) = (2^n n! sqrt(pi))^{-1/2} H_n(q) exp(-q^2/2).
std::vector<double> hermite_functions(double q, int count);

/// Gauss-Hermite rule for the weight exp(-x^2). `scaled_weights` are w_i exp(x_i^2),
/// so that sum_i scaled_weights[i] * f(x_i) approximates the plain integral of f
/// when f carries its own Gaussian factor. Exact for f = exp(-x^2) * poly of degree
/// <= 2K - 1.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> scaled_weights;
};

/// Returns a cached rule with `order` nodes. Thread-safe.
const GaussHermiteRule& gauss_hermite(int order);

struct LineMax {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Stops when the bracket is narrower than `x_tol`.
LineMax golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                           double x_tol = 1e-10);

/// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double x_tol);

struct Integral {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod integration on [lo, hi]; infinite limits allowed.
Integral integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                            double abs_tol = 1e-10);

}  // namespace phasebound::numerics
