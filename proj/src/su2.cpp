#include "phasebound/su2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"

namespace phasebound {

namespace {

constexpr const char* kModule = "su2";
constexpr double kPi = std::numbers::pi;
constexpr int kGrid = 128;
constexpr int kMaxSweeps = 200;

double wrap_phi(double phi) {
    phi = std::remainder(phi, 2.0 * kPi);
    if (phi <= -kPi) phi += 2.0 * kPi;
    return phi;
}

double prefactor(int two_j) { return (two_j + 1) / (4.0 * kPi); }

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

Eigen::Vector3d random_in_ball(std::mt19937_64& gen) {
    while (true) {
        Eigen::Vector3d v(2.0 * uniform01(gen) - 1.0, 2.0 * uniform01(gen) - 1.0, 2.0 * uniform01(gen) - 1.0);
        if (v.squaredNorm() <= 1.0) return v;
    }
}

Matrix bloch_matrix(const std::array<Matrix, 3>& s, double scale, const Eigen::Vector3d& r) {
    // Pauli matrices are 2 j_k for j = 1/2.
    Matrix m = Matrix::Identity(2, 2);
    for (int k = 0; k < 3; ++k) m += 2.0 * r(k) * s[k];
    return scale * m;
}

}  // namespace

int SpinOperator::checked_two_j(double j, const Matrix& matrix) {
    double two = 2.0 * j;
    if (!(j >= 0.5) || std::abs(two - std::round(two)) > 1e-12) {
        throw UnsupportedJ(kModule, "spin quantum number must be a positive half-integer");
    }
    int two_j = static_cast<int>(std::lround(two));
    if (matrix.rows() != two_j + 1 || matrix.cols() != two_j + 1) {
        throw SpaceMismatch(kModule, "matrix size differs from 2j + 1");
    }
    return two_j;
}

SpinOperator SpinOperator::state(double j, Matrix matrix) {
    int two_j = checked_two_j(j, matrix);
    return SpinOperator(two_j, FockOperator::state(std::move(matrix), 0.0, 1e-12));
}

SpinOperator SpinOperator::povm_element(double j, Matrix matrix) {
    int two_j = checked_two_j(j, matrix);
    return SpinOperator(two_j, FockOperator::povm_element(std::move(matrix)));
}

SpinOperator SpinOperator::generic(double j, Matrix matrix) {
    int two_j = checked_two_j(j, matrix);
    return SpinOperator(two_j, FockOperator::generic(std::move(matrix)));
}

std::array<Matrix, 3> spin_matrices(double j) {
    int two_j = static_cast<int>(std::lround(2.0 * j));
    if (!(j >= 0.5) || std::abs(2.0 * j - two_j) > 1e-12) throw UnsupportedJ(kModule, "invalid spin quantum number");
    const int dim = two_j + 1;
    Matrix plus = Matrix::Zero(dim, dim);
    Matrix z = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        double m = i - j;
        z(i, i) = m;
        if (i + 1 < dim) plus(i + 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    Matrix minus = plus.adjoint();
    Matrix x = 0.5 * (plus + minus);
    Matrix y = (plus - minus) / Complex(0.0, 2.0);
    return {x, y, z};
}

Vector su2_coherent(double j, SphereDirection omega) {
    int two_j = static_cast<int>(std::lround(2.0 * j));
    if (!(j >= 0.5) || std::abs(2.0 * j - two_j) > 1e-12) throw UnsupportedJ(kModule, "invalid spin quantum number");
    const double s = std::sin(omega.theta / 2.0), c = std::cos(omega.theta / 2.0);
    Vector v(two_j + 1);
    for (int i = 0; i <= two_j; ++i) {
        // i = m + j, so j - m = 2j - i and j + m = i.
        double log_binom = numerics::log_factorial(two_j) - numerics::log_factorial(i) -
                           numerics::log_factorial(two_j - i);
        double mag = std::exp(0.5 * log_binom) * std::pow(s, two_j - i) * std::pow(c, i);
        v(i) = std::polar(mag, -i * omega.phi);
    }
    return v;
}

double su2_q(const SpinOperator& op, SphereDirection omega) {
    Vector v = su2_coherent(op.j(), omega);
    return prefactor(op.two_j()) * v.dot(op.matrix() * v).real();
}

SpinMaxResult su2_q_max_numeric(const SpinOperator& op) {
    auto f = [&](double theta, double phi) { return su2_q(op, SphereDirection{theta, wrap_phi(phi)}); };
    // Uniform (theta, phi) grid with the poles included; strict comparison in
    // (theta, phi) order breaks ties toward smaller theta, then smaller phi.
    double best_t = 0.0, best_p = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        double theta = kPi * i / (kGrid - 1);
        bool pole = i == 0 || i == kGrid - 1;
        for (int k = 0; k < (pole ? 1 : kGrid); ++k) {
            double phi = pole ? 0.0 : -kPi + 2.0 * kPi * (k + 1) / kGrid;
            double v = f(theta, phi);
            if (v > best) {
                best = v;
                best_t = theta;
                best_p = phi;
            }
        }
    }
    double h = kPi / (kGrid - 1);
    double improvement = 0.0;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const double previous = best;
        double dt = 0.0, dp = 0.0;
        auto lt = numerics::golden_section_max([&](double t) { return f(t, best_p); }, std::max(0.0, best_t - h),
                                               std::min(kPi, best_t + h), 1e-12);
        if (lt.value > best) {
            dt = lt.x - best_t;
            best_t = lt.x;
            best = lt.value;
        }
        if (best_t > 1e-12 && best_t < kPi - 1e-12) {
            auto lp = numerics::golden_section_max([&](double p) { return f(best_t, p); }, best_p - h, best_p + h,
                                                   1e-12);
            if (lp.value > best) {
                dp = lp.x - best_p;
                best_p = lp.x;
                best = lp.value;
            }
        }
        improvement = best - previous;
        double moved = std::max(std::abs(dt), std::abs(dp));
        if (moved < 0.99 * h) h = std::max(std::min(h, 4.0 * moved), 1e-6);
        if (improvement <= 1e-15 * std::abs(best) && moved < 1e-9) {
            converged = true;
            break;
        }
    }
    if (!converged && improvement > 1e-9 * std::abs(best)) {
        throw ConvergenceError(kModule, "sphere refinement stalled");
    }
    return SpinMaxResult{best, SphereDirection{best_t, wrap_phi(best_p)}, false,
                         std::abs(best) * 1e-12 + std::max(improvement, 0.0)};
}

SpinMaxResult su2_q_max(const SpinOperator& op, std::optional<double> closed_form) {
    if (closed_form) return SpinMaxResult{*closed_form, {}, true, 0.0};
    if (op.two_j() == 1) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix());
        const Vector top = solver.eigenvectors().col(1);
        // Direction of the top eigenvector: |<+|top>| = cos(theta/2).
        double theta = 2.0 * std::atan2(std::abs(top(0)), std::abs(top(1)));
        double phi = std::abs(top(0)) > 0.0 && std::abs(top(1)) > 0.0 ? wrap_phi(std::arg(top(0)) - std::arg(top(1)))
                                                                       : 0.0;
        return SpinMaxResult{prefactor(1) * solver.eigenvalues()(1), SphereDirection{theta, phi}, true, 0.0};
    }
    return su2_q_max_numeric(op);
}

BoundReport su2_state_test(const SpinOperator& state, const SpinOperator& povm) {
    if (state.two_j() != povm.two_j()) throw SpaceMismatch(kModule, "spin quantum numbers differ");
    if (state.kind() != OperatorKind::state || povm.kind() != OperatorKind::povm_element) {
        throw DomainError(kModule, "expected a state and a POVM element");
    }
    auto qm = su2_q_max(povm);
    double p = (povm.matrix().cwiseProduct(state.matrix().transpose())).sum().real();
    return make_report(p, qm.value / prefactor(state.two_j()), TestKind::state_test, "spin", false,
                       Provenance::numeric, qm.closed_form ? Provenance::analytic : Provenance::numeric);
}

BoundReport su2_measurement_test(const SpinOperator& povm, const SpinOperator& probe) {
    if (probe.two_j() != povm.two_j()) throw SpaceMismatch(kModule, "spin quantum numbers differ");
    if (probe.kind() != OperatorKind::state || povm.kind() != OperatorKind::povm_element) {
        throw DomainError(kModule, "expected a POVM element and a state");
    }
    auto qm = su2_q_max(probe);
    double p = (povm.matrix().cwiseProduct(probe.matrix().transpose())).sum().real();
    return make_report(p, qm.value / prefactor(probe.two_j()) * povm.trace(), TestKind::measurement_test, "spin",
                       false, Provenance::numeric, qm.closed_form ? Provenance::analytic : Provenance::numeric);
}

SpinHalfCheck spin_half_no_violation_check(std::int64_t trials, std::uint64_t seed, int numeric_checks) {
    if (trials < 1) throw DomainError(kModule, "trial count must be >= 1");
    const auto s = spin_matrices(0.5);
    std::mt19937_64 gen(seed);
    SpinHalfCheck out;
    out.trials = trials;
    out.seed = seed;
    for (std::int64_t t = 0; t < trials; ++t) {
        Eigen::Vector3d r = random_in_ball(gen);
        Eigen::Vector3d rm = random_in_ball(gen);
        double lambda = uniform01(gen) / (1.0 + rm.norm());
        SpinOperator rho = SpinOperator::state(0.5, bloch_matrix(s, 0.5, r));
        SpinOperator delta = SpinOperator::povm_element(0.5, bloch_matrix(s, lambda, rm));
        auto st = su2_state_test(rho, delta);
        auto mt = su2_measurement_test(delta, rho);
        out.state_violations += st.violated;
        out.measurement_violations += mt.violated;
        if (st.bound > 0.0) out.max_ratio = std::max(out.max_ratio, st.probability / st.bound);
        if (mt.bound > 0.0) out.max_ratio = std::max(out.max_ratio, mt.probability / mt.bound);
        if (t < numeric_checks) {
            double a = su2_q_max(rho).value, b = su2_q_max_numeric(rho).value;
            double c = su2_q_max(delta).value, d = su2_q_max_numeric(delta).value;
            out.max_numeric_discrepancy = std::max({out.max_numeric_discrepancy, std::abs(a - b), std::abs(c - d)});
            ++out.numeric_checks;
        }
    }
    return out;
}

Eigen::Matrix3d covariance_z(const SpinOperator& state) {
    if (state.kind() != OperatorKind::state) throw DomainError(kModule, "covariance needs a state");
    const auto s = spin_matrices(state.j());
    const Matrix& rho = state.matrix();
    auto mean = [&](const Matrix& a) { return (a * rho).trace().real(); };
    Eigen::Vector3d first;
    for (int k = 0; k < 3; ++k) first(k) = mean(s[k]);
    Eigen::Matrix3d z;
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            z(k, l) = mean(s[k] * s[l] + s[l] * s[k]) - (k == l ? 1.0 : 0.0) - first(k) * first(l);
        }
    }
    return z;
}

double covariance_z_min_eigenvalue(const SpinOperator& state) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(covariance_z(state), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

SpinOperator phase_averaged_equatorial(double j) {
    if (j != 1.0) throw UnsupportedJ(kModule, "phase-averaged equatorial state is provided for j = 1 only");
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 0.25;
    m(1, 1) = 0.5;
    m(2, 2) = 0.25;
    return SpinOperator::state(1.0, std::move(m));
}

}  // namespace phasebound
