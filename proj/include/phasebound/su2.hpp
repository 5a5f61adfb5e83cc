#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>

#include "phasebound/bounds.hpp"
#include "phasebound/fock.hpp"

namespace phasebound {

/// Hermitian operator on the spin-j space, basis |j, m> at index m + j.
class SpinOperator {
public:
    static SpinOperator state(double j, Matrix matrix);
    static SpinOperator povm_element(double j, Matrix matrix);
    static SpinOperator generic(double j, Matrix matrix);

    double j() const { return two_j_ / 2.0; }
    int two_j() const { return two_j_; }
    int dim() const { return two_j_ + 1; }
    const Matrix& matrix() const { return op_.matrix(); }
    OperatorKind kind() const { return op_.kind(); }
    double trace() const { return op_.trace(); }

private:
    SpinOperator(int two_j, FockOperator op) : two_j_(two_j), op_(std::move(op)) {}
    static int checked_two_j(double j, const Matrix& matrix);

    int two_j_;
    FockOperator op_;
};

struct SphereDirection {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // (-pi, pi]
};

struct SpinMaxResult {
    double value = 0.0;
    SphereDirection argmax;
    bool closed_form = false;
    double est_error = 0.0;
};

/// j_x, j_y, j_z from the ladder-operator matrix elements.
std::array<Matrix, 3> spin_matrices(double j);

/// SU(2) coherent state |j, Omega>.
Vector su2_coherent(double j, SphereDirection omega);

/// Q(Omega) = (2j + 1)/(4 pi) <j, Omega|A|j, Omega>.
double su2_q(const SpinOperator& op, SphereDirection omega);

/// Sphere maximum of Q. For j = 1/2 the maximum is the top eigenvalue times
/// 2/(4 pi); otherwise a 128 x 128 latitude-longitude grid plus refinement.
SpinMaxResult su2_q_max(const SpinOperator& op, std::optional<double> closed_form = std::nullopt);
/// Always runs the grid search, even where a closed form exists.
SpinMaxResult su2_q_max_numeric(const SpinOperator& op);

/// p_m against 4 pi/(2j + 1) Q_{m,max}.
BoundReport su2_state_test(const SpinOperator& state, const SpinOperator& povm);
/// p_m against 4 pi/(2j + 1) Q_max(probe) tr Delta_m.
BoundReport su2_measurement_test(const SpinOperator& povm, const SpinOperator& probe);

struct SpinHalfCheck {
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::int64_t state_violations = 0;
    std::int64_t measurement_violations = 0;
    double max_ratio = 0.0;  // largest p / bound over both tests
    int numeric_checks = 0;  // trials whose maxima were also found on the grid
    double max_numeric_discrepancy = 0.0;
};

/// Random spin-1/2 states (uniform in the Bloch ball) against random POVM
/// elements lambda (I + r_m . sigma).
SpinHalfCheck spin_half_no_violation_check(std::int64_t trials, std::uint64_t seed, int numeric_checks = 64);

/// Z_kl = <j_k j_l + j_l j_k> - delta_kl - <j_k><j_l>.
Eigen::Matrix3d covariance_z(const SpinOperator& state);
double covariance_z_min_eigenvalue(const SpinOperator& state);

/// Phase average of the equatorial coherent state; only j = 1 is supported.
SpinOperator phase_averaged_equatorial(double j);

}  // namespace phasebound
