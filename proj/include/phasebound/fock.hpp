#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace phasebound {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default bound on the probability weight discarded by Fock truncation.
inline constexpr double kTolTrunc = 1e-10;

/// A point alpha = re + i im of the single-mode phase space.
struct PhasePoint {
    double re = 0.0;
    double im = 0.0;

    static PhasePoint polar(double radius, double angle);
    Complex value() const { return {re, im}; }
    double norm() const { return re * re + im * im; }  // |alpha|^2
    double abs() const;
};

class FockSpace {
public:
    explicit FockSpace(int dim);
    int dim() const { return dim_; }
    bool operator==(const FockSpace&) const = default;

private:
    int dim_;
};

/// How a constructor chooses its truncation dimension. With no explicit
/// dimension, the smallest D whose discarded second moment sum_{n>=D} n^2 p_n
/// is <= tol is used; the discarded probability is then below tol as well.
struct TruncationPolicy {
    std::optional<int> dim;
    double tol = kTolTrunc;
};

/// Policy for choosing D of a pure state. Amplitude-level quantities (overlaps,
/// off-diagonal elements, quadrature densities) err by about sqrt(loss), so the
/// tail is held to tol^2 instead of tol.
inline TruncationPolicy amplitude_policy(const TruncationPolicy& policy) {
    return {policy.dim, policy.tol * policy.tol};
}

/// Smallest D >= min_dim whose second-moment tail, computed from the
/// probability tail loss_at, is <= policy.tol, or the explicit
/// policy.dim. Falls back to ceil(<n> + 8 sqrt(<n> + 1) + 10) if no D below the
/// search cap qualifies.
int choose_dim(const std::function<double(int)>& loss_at, const TruncationPolicy& policy, double mean_photons,
               int min_dim = 2);

class FockVector {
public:
    FockVector(FockSpace space, Vector amplitudes, double truncation_loss);

    const FockSpace& space() const { return space_; }
    const Vector& amplitudes() const { return amplitudes_; }
    double truncation_loss() const { return truncation_loss_; }

private:
    FockSpace space_;
    Vector amplitudes_;
    double truncation_loss_;
};

enum class OperatorKind { state, povm_element, generic };

/// Dense Hermitian matrix on a truncated Fock space. States are PSD with trace
/// in [1 - tol, 1]; POVM elements satisfy 0 <= Delta <= I.
class FockOperator {
public:
    static FockOperator state(Matrix matrix, double truncation_loss = 0.0, double tol = kTolTrunc);
    static FockOperator povm_element(Matrix matrix, double truncation_loss = 0.0);
    static FockOperator generic(Matrix matrix);
    static FockOperator pure_state(const FockVector& vector, double tol = kTolTrunc);

    const FockSpace& space() const { return space_; }
    int dim() const { return space_.dim(); }
    const Matrix& matrix() const { return matrix_; }
    OperatorKind kind() const { return kind_; }
    double truncation_loss() const { return truncation_loss_; }

    double trace() const;
    bool is_diagonal(double tol = 1e-14) const;
    /// Diagonal entries <n|A|n> as reals.
    std::vector<double> diagonal() const;
    /// Zero-padded copy on a larger space.
    FockOperator embedded(int dim) const;

private:
    FockOperator(Matrix matrix, OperatorKind kind, double truncation_loss);

    FockSpace space_;
    Matrix matrix_;
    OperatorKind kind_;
    double truncation_loss_;
};

/// Amplitudes c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!) for n < dim, without a
/// truncation check.
Vector coherent_amplitudes(PhasePoint alpha, int dim);

/// Coherent state |alpha> on `space`. Throws TruncationError when the weight
/// beyond the space exceeds `tol`.
FockVector coherent_vector(PhasePoint alpha, const FockSpace& space, double tol = kTolTrunc);

FockOperator number_operator(const FockSpace& space);
FockOperator annihilation_operator(const FockSpace& space);
/// X_theta = (a^dag e^{-i theta} + a e^{i theta}) / 2.
FockOperator quadrature_operator(double theta, const FockSpace& space);

/// Re tr(op * state). Throws SpaceMismatch on different spaces and
/// NumericalError if the imaginary residue exceeds 1e-10.
double expectation(const FockOperator& op, const FockOperator& state);
double trace(const FockOperator& op);
double overlap_probability(const FockVector& a, const FockVector& b);

/// <x|n> in the X = (a + a^dag)/2 convention: |<x|0>|^2 = sqrt(2/pi) e^{-2x^2}.
double fock_wavefunction(int n, double x);
/// <x|n> for n = 0..count-1.
std::vector<double> fock_wavefunctions(double x, int count);

}  // namespace phasebound
