#include "phasebound/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"

namespace phasebound {

namespace {

constexpr const char* kModule = "fock_core";
constexpr double kHermitianTol = 1e-12;
constexpr double kEigenTol = 1e-12;
constexpr int kDimSearchCap = 8192;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> hermitian_eigenvalues(const Matrix& m) {
    if (m.isDiagonal(0.0)) {
        std::vector<double> eig(m.rows());
        for (Eigen::Index i = 0; i < m.rows(); ++i) eig[i] = m(i, i).real();
        return eig;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    const auto& values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

}  // namespace

PhasePoint PhasePoint::polar(double radius, double angle) {
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

double PhasePoint::abs() const { return std::hypot(re, im); }

FockSpace::FockSpace(int dim) : dim_(dim) {
    if (dim < 2) throw DomainError(kModule, "Fock space dimension must be >= 2, got " + std::to_string(dim));
}

int choose_dim(const std::function<double(int)>& loss_at, const TruncationPolicy& policy, double mean_photons,
               int min_dim) {
    min_dim = std::max(min_dim, 2);
    if (policy.dim) {
        if (*policy.dim < min_dim) {
            throw TruncationError(kModule, "requested dimension " + std::to_string(*policy.dim) +
                                               " is below the minimum " + std::to_string(min_dim));
        }
        return *policy.dim;
    }
    // Tail of the second moment, sum_{n>=D} n^2 p_n = D^2 L(D) + sum_{m>D} (2m - 1) L(m),
    // where L(D) = sum_{n>=D} p_n. Bounding it bounds the loss and the error of <n> and Var n.
    std::vector<double> loss;
    for (int d = min_dim; d <= 2 * kDimSearchCap; ++d) {
        const double l = loss_at(d);
        loss.push_back(l);
        if (l * d * d < 1e-6 * policy.tol) break;
    }
    if (loss.back() * std::pow(min_dim + static_cast<double>(loss.size()) - 1, 2) < 1e-6 * policy.tol) {
        std::vector<double> moment(loss.size());
        double rest = 0.0;
        for (std::size_t i = loss.size(); i-- > 0;) {
            const double d = min_dim + static_cast<double>(i);
            moment[i] = d * d * loss[i] + rest;
            rest += (2.0 * d - 1.0) * loss[i];
        }
        for (std::size_t i = 0; i < moment.size() && min_dim + static_cast<int>(i) <= kDimSearchCap; ++i) {
            if (moment[i] <= policy.tol) return min_dim + static_cast<int>(i);
        }
    }
    double n = std::max(mean_photons, 0.0);
    return std::max(min_dim, static_cast<int>(std::ceil(n + 8.0 * std::sqrt(n + 1.0) + 10.0)));
}

FockVector::FockVector(FockSpace space, Vector amplitudes, double truncation_loss)
    : space_(space), amplitudes_(std::move(amplitudes)), truncation_loss_(truncation_loss) {
    if (amplitudes_.size() != space_.dim()) throw SpaceMismatch(kModule, "amplitude count differs from dimension");
}

FockOperator::FockOperator(Matrix matrix, OperatorKind kind, double truncation_loss)
    : space_(static_cast<int>(matrix.rows())),
      matrix_(std::move(matrix)),
      kind_(kind),
      truncation_loss_(truncation_loss) {}

FockOperator FockOperator::generic(Matrix matrix) {
    if (matrix.rows() != matrix.cols()) throw DomainError(kModule, "operator matrix must be square");
    return FockOperator(std::move(matrix), OperatorKind::generic, 0.0);
}

FockOperator FockOperator::state(Matrix matrix, double truncation_loss, double tol) {
    if (matrix.rows() != matrix.cols()) throw DomainError(kModule, "state matrix must be square");
    double scale = std::max(1.0, max_abs(matrix));
    if (max_abs(matrix - matrix.adjoint()) > kHermitianTol * scale) {
        throw DomainError(kModule, "state matrix is not Hermitian");
    }
    Matrix sym = 0.5 * (matrix + matrix.adjoint());
    double tr = sym.trace().real();
    if (tr < 1.0 - tol || tr > 1.0 + 1e-12) {
        throw TruncationError(kModule, "state trace 1 - " + format_real(1.0 - tr) + " outside [1 - tol, 1]");
    }
    auto eig = hermitian_eigenvalues(sym);
    if (*std::min_element(eig.begin(), eig.end()) < -kEigenTol) {
        throw DomainError(kModule, "state matrix is not positive semidefinite");
    }
    return FockOperator(std::move(sym), OperatorKind::state, std::max(truncation_loss, 0.0));
}

FockOperator FockOperator::povm_element(Matrix matrix, double truncation_loss) {
    if (matrix.rows() != matrix.cols()) throw DomainError(kModule, "POVM matrix must be square");
    double scale = std::max(1.0, max_abs(matrix));
    if (max_abs(matrix - matrix.adjoint()) > kHermitianTol * scale) {
        throw DomainError(kModule, "POVM matrix is not Hermitian");
    }
    Matrix sym = 0.5 * (matrix + matrix.adjoint());
    auto eig = hermitian_eigenvalues(sym);
    auto [lo, hi] = std::minmax_element(eig.begin(), eig.end());
    if (*lo < -kEigenTol || *hi > 1.0 + kEigenTol) {
        throw PovmBoundError(kModule, "POVM element eigenvalues outside [0, 1]");
    }
    return FockOperator(std::move(sym), OperatorKind::povm_element, std::max(truncation_loss, 0.0));
}

FockOperator FockOperator::pure_state(const FockVector& vector, double tol) {
    const Vector& v = vector.amplitudes();
    return state(v * v.adjoint(), vector.truncation_loss(), tol);
}

double FockOperator::trace() const { return matrix_.trace().real(); }

bool FockOperator::is_diagonal(double tol) const {
    double scale = std::max(max_abs(matrix_), 1e-300);
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
        for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
            if (i != j && std::abs(matrix_(i, j)) > tol * scale) return false;
        }
    }
    return true;
}

std::vector<double> FockOperator::diagonal() const {
    std::vector<double> d(dim());
    for (int i = 0; i < dim(); ++i) d[i] = matrix_(i, i).real();
    return d;
}

FockOperator FockOperator::embedded(int dim) const {
    if (dim < this->dim()) throw SpaceMismatch(kModule, "cannot embed into a smaller space");
    if (dim == this->dim()) return *this;
    Matrix padded = Matrix::Zero(dim, dim);
    padded.topLeftCorner(this->dim(), this->dim()) = matrix_;
    return FockOperator(std::move(padded), kind_, truncation_loss_);
}

Vector coherent_amplitudes(PhasePoint alpha, int dim) {
    Vector c(dim);
    const Complex a = alpha.value();
    const double n2 = alpha.norm();
    if (n2 < 1000.0) {
        c(0) = std::exp(-0.5 * n2);
        for (int n = 0; n + 1 < dim; ++n) c(n + 1) = c(n) * a / std::sqrt(static_cast<double>(n + 1));
        return c;
    }
    // e^{-|alpha|^2/2} underflows here; build each term in log space.
    const double log_r = std::log(std::sqrt(n2));
    const double phase = std::arg(a);
    for (int n = 0; n < dim; ++n) {
        double log_mag = -0.5 * n2 + n * log_r - 0.5 * numerics::log_factorial(n);
        c(n) = std::polar(std::exp(log_mag), n * phase);
    }
    return c;
}

FockVector coherent_vector(PhasePoint alpha, const FockSpace& space, double tol) {
    double loss = numerics::poisson_tail(space.dim(), alpha.norm());
    if (loss > tol) {
        throw TruncationError(kModule, "coherent state |alpha|=" + format_real(alpha.abs()) +
                                           " loses " + format_real(loss) + " beyond dimension " +
                                           std::to_string(space.dim()));
    }
    return FockVector(space, coherent_amplitudes(alpha, space.dim()), loss);
}

FockOperator annihilation_operator(const FockSpace& space) {
    Matrix a = Matrix::Zero(space.dim(), space.dim());
    for (int n = 1; n < space.dim(); ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return FockOperator::generic(std::move(a));
}

FockOperator number_operator(const FockSpace& space) {
    Matrix n = Matrix::Zero(space.dim(), space.dim());
    for (int k = 0; k < space.dim(); ++k) n(k, k) = k;
    return FockOperator::generic(std::move(n));
}

FockOperator quadrature_operator(double theta, const FockSpace& space) {
    const Matrix a = annihilation_operator(space).matrix();
    const Complex phase = std::polar(1.0, theta);
    Matrix x = 0.5 * (a.adjoint() * std::conj(phase) + a * phase);
    return FockOperator::generic(std::move(x));
}

double expectation(const FockOperator& op, const FockOperator& state) {
    if (!(op.space() == state.space())) {
        throw SpaceMismatch(kModule, "expectation over spaces of dimension " + std::to_string(op.dim()) + " and " +
                                         std::to_string(state.dim()));
    }
    // tr(A B) = sum_ij A_ij B_ji
    Complex value = (op.matrix().cwiseProduct(state.matrix().transpose())).sum();
    if (std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real()))) {
        throw NumericalError(kModule, "expectation has imaginary residue " + format_real(value.imag()));
    }
    return value.real();
}

double trace(const FockOperator& op) { return op.trace(); }

double overlap_probability(const FockVector& a, const FockVector& b) {
    if (!(a.space() == b.space())) throw SpaceMismatch(kModule, "overlap between different spaces");
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

std::vector<double> fock_wavefunctions(double x, int count) {
    auto phi = numerics::hermite_functions(std::sqrt(2.0) * x, count);
    const double scale = std::pow(2.0, 0.25);
    for (double& v : phi) v *= scale;
    return phi;
}

double fock_wavefunction(int n, double x) {
    if (n < 0) throw DomainError(kModule, "negative Fock index");
    return fock_wavefunctions(x, n + 1)[n];
}

}  // namespace phasebound
