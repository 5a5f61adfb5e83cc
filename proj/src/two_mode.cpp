#include "phasebound/two_mode.hpp"

#include <cmath>
#include <numbers>

#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"

namespace phasebound {

namespace {

constexpr const char* kModule = "two_mode";

}  // namespace

TwoModeState TwoModeState::schmidt(FockSpace space, std::vector<double> coefficients, double truncation_loss,
                                   double tol) {
    if (static_cast<int>(coefficients.size()) != space.dim()) {
        throw SpaceMismatch(kModule, "Schmidt coefficient count differs from the mode dimension");
    }
    double norm = 0.0;
    for (double c : coefficients) norm += c * c;
    if (norm < 1.0 - tol || norm > 1.0 + 1e-12) {
        throw TruncationError(kModule, "Schmidt weights sum to 1 - " + format_real(1.0 - norm));
    }
    TwoModeState s(space, space);
    s.schmidt_ = true;
    s.coefficients_ = std::move(coefficients);
    s.truncation_loss_ = std::max(truncation_loss, 0.0);
    return s;
}

TwoModeState TwoModeState::dense(FockSpace space1, FockSpace space2, Matrix matrix, double truncation_loss,
                                 double tol) {
    if (matrix.rows() != static_cast<Eigen::Index>(space1.dim()) * space2.dim()) {
        throw SpaceMismatch(kModule, "two-mode matrix size differs from D1 * D2");
    }
    // Reuse the single-operator validation on the joint space.
    FockOperator checked = FockOperator::state(std::move(matrix), truncation_loss, tol);
    TwoModeState s(space1, space2);
    s.matrix_ = checked.matrix();
    s.truncation_loss_ = checked.truncation_loss();
    return s;
}

TwoModeState TwoModeState::product(const FockOperator& mode1, const FockOperator& mode2) {
    if (mode1.kind() != OperatorKind::state || mode2.kind() != OperatorKind::state) {
        throw DomainError(kModule, "product components must be states");
    }
    const int d1 = mode1.dim(), d2 = mode2.dim();
    Matrix m(d1 * d2, d1 * d2);
    for (int a = 0; a < d1; ++a) {
        for (int b = 0; b < d1; ++b) m.block(a * d2, b * d2, d2, d2) = mode1.matrix()(a, b) * mode2.matrix();
    }
    double loss = 1.0 - (1.0 - mode1.truncation_loss()) * (1.0 - mode2.truncation_loss());
    return dense(mode1.space(), mode2.space(), std::move(m), loss, std::max(kTolTrunc, 2.0 * loss + 1e-15));
}

Matrix TwoModeState::dense_matrix() const {
    if (!schmidt_) return matrix_;
    const int d = space1_.dim();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
    for (int n = 0; n < d; ++n) psi(n * d + n) = coefficients_[n];
    return psi * psi.adjoint();
}

double TwoModeState::joint_probability(int n1, int n2) const {
    if (n1 < 0 || n2 < 0) throw DomainError(kModule, "negative photon number");
    if (n1 >= space1_.dim() || n2 >= space2_.dim()) return 0.0;
    if (schmidt_) return n1 == n2 ? coefficients_[n1] * coefficients_[n1] : 0.0;
    return matrix_(n1 * space2_.dim() + n2, n1 * space2_.dim() + n2).real();
}

FockOperator TwoModeState::reduced(int mode) const {
    if (mode != 1 && mode != 2) throw DomainError(kModule, "mode must be 1 or 2");
    if (schmidt_) {
        const int d = space1_.dim();
        Matrix m = Matrix::Zero(d, d);
        for (int n = 0; n < d; ++n) m(n, n) = coefficients_[n] * coefficients_[n];
        return FockOperator::state(std::move(m), truncation_loss_, std::max(kTolTrunc, truncation_loss_));
    }
    const int d1 = space1_.dim(), d2 = space2_.dim();
    Matrix m;
    if (mode == 1) {
        m = Matrix::Zero(d1, d1);
        for (int a = 0; a < d1; ++a)
            for (int b = 0; b < d1; ++b)
                for (int k = 0; k < d2; ++k) m(a, b) += matrix_(a * d2 + k, b * d2 + k);
    } else {
        m = Matrix::Zero(d2, d2);
        for (int a = 0; a < d2; ++a)
            for (int b = 0; b < d2; ++b)
                for (int k = 0; k < d1; ++k) m(a, b) += matrix_(k * d2 + a, k * d2 + b);
    }
    return FockOperator::state(std::move(m), truncation_loss_, std::max(kTolTrunc, truncation_loss_));
}

TwoModeState tmsv(double zeta, const TruncationPolicy& policy) {
    if (!(zeta >= 0.0 && zeta < 1.0)) throw DomainError(kModule, "zeta must lie in [0, 1)");
    const double z2 = zeta * zeta;
    int dim = choose_dim([z2](int d) { return std::pow(z2, d); }, amplitude_policy(policy), z2 / (1.0 - z2));
    std::vector<double> c(dim);
    const double norm = std::sqrt(1.0 - z2);
    for (int n = 0; n < dim; ++n) c[n] = norm * std::pow(zeta, n);
    TwoModeState s = TwoModeState::schmidt(FockSpace(dim), std::move(c), std::pow(z2, dim), policy.tol);
    s.difference_gaussian = GaussianQuadrature{0.0, std::sqrt((1.0 - zeta) / (2.0 * (1.0 + zeta)))};
    return s;
}

BoundReport joint_number_test(const TwoModeState& state, int n1, int n2) {
    if (n1 < 0 || n2 < 0 || n1 >= state.space1().dim() || n2 >= state.space2().dim()) {
        throw DomainError(kModule, "outcome outside the truncated spaces");
    }
    double p = state.joint_probability(n1, n2);
    double bound = classical_number_bound(n1) * classical_number_bound(n2);
    return make_report(p, bound, TestKind::state_test,
                       "(" + std::to_string(n1) + "," + std::to_string(n2) + ")", false, Provenance::numeric,
                       Provenance::analytic);
}

BoundReport total_number_test(const TwoModeState& state, int n) {
    if (n < 0 || n >= state.space1().dim() + state.space2().dim() - 1) {
        throw DomainError(kModule, "total photon number outside the truncated spaces");
    }
    double p = 0.0;
    for (int m = 0; m <= n; ++m) p += state.joint_probability(m, n - m);
    return make_report(p, classical_number_bound(n), TestKind::state_test, "n=" + std::to_string(n), false,
                       Provenance::numeric, Provenance::analytic);
}

double quadrature_difference_density(const TwoModeState& state, double x) {
    if (!std::isfinite(x)) throw DomainError(kModule, "non-finite quadrature value");
    const int d1 = state.space1().dim(), d2 = state.space2().dim();
    // With x1 = (x + u)/2 and x2 = (u - x)/2 the integrand over u is
    // exp(-u^2) times a polynomial of degree below 2 (d1 + d2).
    const auto& rule = numerics::gauss_hermite(d1 + d2);
    const Eigen::MatrixXd rho = state.is_schmidt() ? Eigen::MatrixXd() : Eigen::MatrixXd(state.dense_matrix().real());
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = rule.nodes[i];
        auto psi1 = fock_wavefunctions(0.5 * (x + u), d1);
        auto psi2 = fock_wavefunctions(0.5 * (u - x), d2);
        double value;
        if (state.is_schmidt()) {
            double amp = 0.0;
            const auto& c = state.schmidt_coefficients();
            for (int n = 0; n < d1; ++n) amp += c[n] * psi1[n] * psi2[n];
            value = amp * amp;
        } else {
            Eigen::VectorXd phi(d1 * d2);
            for (int a = 0; a < d1; ++a)
                for (int b = 0; b < d2; ++b) phi(a * d2 + b) = psi1[a] * psi2[b];
            value = phi.dot(rho * phi);
        }
        s += 0.5 * rule.scaled_weights[i] * value;
    }
    return std::max(s, 0.0);
}

double classical_difference_bound() { return 1.0 / std::sqrt(std::numbers::pi); }

BoundReport quadrature_difference_test(const TwoModeState& state, double x) {
    double p;
    Provenance prov = Provenance::numeric;
    if (state.difference_gaussian) {
        const auto& g = *state.difference_gaussian;
        double d = x - g.mean;
        p = std::exp(-d * d / (2.0 * g.delta_x * g.delta_x)) / (std::sqrt(2.0 * std::numbers::pi) * g.delta_x);
        prov = Provenance::analytic;
    } else {
        p = quadrature_difference_density(state, x);
    }
    return make_report(p, classical_difference_bound(), TestKind::state_test, "x=" + format_real(x), true, prov,
                       Provenance::analytic);
}

std::vector<JointBound> joint_bound_table(int n_max) {
    if (n_max < 0) throw DomainError(kModule, "n_max must be >= 0");
    std::vector<JointBound> rows;
    for (int a = 0; a <= n_max; ++a)
        for (int b = 0; b <= n_max; ++b) rows.push_back({a, b, classical_number_bound(a) * classical_number_bound(b)});
    return rows;
}

}  // namespace phasebound
