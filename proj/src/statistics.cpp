#include "phasebound/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

constexpr const char* kModule = "statistics";

struct Moments {
    Complex a2;  // <a^2>
    Complex a;   // <a>
    double n = 0.0;
};

Moments moments(const FockOperator& state) {
    const Matrix& rho = state.matrix();
    Moments m;
    for (int k = 1; k < state.dim(); ++k) {
        m.a += std::sqrt(static_cast<double>(k)) * rho(k, k - 1);
        m.n += k * rho(k, k).real();
        if (k >= 2) m.a2 += std::sqrt(static_cast<double>(k) * (k - 1)) * rho(k, k - 2);
    }
    return m;
}

Matrix rotated(const Matrix& rho, double theta) {
    Matrix m = rho;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i != j) m(i, j) *= std::polar(1.0, theta * static_cast<double>(i - j));
        }
    }
    return m;
}

void require_state(const FockOperator& op) {
    if (op.kind() != OperatorKind::state) throw DomainError(kModule, "operator is not a state");
}

}  // namespace

double NumberDistribution::at(int n) const {
    if (n < 0 || n >= static_cast<int>(probabilities.size())) return 0.0;
    return probabilities[n];
}

double NumberDistribution::mean() const {
    double s = 0.0;
    for (std::size_t n = 0; n < probabilities.size(); ++n) s += n * probabilities[n];
    return s;
}

NumberDistribution number_statistics(const FockOperator& state) {
    require_state(state);
    NumberDistribution out{state.diagonal(), state.truncation_loss()};
    for (double& p : out.probabilities) p = std::max(p, 0.0);
    return out;
}

FockOperator rotate_phase(const FockOperator& state, double theta) {
    require_state(state);
    return FockOperator::state(rotated(state.matrix(), theta), state.truncation_loss(), 1.0);
}

double quadrature_density(const FockOperator& state, double x, double theta) {
    require_state(state);
    const int dim = state.dim();
    const Matrix rho = theta == 0.0 ? state.matrix() : rotated(state.matrix(), theta);
    auto psi_values = fock_wavefunctions(x, dim);
    Eigen::Map<const Eigen::VectorXd> psi(psi_values.data(), dim);
    Eigen::VectorXd row = rho.real() * psi;
    double density = psi.dot(row);

    if (state.truncation_loss() > 0.0) {
        // Contribution of the two highest retained levels, a proxy for what the
        // truncation cut off. Two levels so that parity states are covered.
        const int lo = std::max(dim - 2, 0);
        const int k = dim - lo;
        double top_part = 2.0 * psi.tail(k).dot(row.tail(k)) -
                          psi.tail(k).dot(rho.real().bottomRightCorner(k, k) * psi.tail(k));
        if (std::abs(top_part) > 1e-9 * std::max(std::abs(density), 1.0)) {
            throw TruncationError(kModule, "highest Fock levels contribute " + format_real(top_part) +
                                               " to the quadrature density at x = " + format_real(x));
        }
    }
    return std::max(density, 0.0);
}

double quadrature_density(const CatalogEntry& entry, double x, double theta) {
    if (entry.analytic.quadrature_density) {
        if (auto v = entry.analytic.quadrature_density(x, theta)) return *v;
    }
    return quadrature_density(entry.op, x, theta);
}

MandelReport mandel_q(const FockOperator& state) {
    auto dist = number_statistics(state);
    double mean = 0.0, second = 0.0;
    for (std::size_t n = 0; n < dist.probabilities.size(); ++n) {
        mean += n * dist.probabilities[n];
        second += static_cast<double>(n) * n * dist.probabilities[n];
    }
    if (mean <= 0.0) throw DegenerateState(kModule, "Mandel parameter undefined for <n> = 0");
    double variance = std::max(second - mean * mean, 0.0);
    return MandelReport{mean, variance, variance / mean - 1.0};
}

double quadrature_variance(const FockOperator& state, double theta) {
    require_state(state);
    Moments m = moments(state);
    Complex c = m.a2 - m.a * m.a;
    return (2.0 * m.n + 1.0) / 4.0 - std::norm(m.a) / 2.0 + (c * std::polar(1.0, 2.0 * theta)).real() / 2.0;
}

VarianceMinimum min_variance_over_theta(const FockOperator& state) {
    require_state(state);
    Moments m = moments(state);
    Complex c = m.a2 - m.a * m.a;
    double base = (2.0 * m.n + 1.0) / 4.0 - std::norm(m.a) / 2.0;
    double theta = std::abs(c) == 0.0 ? 0.0 : (std::numbers::pi - std::arg(c)) / 2.0;
    theta = std::fmod(theta, std::numbers::pi);
    if (theta < 0.0) theta += std::numbers::pi;
    return VarianceMinimum{theta, base - std::abs(c) / 2.0};
}

SqueezingPercentage squeezing(const FockOperator& state) {
    double v = min_variance_over_theta(state).value;
    double raw = 100.0 * (1.0 - 2.0 * std::sqrt(std::max(v, 0.0)));
    return SqueezingPercentage{raw, std::max(raw, 0.0)};
}

double squeezing_percentage(const FockOperator& state) { return squeezing(state).clipped; }

}  // namespace phasebound
