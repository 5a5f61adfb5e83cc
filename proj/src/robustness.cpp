#include "phasebound/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"

namespace phasebound {

namespace {

constexpr const char* kModule = "robustness";
constexpr double kPi = std::numbers::pi;

void require_eta(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw DomainError(kModule, "efficiency must lie in (0, 1], got " + format_real(eta));
}

double log_binomial(int n, int k) {
    return numerics::log_factorial(n) - numerics::log_factorial(k) - numerics::log_factorial(n - k);
}

bool is_single_photon(const CatalogEntry& e) {
    return e.family == Family::number && e.params.count("n") && e.params.at("n") == 1.0;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sum of N Bernoulli draws; avoids library distributions whose output is not
/// specified across standard library implementations.
std::int64_t binomial_draw(std::int64_t trials, double p, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::int64_t k = 0;
    for (std::int64_t i = 0; i < trials; ++i) {
        double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        if (u < p) ++k;
    }
    return k;
}

void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError(kModule, "probability must lie in [0, 1]");
}

void require_trials(const SamplingModel& model) {
    if (model.trials < 1) throw DomainError(kModule, "trial count must be >= 1");
}

}  // namespace

EfficiencyModel::EfficiencyModel(double eta_value) : eta(eta_value) { require_eta(eta_value); }

double EfficiencyModel::t() const { return std::sqrt(eta); }
double EfficiencyModel::r() const { return std::sqrt(1.0 - eta); }

FockOperator lossy_state(const FockOperator& state, double eta) {
    require_eta(eta);
    if (state.kind() != OperatorKind::state) throw DomainError(kModule, "loss channel acts on states");
    if (eta == 1.0) return state;
    const int dim = state.dim();
    const Matrix& rho = state.matrix();
    const double log_eta = std::log(eta);
    const double log_loss = std::log1p(-eta);
    // Precompute sqrt(C(m + k, k) eta^m (1 - eta)^k) per (m, k).
    Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int k = 0; m + k < dim; ++k) {
            factor(m, k) = std::exp(0.5 * (log_binomial(m + k, k) + m * log_eta + k * log_loss));
        }
    }
    Matrix out = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) {
            Complex s = 0.0;
            for (int k = 0; m + k < dim && n + k < dim; ++k) s += factor(m, k) * factor(n, k) * rho(m + k, n + k);
            out(m, n) = s;
        }
    }
    out = 0.5 * (out + out.adjoint()).eval();
    return FockOperator::state(std::move(out), state.truncation_loss(), std::max(kTolTrunc, state.truncation_loss()));
}

double lossy_q_tilde(const FockOperator& probe, double eta, PhasePoint alpha) {
    require_eta(eta);
    EfficiencyModel model(eta);
    const double t = model.t(), r = model.r();
    const int order = probe.dim();
    const auto& rule = numerics::gauss_hermite(order);
    const bool diagonal = probe.is_diagonal();
    const Complex a = alpha.value();
    double s = 0.0;
    for (int i = 0; i < order; ++i) {
        for (int j = 0; j < order; ++j) {
            const Complex b(rule.nodes[i], rule.nodes[j]);
            const Complex ancilla = t * b + r * a;
            const Complex signal = t * a - r * b;
            double q0 = std::exp(-std::norm(ancilla)) / kPi;
            double q;
            PhasePoint sp{signal.real(), signal.imag()};
            if (diagonal) {
                q = 0.0;
                for (int n = 0; n < probe.dim(); ++n) {
                    q += probe.matrix()(n, n).real() * numerics::poisson_weight(n, sp.norm());
                }
                q /= kPi;
            } else {
                Vector c = coherent_amplitudes(sp, probe.dim());
                q = c.dot(probe.matrix() * c).real() / kPi;
            }
            s += rule.scaled_weights[i] * rule.scaled_weights[j] * q0 * q;
        }
    }
    return s;
}

MaxResult lossy_q_tilde_max(const CatalogEntry& probe, double eta) {
    require_eta(eta);
    if (is_single_photon(probe)) {
        if (eta >= 0.5) {
            double u = (2.0 * eta - 1.0) / eta;
            return MaxResult{eta / kPi * std::exp(-u), PhasePoint{std::sqrt(u), 0.0}, MaxMethod::closed_form, 0.0};
        }
        return MaxResult{(1.0 - eta) / kPi, PhasePoint{}, MaxMethod::closed_form, 0.0};
    }
    const FockOperator& op = probe.op;
    return maximize_surface([&](PhasePoint a) { return lossy_q_tilde(op, eta, a); }, search_radius(op),
                            op.is_diagonal());
}

BoundReport lossy_bound_ideal_povm(const CatalogEntry& povm, const CatalogEntry& probe, double eta) {
    if (povm.op.kind() != OperatorKind::povm_element) throw DomainError(kModule, povm.label + " is not a POVM element");
    FockOperator rho_t = lossy_state(probe.op, eta);
    double p = outcome_probability(povm.op, rho_t);
    MaxResult qt = lossy_q_tilde_max(probe, eta);
    return make_report(p, kPi * qt.value * povm.op.trace(), TestKind::measurement_test, povm.label, false,
                       Provenance::numeric,
                       qt.method == MaxMethod::closed_form ? Provenance::analytic : Provenance::numeric);
}

BoundReport lossy_bound_effective_povm(const CatalogEntry& povm, const CatalogEntry& probe, double eta) {
    if (povm.op.kind() != OperatorKind::povm_element) throw DomainError(kModule, povm.label + " is not a POVM element");
    FockOperator rho_t = lossy_state(probe.op, eta);
    double p = outcome_probability(povm.op, rho_t);
    MaxResult qm = q_max(probe);
    return make_report(p, kPi * qm.value * povm.op.trace() / eta, TestKind::measurement_test, povm.label, false,
                       Provenance::numeric,
                       qm.method == MaxMethod::closed_form ? Provenance::analytic : Provenance::numeric);
}

BoundReport lossy_state_test(const CatalogEntry& state, const CatalogEntry& povm, double eta) {
    if (povm.op.kind() != OperatorKind::povm_element) throw DomainError(kModule, povm.label + " is not a POVM element");
    FockOperator rho_t = lossy_state(state.op, eta);
    double p = outcome_probability(povm.op, rho_t);
    MaxResult qm = q_max(povm);
    return make_report(p, kPi * qm.value, TestKind::state_test, povm.label, false, Provenance::numeric,
                       qm.method == MaxMethod::closed_form ? Provenance::analytic : Provenance::numeric);
}

std::string bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::state_test: return "state_test";
        case BoundKind::ideal_povm: return "ideal_povm";
        case BoundKind::effective_povm: return "effective_povm";
    }
    return "unknown";
}

BoundKind parse_bound_kind(const std::string& name) {
    if (name == "state_test") return BoundKind::state_test;
    if (name == "ideal_povm") return BoundKind::ideal_povm;
    if (name == "effective_povm") return BoundKind::effective_povm;
    throw ConfigError(kModule, "unknown bound kind '" + name + "'");
}

namespace {

BoundReport report_at(const CatalogEntry& state, const CatalogEntry& povm, double eta, BoundKind kind) {
    switch (kind) {
        case BoundKind::state_test: return lossy_state_test(state, povm, eta);
        case BoundKind::ideal_povm: return lossy_bound_ideal_povm(povm, state, eta);
        case BoundKind::effective_povm: return lossy_bound_effective_povm(povm, state, eta);
    }
    throw DomainError(kModule, "unknown bound kind");
}

double margin(const BoundReport& r) { return r.probability - r.bound * (1.0 + kViolationTol); }

}  // namespace

std::vector<EfficiencyPoint> efficiency_scan(const CatalogEntry& state, const CatalogEntry& povm,
                                             const std::vector<double>& eta_grid, BoundKind kind) {
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        require_eta(eta_grid[i]);
        if (i > 0 && !(eta_grid[i] > eta_grid[i - 1])) throw DomainError(kModule, "efficiency grid must increase");
    }
    std::vector<EfficiencyPoint> out;
    out.reserve(eta_grid.size());
    for (double eta : eta_grid) out.push_back({eta, report_at(state, povm, eta, kind)});
    return out;
}

std::optional<EfficiencyWindow> efficiency_violation_window(const CatalogEntry& state, const CatalogEntry& povm,
                                                            BoundKind kind, int grid_points, double resolution) {
    grid_points = std::max(grid_points, 2);
    auto f = [&](double eta) { return margin(report_at(state, povm, eta, kind)); };
    std::vector<double> grid(grid_points);
    std::vector<double> values(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        grid[i] = static_cast<double>(i + 1) / grid_points;
        values[i] = f(grid[i]);
    }
    int first = -1;
    for (int i = 0; i < grid_points; ++i) {
        if (values[i] > 0.0) {
            first = i;
            break;
        }
    }
    if (first < 0) return std::nullopt;
    int last = first;
    while (last + 1 < grid_points && values[last + 1] > 0.0) ++last;

    EfficiencyWindow w;
    w.eta_lo = first == 0 ? grid[0] : numerics::bisect_root(f, grid[first - 1], grid[first], resolution);
    w.eta_hi = last == grid_points - 1 ? 1.0 : numerics::bisect_root(f, grid[last], grid[last + 1], resolution);
    return w;
}

SamplingMoments sampling_moments(double p, const SamplingModel& model) {
    require_probability(p);
    require_trials(model);
    return SamplingMoments{p, std::sqrt(p * (1.0 - p) / static_cast<double>(model.trials))};
}

double simulate_counts(double p, const SamplingModel& model) {
    require_probability(p);
    require_trials(model);
    return static_cast<double>(binomial_draw(model.trials, p, model.seed)) / static_cast<double>(model.trials);
}

std::vector<double> simulate_replications(double p, const SamplingModel& model, int replications) {
    require_probability(p);
    require_trials(model);
    std::vector<double> out(std::max(replications, 0));
    for (int i = 0; i < replications; ++i) {
        std::uint64_t seed = splitmix64(model.seed ^ splitmix64(static_cast<std::uint64_t>(i)));
        out[i] = static_cast<double>(binomial_draw(model.trials, p, seed)) / static_cast<double>(model.trials);
    }
    return out;
}

double significance(const BoundReport& report, const SamplingModel& model) {
    if (report.density) {
        throw DensityUnsupported(kModule, "finite-sampling significance is undefined for densities without binning");
    }
    auto m = sampling_moments(std::clamp(report.probability, 0.0, 1.0), model);
    double diff = report.probability - report.bound;
    if (m.stddev == 0.0) {
        if (diff == 0.0) return 0.0;
        return diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
    return diff / m.stddev;
}

}  // namespace phasebound
