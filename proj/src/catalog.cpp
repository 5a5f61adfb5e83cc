#include "phasebound/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"

namespace phasebound {

namespace {

constexpr const char* kModule = "catalog";
constexpr double kPi = std::numbers::pi;
constexpr int kTabulationCap = 8192;

double log_cosh(double u) { return u + std::log1p(std::exp(-2.0 * u)) - std::numbers::ln2; }
double log_sinh(double u) { return u + std::log1p(-std::exp(-2.0 * u)) - std::numbers::ln2; }

double gaussian_density(double x, double mean, double delta_x) {
    double d = x - mean;
    return std::exp(-d * d / (2.0 * delta_x * delta_x)) / (std::sqrt(2.0 * kPi) * delta_x);
}

/// Tabulated distribution with suffix sums, used to pick the truncation and to
/// report the discarded weight exactly.
struct Tabulated {
    std::vector<double> probs;
    std::vector<double> suffix;  // suffix[d] = sum_{n >= d} probs[n]

    double loss(int d) const { return d < static_cast<int>(suffix.size()) ? suffix[d] : 0.0; }
};

Tabulated tabulate(const std::function<double(int)>& p, double mean) {
    Tabulated t;
    for (int n = 0; n < kTabulationCap; ++n) {
        t.probs.push_back(p(n));
        if (n > mean + 20 && n >= 1 && t.probs[n] + t.probs[n - 1] < 1e-40) break;
    }
    t.suffix.assign(t.probs.size() + 1, 0.0);
    for (int n = static_cast<int>(t.probs.size()) - 1; n >= 0; --n) t.suffix[n] = t.suffix[n + 1] + t.probs[n];
    return t;
}

/// Pure state from closed-form amplitudes; `p` gives |c_n|^2 for choosing D.
CatalogEntry pure_entry(const std::function<Complex(int)>& amplitude, const std::function<double(int)>& p,
                        double mean, const TruncationPolicy& policy, int min_dim = 2) {
    Tabulated t = tabulate(p, mean);
    int dim = choose_dim([&](int d) { return t.loss(d); }, amplitude_policy(policy), mean, min_dim);
    Vector v(dim);
    for (int n = 0; n < dim; ++n) v(n) = amplitude(n);
    FockVector vec(FockSpace(dim), std::move(v), t.loss(dim));
    return CatalogEntry{FockOperator::pure_state(vec, policy.tol), Family::vacuum, "", {}, {}, {}, vec};
}

void require(bool condition, const std::string& message) {
    if (!condition) throw DomainError(kModule, message);
}

}  // namespace

std::string family_name(Family family) {
    switch (family) {
        case Family::vacuum: return "vacuum";
        case Family::number: return "number";
        case Family::coherent: return "coherent";
        case Family::thermal: return "thermal";
        case Family::photon_added_thermal: return "photon_added_thermal";
        case Family::cat_even: return "cat_even";
        case Family::cat_odd: return "cat_odd";
        case Family::squeezed_vacuum: return "squeezed_vacuum";
        case Family::mixture: return "mixture";
        case Family::vacuum_number_mixture: return "vacuum_number_mixture";
        case Family::thermal_number_mixture: return "thermal_number_mixture";
        case Family::phase_averaged_coherent: return "phase_averaged_coherent";
        case Family::povm_number: return "povm_number";
        case Family::povm_projector: return "povm_projector";
        case Family::povm_coherent: return "povm_coherent";
        case Family::contaminated_one_photon: return "contaminated_one_photon";
    }
    return "unknown";
}

std::string p_tag_name(PTag tag) {
    switch (tag) {
        case PTag::regular_nonnegative: return "regular_nonnegative";
        case PTag::regular_negative: return "regular_negative";
        case PTag::singular: return "singular";
    }
    return "unknown";
}

double QuadratureEffect::reduced_trace() const { return 1.0 / kPi; }

double thermal_ratio(double n_tc) { return n_tc / (n_tc + 1.0); }

CatalogEntry number_state(int n, const TruncationPolicy& policy) {
    require(n >= 0, "number state index must be >= 0");
    auto amp = [n](int k) { return Complex(k == n ? 1.0 : 0.0, 0.0); };
    auto prob = [n](int k) { return k == n ? 1.0 : 0.0; };
    CatalogEntry e = pure_entry(amp, prob, n, policy, n + 1);
    e.family = n == 0 ? Family::vacuum : Family::number;
    e.label = "number(" + std::to_string(n) + ")";
    e.params = {{"n", n}};
    e.analytic.number_probability = prob;
    e.analytic.q = [n](PhasePoint a) { return numerics::poisson_weight(n, a.norm()) / kPi; };
    e.analytic.q_max = PeakValue{numerics::poisson_weight(n, n) / kPi, PhasePoint{std::sqrt(double(n)), 0.0}};
    if (n == 0) {
        e.analytic.q_marginal = [](double x) { return std::exp(-x * x) / std::sqrt(kPi); };
        e.analytic.q_marginal_max = 1.0 / std::sqrt(kPi);
        e.analytic.gaussian_quadrature = GaussianQuadrature{0.0, 0.5};
        e.analytic.quadrature_density = [](double x, double) -> std::optional<double> {
            return gaussian_density(x, 0.0, 0.5);
        };
    }
    e.p = {PTag::singular, {}};
    return e;
}

CatalogEntry vacuum_state(const TruncationPolicy& policy) { return number_state(0, policy); }

CatalogEntry coherent_state(PhasePoint alpha, const TruncationPolicy& policy) {
    const Complex a = alpha.value();
    const double u = alpha.norm();
    auto prob = [u](int n) { return numerics::poisson_weight(n, u); };
    int dim = choose_dim([u](int d) { return numerics::poisson_tail(d, u); }, amplitude_policy(policy), u);
    FockVector vec(FockSpace(dim), coherent_amplitudes(alpha, dim), numerics::poisson_tail(dim, u));
    CatalogEntry e{FockOperator::pure_state(vec, policy.tol), Family::coherent, "", {}, {}, {}, vec};
    e.label = "coherent(" + format_real(alpha.re) + "," + format_real(alpha.im) + ")";
    e.params = {{"re", alpha.re}, {"im", alpha.im}};
    e.analytic.number_probability = prob;
    e.analytic.q = [a](PhasePoint b) { return std::exp(-std::norm(b.value() - a)) / kPi; };
    e.analytic.q_max = PeakValue{1.0 / kPi, alpha};
    e.analytic.q_marginal = [x0 = alpha.re](double x) { return std::exp(-(x - x0) * (x - x0)) / std::sqrt(kPi); };
    e.analytic.q_marginal_max = 1.0 / std::sqrt(kPi);
    e.analytic.gaussian_quadrature = GaussianQuadrature{alpha.re, 0.5};
    e.analytic.quadrature_density = [a](double x, double theta) -> std::optional<double> {
        double mean = (a * std::polar(1.0, theta)).real();
        return gaussian_density(x, mean, 0.5);
    };
    e.p = {PTag::singular, {}};
    return e;
}

CatalogEntry thermal_state(double n_tc, const TruncationPolicy& policy) {
    require(n_tc >= 0.0 && std::isfinite(n_tc), "thermal mean photon number must be >= 0");
    const double xi = thermal_ratio(n_tc);
    auto prob = [xi](int n) { return n == 0 ? 1.0 - xi : (1.0 - xi) * std::pow(xi, n); };
    int dim = choose_dim([xi](int d) { return std::pow(xi, d); }, policy, n_tc);
    Matrix m = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) m(n, n) = prob(n);
    CatalogEntry e{FockOperator::state(std::move(m), std::pow(xi, dim), policy.tol), Family::thermal, "", {}, {}, {},
                   std::nullopt};
    if (n_tc == 0.0) e.pure_vector = FockVector(FockSpace(dim), Vector::Unit(dim, 0), 0.0);
    e.label = "thermal(" + format_real(n_tc) + ")";
    e.params = {{"n_tc", n_tc}, {"xi", xi}};
    const double w = n_tc + 1.0;
    e.analytic.number_probability = prob;
    e.analytic.q = [w](PhasePoint a) { return std::exp(-a.norm() / w) / (kPi * w); };
    e.analytic.q_max = PeakValue{1.0 / (kPi * w), PhasePoint{}};
    e.analytic.q_marginal = [w](double x) { return std::exp(-x * x / w) / std::sqrt(kPi * w); };
    e.analytic.q_marginal_max = 1.0 / std::sqrt(kPi * w);
    const double dx = 0.5 * std::sqrt(1.0 + 2.0 * n_tc);
    e.analytic.gaussian_quadrature = GaussianQuadrature{0.0, dx};
    e.analytic.quadrature_density = [dx](double x, double) -> std::optional<double> {
        return gaussian_density(x, 0.0, dx);
    };
    if (n_tc > 0.0) {
        e.p = {PTag::regular_nonnegative,
               [n_tc](PhasePoint a) { return std::exp(-a.norm() / n_tc) / (kPi * n_tc); }};
    }
    return e;
}

CatalogEntry photon_added_thermal(double n_tc, const TruncationPolicy& policy) {
    require(n_tc >= 0.0 && std::isfinite(n_tc), "thermal mean photon number must be >= 0");
    const double xi = thermal_ratio(n_tc);
    const double b = 1.0 - xi;
    auto prob = [xi, b](int n) { return n == 0 ? 0.0 : b * b * n * std::pow(xi, n - 1); };
    int dim = choose_dim([xi, b](int d) { return std::pow(xi, d - 1) * (d * b + xi); }, policy, 2.0 * n_tc + 1.0);
    Matrix m = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) m(n, n) = prob(n);
    double loss = std::pow(xi, dim - 1) * (dim * b + xi);
    CatalogEntry e{FockOperator::state(std::move(m), loss, policy.tol), Family::photon_added_thermal, "", {}, {}, {},
                   std::nullopt};
    if (n_tc == 0.0) e.pure_vector = FockVector(FockSpace(dim), Vector::Unit(dim, 1), 0.0);
    e.label = "photon_added_thermal(" + format_real(n_tc) + ")";
    e.params = {{"n_tc", n_tc}, {"xi", xi}};
    e.analytic.number_probability = prob;
    e.analytic.q = [b](PhasePoint a) {
        double u = a.norm();
        return b * b * u * std::exp(-b * u) / kPi;
    };
    e.analytic.q_max = PeakValue{b / (kPi * std::numbers::e), PhasePoint{std::sqrt(1.0 / b), 0.0}};
    e.analytic.q_marginal = [b](double x) {
        return std::pow(b, 1.5) / std::sqrt(kPi) * std::exp(-b * x * x) * (x * x + 0.5 / b);
    };
    e.analytic.q_marginal_max = std::sqrt(b / kPi) * std::exp(-0.5);
    if (n_tc > 0.0) {
        e.p = {PTag::regular_negative, [n_tc](PhasePoint a) {
                   double u = a.norm();
                   return ((n_tc + 1.0) * u - n_tc) * std::exp(-u / n_tc) / (kPi * n_tc * n_tc * n_tc);
               }};
    }
    return e;
}

CatalogEntry cat_state(PhasePoint alpha, Parity parity, const TruncationPolicy& policy) {
    const double u = alpha.norm();
    const bool even = parity == Parity::even;
    if (!even && u == 0.0) throw DegenerateState(kModule, "odd cat state is undefined at alpha = 0");
    const double log_norm = even ? log_cosh(u) : log_sinh(u);
    const double log_r = u > 0.0 ? std::log(std::sqrt(u)) : 0.0;
    const double phase = std::arg(alpha.value());
    auto matches = [even](int n) { return (n % 2 == 0) == even; };
    auto prob = [=](int n) {
        if (!matches(n)) return 0.0;
        if (u == 0.0) return n == 0 ? 1.0 : 0.0;
        return std::exp(2.0 * n * log_r - numerics::log_factorial(n) - log_norm);
    };
    auto amp = [=](int n) -> Complex {
        if (!matches(n)) return 0.0;
        if (u == 0.0) return n == 0 ? 1.0 : 0.0;
        return std::polar(std::exp(n * log_r - 0.5 * numerics::log_factorial(n) - 0.5 * log_norm), n * phase);
    };
    double mean = even ? u * std::tanh(u) : (u == 0.0 ? 0.0 : u / std::tanh(u));
    CatalogEntry e = pure_entry(amp, prob, mean, policy);
    e.family = even ? Family::cat_even : Family::cat_odd;
    e.label = std::string(even ? "cat_even(" : "cat_odd(") + format_real(alpha.re) + "," +
              format_real(alpha.im) + ")";
    e.params = {{"re", alpha.re}, {"im", alpha.im}, {"abs_alpha", alpha.abs()}};
    e.analytic.number_probability = prob;
    const Complex a = alpha.value();
    const double sign = even ? 1.0 : -1.0;
    e.analytic.q = [=](PhasePoint b) {
        Complex z = std::conj(b.value()) * a;
        double overlap = std::norm(std::exp(z - 0.5 * b.norm()) + sign * std::exp(-z - 0.5 * b.norm()));
        return overlap * std::exp(-log_norm) / (4.0 * kPi);
    };
    if (even && alpha.re == 0.0) {
        const double n_plus_sq4 = std::exp(u - log_cosh(u));  // 4 N_+^2
        const double amp_abs = std::abs(alpha.im);
        e.analytic.quadrature_density = [=](double x, double theta) -> std::optional<double> {
            if (theta != 0.0) return std::nullopt;
            double c = std::cos(2.0 * amp_abs * x);
            return n_plus_sq4 * std::sqrt(2.0 / kPi) * c * c * std::exp(-2.0 * x * x);
        };
    }
    e.p = {PTag::singular, {}};
    return e;
}

CatalogEntry squeezed_vacuum(double delta_x, const TruncationPolicy& policy) {
    require(delta_x > 0.0 && std::isfinite(delta_x), "squeezed vacuum requires Delta X > 0");
    const double r = -std::log(2.0 * delta_x);
    const double t = std::tanh(r);
    const double log_abs_t = std::log(std::abs(t));
    const double lc = std::log(std::cosh(r));
    auto prob = [=](int n) {
        if (n % 2 != 0) return 0.0;
        int k = n / 2;
        if (k == 0) return std::exp(-lc);
        if (t == 0.0) return 0.0;
        return std::exp(2.0 * k * log_abs_t + numerics::log_factorial(2 * k) - 2.0 * k * std::numbers::ln2 -
                        2.0 * numerics::log_factorial(k) - lc);
    };
    auto amp = [=](int n) -> Complex {
        if (n % 2 != 0) return 0.0;
        int k = n / 2;
        double magnitude = std::sqrt(prob(n));
        // (-tanh r)^k: alternating for r > 0, positive for r < 0.
        double sign = (t > 0.0 && k % 2 == 1) ? -1.0 : 1.0;
        return sign * magnitude;
    };
    double mean = std::sinh(r) * std::sinh(r);
    CatalogEntry e = pure_entry(amp, prob, mean, policy);
    e.family = Family::squeezed_vacuum;
    e.label = "squeezed_vacuum(" + format_real(delta_x) + ")";
    e.params = {{"delta_x", delta_x}, {"r", r}};
    e.analytic.number_probability = prob;
    const double s = 1.0 + 4.0 * delta_x * delta_x;
    e.analytic.q = [=](PhasePoint a) {
        return 4.0 * delta_x / (kPi * s) * std::exp(-(2.0 * a.re * a.re + 8.0 * delta_x * delta_x * a.im * a.im) / s);
    };
    e.analytic.q_max = PeakValue{4.0 * delta_x / (kPi * s), PhasePoint{}};
    e.analytic.q_marginal = [=](double x) { return std::sqrt(2.0 / (kPi * s)) * std::exp(-2.0 * x * x / s); };
    e.analytic.q_marginal_max = std::sqrt(2.0 / (kPi * s));
    e.analytic.gaussian_quadrature = GaussianQuadrature{0.0, delta_x};
    e.analytic.quadrature_density = [=](double x, double theta) -> std::optional<double> {
        double c = std::cos(theta), sn = std::sin(theta);
        double var = delta_x * delta_x * c * c + sn * sn / (16.0 * delta_x * delta_x);
        return gaussian_density(x, 0.0, std::sqrt(var));
    };
    e.p = {PTag::singular, {}};
    return e;
}

CatalogEntry mixture(const std::vector<WeightedEntry>& components) {
    if (components.empty()) throw WeightError(kModule, "mixture needs at least one component");
    double total = 0.0;
    int dim = 2;
    for (const auto& c : components) {
        if (!(c.weight >= 0.0)) throw WeightError(kModule, "mixture weights must be >= 0");
        if (c.entry.op.kind() != OperatorKind::state) throw WeightError(kModule, "mixture components must be states");
        total += c.weight;
        dim = std::max(dim, c.entry.op.dim());
    }
    if (std::abs(total - 1.0) > 1e-12) throw WeightError(kModule, "mixture weights sum to " + format_real(total));

    Matrix m = Matrix::Zero(dim, dim);
    double loss = 0.0;
    bool any_singular = false, any_negative = false;
    bool have_q = true, have_p = true, have_stats = true, have_density = true;
    for (const auto& c : components) {
        m += c.weight * c.entry.op.embedded(dim).matrix();
        loss += c.weight * c.entry.op.truncation_loss();
        if (c.weight == 0.0) continue;
        any_singular |= c.entry.p.tag == PTag::singular;
        any_negative |= c.entry.p.tag == PTag::regular_negative;
        have_q &= static_cast<bool>(c.entry.analytic.q);
        have_p &= static_cast<bool>(c.entry.p.closed_form);
        have_stats &= static_cast<bool>(c.entry.analytic.number_probability);
        have_density &= static_cast<bool>(c.entry.analytic.quadrature_density);
    }
    double tol = std::max(loss, kTolTrunc);
    CatalogEntry e{FockOperator::state(std::move(m), loss, tol), Family::mixture, "mixture", {}, {}, {}, std::nullopt};

    // Components with zero weight do not contribute to closed forms.
    std::vector<WeightedEntry> active;
    for (const auto& c : components) {
        if (c.weight > 0.0) active.push_back(c);
    }
    if (active.size() == 1) {
        e.analytic = active.front().entry.analytic;
        e.p = active.front().entry.p;
        e.pure_vector = active.front().entry.pure_vector;
        return e;
    }
    if (have_q) {
        e.analytic.q = [active](PhasePoint a) {
            double s = 0.0;
            for (const auto& c : active) s += c.weight * c.entry.analytic.q(a);
            return s;
        };
    }
    if (have_stats) {
        e.analytic.number_probability = [active](int n) {
            double s = 0.0;
            for (const auto& c : active) s += c.weight * c.entry.analytic.number_probability(n);
            return s;
        };
    }
    if (have_density) {
        e.analytic.quadrature_density = [active](double x, double theta) -> std::optional<double> {
            double s = 0.0;
            for (const auto& c : active) {
                auto v = c.entry.analytic.quadrature_density(x, theta);
                if (!v) return std::nullopt;
                s += c.weight * *v;
            }
            return s;
        };
    }
    if (any_singular) {
        e.p = {PTag::singular, {}};
    } else {
        e.p.tag = any_negative ? PTag::regular_negative : PTag::regular_nonnegative;
        if (have_p) {
            e.p.closed_form = [active](PhasePoint a) {
                double s = 0.0;
                for (const auto& c : active) s += c.weight * c.entry.p.closed_form(a);
                return s;
            };
        }
    }
    return e;
}

CatalogEntry vacuum_number_mixture(double p, int photons, const TruncationPolicy& policy) {
    if (!(p >= 0.0 && p <= 1.0)) throw WeightError(kModule, "mixture probability must lie in [0, 1]");
    require(photons >= 1, "vacuum_number_mixture requires N >= 1");
    CatalogEntry e = mixture({{1.0 - p, number_state(0, policy)}, {p, number_state(photons, policy)}});
    e.family = Family::vacuum_number_mixture;
    e.label = "vacuum_number_mixture(" + format_real(p) + "," + std::to_string(photons) + ")";
    e.params = {{"p", p}, {"N", photons}};
    return e;
}

CatalogEntry thermal_number_mixture(double p, double n_tc, int n_0, const TruncationPolicy& policy) {
    if (!(p >= 0.0 && p <= 1.0)) throw WeightError(kModule, "mixture probability must lie in [0, 1]");
    CatalogEntry e = mixture({{p, thermal_state(n_tc, policy)}, {1.0 - p, number_state(n_0, policy)}});
    e.family = Family::thermal_number_mixture;
    e.label = "thermal_number_mixture(" + format_real(p) + "," + format_real(n_tc) + "," +
              std::to_string(n_0) + ")";
    e.params = {{"p", p}, {"n_tc", n_tc}, {"n_0", n_0}};
    return e;
}

CatalogEntry povm_number(int n) {
    require(n >= 0, "number POVM index must be >= 0");
    int dim = std::max(n + 1, 2);
    Matrix m = Matrix::Zero(dim, dim);
    m(n, n) = 1.0;
    CatalogEntry e{FockOperator::povm_element(std::move(m)), Family::povm_number, "Delta_" + std::to_string(n),
                   {{"n", n}}, {}, {PTag::singular, {}}, std::nullopt};
    e.analytic.q = [n](PhasePoint a) { return numerics::poisson_weight(n, a.norm()) / kPi; };
    e.analytic.q_max = PeakValue{numerics::poisson_weight(n, n) / kPi, PhasePoint{std::sqrt(double(n)), 0.0}};
    return e;
}

CatalogEntry povm_projector(const FockVector& vector, std::string label) {
    const Vector& v = vector.amplitudes();
    CatalogEntry e{FockOperator::povm_element(v * v.adjoint(), vector.truncation_loss()), Family::povm_projector,
                   std::move(label), {}, {}, {PTag::singular, {}}, vector};
    return e;
}

CatalogEntry povm_coherent(PhasePoint alpha, const TruncationPolicy& policy) {
    const double u = alpha.norm();
    int dim = choose_dim([u](int d) { return numerics::poisson_tail(d, u); }, amplitude_policy(policy), u);
    FockVector vec(FockSpace(dim), coherent_amplitudes(alpha, dim), numerics::poisson_tail(dim, u));
    const Vector& v = vec.amplitudes();
    Matrix m = v * v.adjoint() / kPi;
    CatalogEntry e{FockOperator::povm_element(std::move(m), vec.truncation_loss() / kPi), Family::povm_coherent,
                   "Delta_alpha(" + format_real(alpha.re) + "," + format_real(alpha.im) + ")",
                   {{"re", alpha.re}, {"im", alpha.im}}, {}, {PTag::singular, {}}, vec};
    const Complex a = alpha.value();
    e.analytic.q = [a](PhasePoint b) { return std::exp(-std::norm(b.value() - a)) / (kPi * kPi); };
    e.analytic.q_max = PeakValue{1.0 / (kPi * kPi), alpha};
    return e;
}

CatalogEntry contaminated_one_photon(double p, double q) {
    if (!(p >= 0.0 && q >= 0.0)) throw DomainError(kModule, "contaminated detector weights must be >= 0");
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = q;
    m(1, 1) = p;
    m(2, 2) = q;
    CatalogEntry e{FockOperator::povm_element(std::move(m)), Family::contaminated_one_photon,
                   "contaminated_one_photon(" + format_real(p) + "," + format_real(q) + ")",
                   {{"p", p}, {"q", q}}, {}, {PTag::singular, {}}, std::nullopt};
    e.analytic.q = [p, q](PhasePoint a) {
        double u = a.norm();
        return std::exp(-u) * (q + p * u + 0.5 * q * u * u) / kPi;
    };
    return e;
}

QuadratureEffect povm_quadrature(double x) {
    if (!std::isfinite(x)) throw DomainError(kModule, "quadrature outcome must be finite");
    return QuadratureEffect{x};
}

}  // namespace phasebound
