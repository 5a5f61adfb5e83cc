#include "phasebound/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"

namespace phasebound {

namespace {

constexpr const char* kModule = "phase_space";
constexpr double kPi = std::numbers::pi;
constexpr int kGridRadial = 64;
constexpr int kGridAngular = 64;
constexpr int kMaxSweeps = 200;
constexpr double kStallTol = 1e-9;

/// Unchecked (1/pi)<alpha|A|alpha>.
double q_raw(const FockOperator& op, PhasePoint alpha, bool diagonal) {
    const int dim = op.dim();
    if (diagonal) {
        double s = 0.0;
        const double u = alpha.norm();
        for (int n = 0; n < dim; ++n) s += op.matrix()(n, n).real() * numerics::poisson_weight(n, u);
        return s / kPi;
    }
    Vector c = coherent_amplitudes(alpha, dim);
    return c.dot(op.matrix() * c).real() / kPi;
}

/// Integral of Q(x, y) over y with a K-node Gauss-Hermite rule.
double marginal_with_rule(const FockOperator& op, double x, int order) {
    const auto& rule = numerics::gauss_hermite(order);
    const int dim = op.dim();
    double s = 0.0;
    if (op.is_diagonal()) {
        for (int i = 0; i < order; ++i) s += rule.scaled_weights[i] * q_raw(op, PhasePoint{x, rule.nodes[i]}, true);
        return s;
    }
    Matrix c(dim, order);
    for (int i = 0; i < order; ++i) c.col(i) = coherent_amplitudes(PhasePoint{x, rule.nodes[i]}, dim);
    Matrix ac = op.matrix() * c;
    for (int i = 0; i < order; ++i) s += rule.scaled_weights[i] * c.col(i).dot(ac.col(i)).real();
    return s / kPi;
}

numerics::LineMax refine_line(const std::function<double(double)>& f, double lo, double hi) {
    return numerics::golden_section_max(f, lo, hi, 1e-11 * std::max(1.0, hi - lo));
}

}  // namespace

std::string max_method_name(MaxMethod method) {
    return method == MaxMethod::closed_form ? "closed_form" : "grid_refine";
}

double q_value(const FockOperator& op, PhasePoint alpha, double tol) {
    if (!std::isfinite(alpha.re) || !std::isfinite(alpha.im)) throw DomainError(kModule, "non-finite phase point");
    // Only the discarded part of op can couple to the discarded tail of |alpha>.
    // Diagonal operators err by at most loss * tail; otherwise Cauchy-Schwarz
    // gives 2 sqrt(loss * tail) + loss * tail.
    const double tail = numerics::poisson_tail(op.dim(), alpha.norm());
    const double coupled = op.truncation_loss() * tail;
    const double bound = op.is_diagonal() ? coupled : 2.0 * std::sqrt(coupled) + coupled;
    if (bound > tol) {
        throw TruncationError(kModule, "|alpha| = " + format_real(alpha.abs()) +
                                           " lies outside the truncation-valid disc of dimension " +
                                           std::to_string(op.dim()));
    }
    return q_raw(op, alpha, op.is_diagonal());
}

double q_value(const CatalogEntry& entry, PhasePoint alpha) {
    if (entry.analytic.q) return entry.analytic.q(alpha);
    return q_value(entry.op, alpha);
}

double search_radius(const FockOperator& op) {
    auto d = op.diagonal();
    double total = 0.0;
    for (double v : d) total += std::max(v, 0.0);
    if (total <= 0.0) return 5.0;
    double cumulative = 0.0;
    int n_cut = static_cast<int>(d.size()) - 1;
    for (int n = 0; n < static_cast<int>(d.size()); ++n) {
        cumulative += std::max(d[n], 0.0) / total;
        if (cumulative >= 1.0 - 1e-8) {
            n_cut = n;
            break;
        }
    }
    return std::sqrt(static_cast<double>(n_cut)) + 5.0;
}

MaxResult maximize_line(const std::function<double(double)>& f, double lo, double hi, int grid_points) {
    grid_points = std::max(grid_points, 3);
    const double step = (hi - lo) / (grid_points - 1);
    int best = 0;
    double best_value = f(lo);
    for (int i = 1; i < grid_points; ++i) {
        double v = f(lo + i * step);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    double a = lo + std::max(best - 1, 0) * step;
    double b = lo + std::min(best + 1, grid_points - 1) * step;
    auto line = refine_line(f, a, b);
    MaxResult out;
    if (line.value >= best_value) {
        out.value = line.value;
        out.argmax = PhasePoint{line.x, 0.0};
    } else {
        out.value = best_value;
        out.argmax = PhasePoint{lo + best * step, 0.0};
    }
    out.method = MaxMethod::grid_refine;
    double h = 1e-7 * std::max(1.0, std::abs(out.argmax.re));
    double neighbour = std::max(f(std::max(lo, out.argmax.re - h)), f(std::min(hi, out.argmax.re + h)));
    out.est_error = std::abs(out.value) * 1e-12 + std::max(0.0, neighbour - out.value);
    return out;
}

MaxResult maximize_surface(const std::function<double(PhasePoint)>& f, double r_max, bool radial) {
    if (!(r_max > 0.0)) throw DomainError(kModule, "search radius must be positive");
    if (radial) {
        int points = std::max(kGridRadial, static_cast<int>(std::ceil(8.0 * r_max)));
        return maximize_line([&](double r) { return f(PhasePoint{r, 0.0}); }, 0.0, r_max, points);
    }

    // Coarse polar grid. Iteration order (radius, then angle) with a strict
    // comparison breaks ties toward the smaller radius and angle.
    PhasePoint best{};
    double best_value = f(best);
    for (int i = 1; i < kGridRadial; ++i) {
        double r = r_max * i / (kGridRadial - 1);
        for (int j = 0; j < kGridAngular; ++j) {
            PhasePoint p = PhasePoint::polar(r, 2.0 * kPi * j / kGridAngular);
            double v = f(p);
            if (v > best_value) {
                best_value = v;
                best = p;
            }
        }
    }

    double x = best.re, y = best.im, value = best_value;
    double h = r_max / (kGridRadial - 1);
    double improvement = 0.0;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const double previous = value;
        auto lx = refine_line([&](double t) { return f(PhasePoint{t, y}); }, x - h, x + h);
        double dx = 0.0;
        if (lx.value > value) {
            dx = lx.x - x;
            x = lx.x;
            value = lx.value;
        }
        auto ly = refine_line([&](double t) { return f(PhasePoint{x, t}); }, y - h, y + h);
        double dy = 0.0;
        if (ly.value > value) {
            dy = ly.x - y;
            y = ly.x;
            value = ly.value;
        }
        improvement = value - previous;
        double moved = std::max(std::abs(dx), std::abs(dy));
        bool at_edge = moved > 0.99 * h;
        if (!at_edge) h = std::max(std::min(h, 4.0 * moved), 1e-6 * std::max(1.0, r_max));
        if (improvement <= 1e-15 * std::abs(value) && moved < 1e-9 * std::max(1.0, r_max)) {
            converged = true;
            break;
        }
    }
    if (!converged && improvement > kStallTol * std::abs(value)) {
        throw ConvergenceError(kModule, "phase-space refinement stalled with relative change " +
                                            format_real(improvement / std::abs(value)));
    }
    MaxResult out;
    out.value = value;
    out.argmax = PhasePoint{x, y};
    out.method = MaxMethod::grid_refine;
    out.est_error = std::abs(value) * 1e-12 + std::max(improvement, 0.0);
    return out;
}

MaxResult q_max(const FockOperator& op) {
    const double r_max = search_radius(op);
    const bool diagonal = op.is_diagonal();
    return maximize_surface([&](PhasePoint a) { return q_raw(op, a, diagonal); }, r_max, diagonal);
}

MaxResult q_max(const CatalogEntry& entry) {
    if (entry.analytic.q_max) {
        return MaxResult{entry.analytic.q_max->value, entry.analytic.q_max->argmax, MaxMethod::closed_form, 0.0};
    }
    return q_max(entry.op);
}

double q_marginal(const FockOperator& op, double x) {
    if (!std::isfinite(x)) throw DomainError(kModule, "non-finite quadrature value");
    const int order = op.dim();
    double exact = marginal_with_rule(op, x, order);
    double check = marginal_with_rule(op, x, order + 8);
    if (std::abs(exact - check) > 1e-10 * std::max(1.0, std::abs(exact))) {
        throw QuadratureError(kModule, "marginal quadrature disagrees by " + format_real(std::abs(exact - check)));
    }
    return exact;
}

double q_marginal(const CatalogEntry& entry, double x) {
    if (entry.analytic.q_marginal) return entry.analytic.q_marginal(x);
    return q_marginal(entry.op, x);
}

MaxResult q_marginal_max(const FockOperator& op) {
    const double r_max = search_radius(op);
    const int order = op.dim();
    auto f = [&](double x) { return marginal_with_rule(op, x, order); };
    int points = std::max(kGridRadial, static_cast<int>(std::ceil(16.0 * r_max)));
    MaxResult out = maximize_line(f, -r_max, r_max, points);
    // Validate the rule once at the optimum.
    out.value = q_marginal(op, out.argmax.re);
    return out;
}

MaxResult q_marginal_max(const CatalogEntry& entry) {
    if (entry.analytic.q_marginal_max) {
        double x = 0.0;
        if (entry.analytic.gaussian_quadrature) x = entry.analytic.gaussian_quadrature->mean;
        return MaxResult{*entry.analytic.q_marginal_max, PhasePoint{x, 0.0}, MaxMethod::closed_form, 0.0};
    }
    return q_marginal_max(entry.op);
}

double p_value(const CatalogEntry& entry, PhasePoint alpha) {
    if (entry.p.tag == PTag::singular || !entry.p.closed_form) {
        throw SingularP(kModule, "P function of " + entry.label + " is singular");
    }
    return entry.p.closed_form(alpha);
}

}  // namespace phasebound
