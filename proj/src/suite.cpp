#include "phasebound/suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "phasebound/bounds.hpp"
#include "phasebound/catalog.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/figures.hpp"
#include "phasebound/numerics.hpp"
#include "phasebound/phase_space.hpp"
#include "phasebound/robustness.hpp"
#include "phasebound/statistics.hpp"
#include "phasebound/su2.hpp"
#include "phasebound/trace_estimation.hpp"
#include "phasebound/two_mode.hpp"

namespace phasebound {

namespace {

const std::vector<std::string> kConstants = {
    "number_bound",          // p_{b,n}
    "measurement_bound",     // pi Q_max tr Delta
    "quadrature_state_bound",
    "quadrature_measurement_bound",
    "difference_bound",
    "su2_bound",
    "lossy_ideal_bound",
    "lossy_effective_bound",
    "thermal_reference",     // pi Q_0 = 1/(n_tc + 1)
};

class Runner {
public:
    explicit Runner(const SuiteOptions& options) : options_(options) {}

    double k(const std::string& name) const {
        return options_.perturb_constant && *options_.perturb_constant == name ? options_.perturb_factor : 1.0;
    }

    bool violates(double p, double bound) const { return p > bound * (1.0 + kViolationTol); }

    void check(const std::string& name, std::vector<std::string> constants, double expected, double tolerance,
               const std::function<double()>& actual) {
        SuiteCheck c{name, std::move(constants), expected, 0.0, tolerance, false, ""};
        try {
            c.actual = actual();
            c.pass = std::abs(c.actual - expected) <= tolerance;
        } catch (const std::exception& e) {
            c.actual = std::nan("");
            c.note = e.what();
        }
        checks.push_back(std::move(c));
    }

    std::vector<SuiteCheck> checks;

private:
    SuiteOptions options_;
};

double pct(double p, double bound) { return 100.0 * (p - bound) / bound; }

double root(const std::function<double(double)>& f, double lo, double hi) {
    return numerics::bisect_root(f, lo, hi, 1e-8);
}

void one_photon(Runner& r) {
    r.check("one-photon measurement test violation pct", {"measurement_bound"}, 171.828182846, 0.01, [&] {
        auto rep = measurement_test(povm_number(1), number_state(1));
        return pct(rep.probability, rep.bound * r.k("measurement_bound"));
    });
}

void vacuum_quadrature(Runner& r) {
    const CatalogEntry vac = vacuum_state();
    r.check("vacuum p(0)", {}, 0.797884560803, 1e-5, [&] { return quadrature_density(vac.op, 0.0, 0.0); });
    r.check("vacuum marginal Q bound", {"quadrature_measurement_bound"}, 0.564189583548, 1e-5,
            [&] { return measurement_test(povm_quadrature(0.0), vac).bound * r.k("quadrature_measurement_bound"); });
    r.check("vacuum violation pct", {"quadrature_measurement_bound"}, 41.4213562373, 0.01, [&] {
        auto rep = measurement_test(povm_quadrature(0.0), vac);
        return pct(rep.probability, rep.bound * r.k("quadrature_measurement_bound"));
    });
    auto interval = [&] {
        return violating_interval(vac, q_marginal_max(vac).value * r.k("quadrature_measurement_bound"));
    };
    r.check("vacuum violating x*", {"quadrature_measurement_bound"}, 0.416277305579, 1e-3,
            [&] { return interval().hi; });
    r.check("vacuum captured probability", {"quadrature_measurement_bound"}, 0.594904033567, 5e-3,
            [&] { return interval().captured_probability; });
}

void squeezed(Runner& r) {
    const CatalogEntry sq = squeezed_vacuum(0.1);
    auto rep = [&] { return measurement_test(povm_quadrature(0.0), sq); };
    r.check("squeezed p(0)", {}, 3.98942280401, 1e-3, [&] { return quadrature_density(sq, 0.0, 0.0); });
    r.check("squeezed marginal Q bound", {"quadrature_measurement_bound"}, 0.782390181755, 1e-3,
            [&] { return rep().bound * r.k("quadrature_measurement_bound"); });
    r.check("squeezed violation pct", {"quadrature_measurement_bound"}, 409.901951359, 0.5, [&] {
        auto x = rep();
        return pct(x.probability, x.bound * r.k("quadrature_measurement_bound"));
    });
    auto interval = [&] {
        return violating_interval(sq, q_marginal_max(sq).value * r.k("quadrature_measurement_bound"));
    };
    r.check("squeezed violating x*", {"quadrature_measurement_bound"}, 0.180501981652, 2e-3,
            [&] { return interval().hi; });
    r.check("squeezed captured probability", {"quadrature_measurement_bound"}, 0.928928418872, 1e-2,
            [&] { return interval().captured_probability; });
}

void number_bound_table(Runner& r) {
    r.check("p_b,1", {"number_bound"}, 0.367879441171, 1e-10,
            [&] { return classical_number_bound(1) * r.k("number_bound"); });
    r.check("p_b,2", {"number_bound"}, 0.270670566473, 1e-10,
            [&] { return classical_number_bound(2) * r.k("number_bound"); });
    r.check("p_b,50 Stirling ratio", {"number_bound"}, 0.998334743634, 1e-6, [&] {
        return classical_number_bound(50) * r.k("number_bound") * std::sqrt(2.0 * M_PI * 50.0);
    });
    r.check("fig1 row n=1", {}, 0.367879441171, 1e-10, [] { return figure1().rows[1][1]; });
}

void thermal_mixture(Runner& r) {
    const CatalogEntry mix = thermal_number_mixture(0.5, 9.0, 1);
    r.check("mixture p_1", {}, 0.545, 1e-6, [&] { return number_statistics(mix.op).at(1); });
    r.check("mixture violation pct", {"number_bound"}, 48.1463596510, 1e-3, [&] {
        auto rep = state_test(mix, povm_number(1));
        return pct(rep.probability, classical_number_bound(1) * r.k("number_bound"));
    });
    r.check("mixture Mandel Q", {}, 11.2, 0.01, [&] { return mandel_q(mix.op).q_mandel; });
    r.check("mixture largest variance deviation over 8 angles", {}, 0.0, 1e-6, [&] {
        double worst = 0.0;
        for (int i = 0; i < 8; ++i) worst = std::max(worst, std::abs(quadrature_variance(mix.op, i * M_PI / 8.0) - 2.75));
        return worst;
    });
}

void photon_added(Runner& r) {
    auto excess = [&](int n) {
        return [&r, n](double n_tc) {
            const double p = number_statistics(photon_added_thermal(n_tc).op).at(n);
            return p - classical_number_bound(n) * r.k("number_bound");
        };
    };
    r.check("photon-added n=1 threshold", {"number_bound"}, 0.648721270700, 0.01,
            [&] { return root(excess(1), 0.05, 2.0); });
    r.check("photon-added n=2 window low", {"number_bound"}, 0.291615867467, 0.01,
            [&] { return root(excess(2), 0.05, 0.5); });
    r.check("photon-added n=2 window high", {"number_bound"}, 0.831661024117, 0.01,
            [&] { return root(excess(2), 0.5, 3.0); });
    auto mandel_zero = [] {
        return root([](double n_tc) { return mandel_q(photon_added_thermal(n_tc).op).q_mandel; }, 0.2, 2.0);
    };
    r.check("photon-added Mandel Q sign change", {}, 0.707106781187, 1e-4, mandel_zero);
    r.check("super-Poissonian violating window width", {"number_bound"}, 0.124554242930, 0.01,
            [&] { return root(excess(2), 0.5, 3.0) - mandel_zero(); });
}

void even_cat(Runner& r) {
    r.check("fig2 worst deviation from 100 tanh|alpha|^2", {"quadrature_state_bound"}, 0.0, 1e-6, [&] {
        const double b = classical_quadrature_state_bound() * r.k("quadrature_state_bound");
        double worst = 0.0;
        for (int i = 0; i <= 80; ++i) {
            const double a = 0.05 * i;
            const double p0 = quadrature_density(cat_state({0.0, a}, Parity::even, {80}).op, 0.0, 0.0);
            worst = std::max(worst, std::abs(pct(p0, b) - 100.0 * std::tanh(a * a)));
        }
        return worst;
    });
    const CatalogEntry cat3 = cat_state({3.0, 0.0}, Parity::even);
    r.check("even cat |alpha|=3 minimum variance", {}, 0.24999986, 1e-8,
            [&] { return min_variance_over_theta(cat3.op).value; });
    r.check("even cat |alpha|=3 squeezing pct", {}, 2.75e-5, 0.05e-5, [&] { return squeezing_percentage(cat3.op); });
    r.check("even cat p_16 / p_b,16 at |alpha|^2 = 16", {"number_bound"}, 2.0, 0.02, [&] {
        const double p = number_statistics(cat_state({4.0, 0.0}, Parity::even).op).at(16);
        return p / (classical_number_bound(16) * r.k("number_bound"));
    });
    r.check("even cat number-bound threshold |alpha|", {"number_bound"}, 0.933874554348, 1e-4, [&] {
        auto excess = [&](double a) {
            const auto dist = number_statistics(cat_state({a, 0.0}, Parity::even).op);
            double worst = -1.0;
            for (int n = 2; n < 40; n += 2) {
                worst = std::max(worst, dist.at(n) - classical_number_bound(n) * r.k("number_bound"));
            }
            return worst;
        };
        // Brute-force scan for the first violating amplitude, then bisection.
        double prev = 0.05;
        for (double a = 0.1; a <= 3.0; a += 0.05) {
            if (excess(a) > 0.0) return root(excess, prev, a);
            prev = a;
        }
        throw NumericalError("suite", "no violating amplitude below 3");
    });
}

void inefficiency(Runner& r) {
    r.check("lossy one-photon closed form vs loss channel", {}, 0.0, 1e-8, [] {
        double worst = 0.0;
        for (double n_tc : {0.1, 0.5, 0.7, 1.0, 2.0, 5.0}) {
            const CatalogEntry st = photon_added_thermal(n_tc);
            for (int i = 1; i <= 10; ++i) {
                const double eta = i / 10.0;
                const double closed = eta * (1.0 + 2.0 * n_tc - eta * n_tc) / std::pow(1.0 + eta * n_tc, 3);
                worst = std::max(worst, std::abs(lossy_state(st.op, eta).matrix()(1, 1).real() - closed));
            }
        }
        return worst;
    });
    const CatalogEntry pat = photon_added_thermal(0.7);
    auto fig3_excess = [&](double eta) {
        return lossy_state(pat.op, eta).matrix()(1, 1).real() - classical_number_bound(1) * r.k("number_bound");
    };
    r.check("fig3 window low", {"number_bound"}, 0.293841783909, 0.01, [&] { return root(fig3_excess, 0.05, 0.6); });
    r.check("fig3 window high", {"number_bound"}, 0.899788668484, 0.01, [&] { return root(fig3_excess, 0.6, 1.0); });

    const CatalogEntry one = number_state(1);
    const CatalogEntry det = povm_number(1);
    r.check("ideal-POVM efficiency threshold", {"lossy_ideal_bound"}, 0.5, 1e-3, [&] {
        return root(
            [&](double eta) {
                auto rep = lossy_bound_ideal_povm(det, one, eta);
                return rep.probability - rep.bound * r.k("lossy_ideal_bound");
            },
            0.3, 0.9);
    });
    r.check("effective-POVM efficiency threshold", {"lossy_effective_bound"}, 0.606530659713, 1e-3, [&] {
        return root(
            [&](double eta) {
                auto rep = lossy_bound_effective_povm(det, one, eta);
                return rep.probability - rep.bound * r.k("lossy_effective_bound");
            },
            0.3, 0.9);
    });
}

void sampling(Runner& r) {
    const SamplingModel model{100, 12345};
    r.check("sampling stddev p=0.5 N=100", {}, 0.05, 1e-15, [&] { return sampling_moments(0.5, model).stddev; });
    r.check("replication mean within 4 standard errors", {}, 0.0, 4.0, [&] {
        auto reps = simulate_replications(0.5, model, 10000);
        double mean = 0.0;
        for (double v : reps) mean += v;
        mean /= static_cast<double>(reps.size());
        return (mean - 0.5) / (0.05 / std::sqrt(static_cast<double>(reps.size())));
    });
}

void two_mode(Runner& r) {
    auto excess = [&](double z) {
        auto rep = joint_number_test(tmsv(z), 1, 1);
        return rep.probability - rep.bound * r.k("number_bound") * r.k("number_bound");
    };
    r.check("tmsv p_11 window low", {"number_bound"}, 0.401719068319, 0.005, [&] { return root(excess, 0.2, 0.7); });
    r.check("tmsv p_11 window high", {"number_bound"}, 0.915762955217, 0.005, [&] { return root(excess, 0.7, 0.99); });
    const TwoModeState half = tmsv(std::sqrt(0.5));
    r.check("tmsv p_11 at zeta^2 = 1/2", {}, 0.25, 1e-9, [&] { return half.joint_probability(1, 1); });
    r.check("tmsv p_11 violation pct", {"number_bound"}, 84.7264024733, 0.5, [&] {
        const double b = classical_number_bound(1) * r.k("number_bound");
        return pct(half.joint_probability(1, 1), b * b);
    });
    r.check("total-number violations over zeta grid", {"number_bound"}, 0.0, 0.0, [&] {
        int count = 0;
        for (int i = 1; i <= 19; ++i) {
            const TwoModeState st = tmsv(0.05 * i);
            const int top = std::min(20, st.space1().dim() + st.space2().dim() - 2);
            for (int n = 0; n <= top; ++n) {
                auto rep = total_number_test(st, n);
                if (r.violates(rep.probability, rep.bound * r.k("number_bound"))) ++count;
            }
        }
        return static_cast<double>(count);
    });
    r.check("difference p(0)", {}, 1.36207414435, 2e-3, [&] { return quadrature_difference_density(half, 0.0); });
    r.check("difference violation pct", {"difference_bound"}, 141.421356237, 1.0, [&] {
        auto rep = quadrature_difference_test(half, 0.0);
        return pct(rep.probability, rep.bound * r.k("difference_bound"));
    });
    auto interval = [&] {
        return violating_interval(*half.difference_gaussian, classical_difference_bound() * r.k("difference_bound"));
    };
    r.check("difference violating x*", {"difference_bound"}, 0.388869901764, 5e-3, [&] { return interval().hi; });
    r.check("difference captured probability", {"difference_bound"}, 0.815717773572, 1e-2,
            [&] { return interval().captured_probability; });
}

void spin(Runner& r) {
    Matrix basis0 = Matrix::Zero(3, 3);
    basis0(1, 1) = 1.0;
    const SpinOperator state = SpinOperator::state(1.0, basis0);
    const SpinOperator povm = SpinOperator::povm_element(1.0, basis0);
    r.check("spin-1 self test bound", {"su2_bound"}, 0.5, 1e-9,
            [&] { return su2_state_test(state, povm).bound * r.k("su2_bound"); });
    r.check("spin-1 self test violation pct", {"su2_bound"}, 100.0, 1e-6, [&] {
        auto rep = su2_state_test(state, povm);
        return pct(rep.probability, rep.bound * r.k("su2_bound"));
    });
    r.check("Z(|1,0>) deviation from diag(1, 1, -1)", {}, 0.0, 1e-12, [&] {
        Eigen::Matrix3d z = covariance_z(state);
        Eigen::Matrix3d target = Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal();
        return (z - target).cwiseAbs().maxCoeff();
    });
    r.check("phase-averaged probe bound", {"su2_bound"}, 0.375, 1e-6, [&] {
        return su2_measurement_test(povm, phase_averaged_equatorial(1.0)).bound * r.k("su2_bound");
    });
    r.check("phase-averaged probe violation pct", {"su2_bound"}, 100.0 / 3.0, 1e-3, [&] {
        auto rep = su2_measurement_test(povm, phase_averaged_equatorial(1.0));
        return pct(rep.probability, rep.bound * r.k("su2_bound"));
    });
    r.check("spin-1/2 random violations in 1e5 trials", {}, 0.0, 0.0, [] {
        auto chk = spin_half_no_violation_check(100000, 2024);
        return static_cast<double>(chk.state_violations + chk.measurement_violations);
    });
}

void trace_protocols(Runner& r) {
    const CatalogEntry det = contaminated_one_photon(1.0, 0.1);
    r.check("radial protocol trace", {}, 1.2, 1e-3, [&] { return trace_via_radial(det.op).value; });
    r.check("thermal protocol ratio at n_tc = 100", {"thermal_reference"}, 1.18812861484, 1e-3, [&] {
        auto est = trace_via_thermal(det.op, {{100.0}, false});
        return est.ratios[0].probability / (r.k("thermal_reference") / 101.0);
    });
    r.check("worst relative protocol error over finite-trace POVMs", {}, 0.0, 5e-3, [] {
        std::vector<CatalogEntry> povms;
        for (int n = 0; n < 5; ++n) povms.push_back(povm_number(n));
        povms.push_back(povm_coherent({0.7, -0.4}));
        povms.push_back(contaminated_one_photon(1.0, 0.1));
        povms.push_back(contaminated_one_photon(0.6, 0.3));
        double worst = 0.0;
        for (const auto& p : povms) {
            const double direct = p.op.trace();
            const double radial = trace_via_radial(p.op).value;
            const double thermal = *trace_via_thermal(p.op).extrapolated;
            worst = std::max({worst, std::abs(radial - direct) / direct, std::abs(thermal - direct) / direct});
        }
        return worst;
    });
}

void properties(Runner& r) {
    r.check("coherent probe measurement-test violations (200 pairs)", {"measurement_bound"}, 0.0, 0.0, [&] {
        std::mt19937_64 gen(7);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        int count = 0;
        for (int i = 0; i < 200; ++i) {
            const CatalogEntry probe = coherent_state({u(gen), u(gen)});
            CatalogEntry povm = povm_number(i % 6);
            if (i % 3 == 1) povm = povm_coherent({u(gen), u(gen)});
            if (i % 3 == 2) povm = contaminated_one_photon(0.5 + 0.1 * (i % 5), 0.1);
            auto rep = measurement_test(povm, probe);
            if (r.violates(rep.probability, rep.bound * r.k("measurement_bound"))) ++count;
        }
        return static_cast<double>(count);
    });
    r.check("coherent state number-test violations", {"number_bound"}, 0.0, 0.0, [&] {
        int count = 0;
        for (double a : {0.0, 0.3, 1.0, 1.7, 2.5}) {
            const CatalogEntry st = coherent_state(PhasePoint::polar(a, 0.3 * a));
            for (int n = 0; n <= 12; ++n) {
                auto rep = state_test(st, povm_number(n));
                if (r.violates(rep.probability, classical_number_bound(n) * r.k("number_bound"))) ++count;
            }
        }
        return static_cast<double>(count);
    });
    r.check("thermal state number-test violations", {"number_bound"}, 0.0, 0.0, [&] {
        int count = 0;
        for (double n_tc : {0.0, 0.2, 1.0, 4.0}) {
            const CatalogEntry st = thermal_state(n_tc);
            for (int n = 0; n <= 12; ++n) {
                auto rep = state_test(st, povm_number(n));
                if (r.violates(rep.probability, classical_number_bound(n) * r.k("number_bound"))) ++count;
            }
        }
        return static_cast<double>(count);
    });
}

}  // namespace

bool SuiteResult::ok() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

std::vector<std::string> SuiteResult::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
        if (!c.pass) out.push_back(c.name);
    }
    return out;
}

std::vector<std::string> bound_constant_names() { return kConstants; }

SuiteResult paper_suite(const SuiteOptions& options) {
    if (options.perturb_constant) {
        bool known = false;
        for (const auto& n : kConstants) known = known || n == *options.perturb_constant;
        if (!known) throw ConfigError("cli_runner", "--perturb: unknown bound constant '" + *options.perturb_constant + "'");
    }
    const auto start = std::chrono::steady_clock::now();
    Runner r(options);
    one_photon(r);
    vacuum_quadrature(r);
    squeezed(r);
    number_bound_table(r);
    thermal_mixture(r);
    photon_added(r);
    even_cat(r);
    inefficiency(r);
    sampling(r);
    two_mode(r);
    spin(r);
    trace_protocols(r);
    properties(r);
    SuiteResult result;
    result.checks = std::move(r.checks);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::string format_suite_table(const SuiteResult& result) {
    std::ostringstream out;
    char line[512];
    std::snprintf(line, sizeof line, "%-58s %18s %18s %10s  %s\n", "check", "expected", "actual", "tol", "status");
    out << line;
    for (const auto& c : result.checks) {
        std::snprintf(line, sizeof line, "%-58s %18.10g %18.10g %10.3g  %s\n", c.name.c_str(), c.expected, c.actual,
                      c.tolerance, c.pass ? "ok" : "MISMATCH");
        out << line;
        if (!c.note.empty()) out << "    error: " << c.note << '\n';
    }
    std::snprintf(line, sizeof line, "%zu checks, %zu mismatches, %.2f s\n", result.checks.size(),
                  result.failures().size(), result.seconds);
    out << line;
    return out.str();
}

}  // namespace phasebound
