#include "phasebound/scenario.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <variant>

#include "phasebound/catalog.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"
#include "phasebound/phase_space.hpp"
#include "phasebound/statistics.hpp"
#include "phasebound/su2.hpp"
#include "phasebound/trace_estimation.hpp"
#include "phasebound/two_mode.hpp"

namespace phasebound::cli {

namespace {

constexpr const char* kModule = "cli_runner";

[[noreturn]] void config_error(const std::string& field, const std::string& message) {
    throw ConfigError(kModule, field + ": " + message);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------- JSON access

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) config_error(where.empty() ? "<root>" : where, "expected an object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || item.key() == a;
        if (!known) config_error(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
    }
}

double get_number(const Json& v, const std::string& field) {
    if (!v.is_number()) config_error(field, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) config_error(field, "must be finite");
    return d;
}

std::string get_string(const Json& v, const std::string& field) {
    if (!v.is_string()) config_error(field, "expected a string");
    return v.get<std::string>();
}

bool get_bool(const Json& v, const std::string& field) {
    if (!v.is_boolean()) config_error(field, "expected true or false");
    return v.get<bool>();
}

std::uint64_t get_u64(const Json& v, const std::string& field) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    config_error(field, "expected a nonnegative integer");
}

std::vector<double> get_number_list(const Json& v, const std::string& field) {
    if (!v.is_array()) config_error(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_number(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

FamilySpec parse_family(const Json& v, const std::string& where) {
    check_keys(v, where, {"family", "params"});
    if (!v.contains("family")) config_error(where + ".family", "missing");
    FamilySpec spec;
    spec.family = get_string(v["family"], where + ".family");
    if (v.contains("params")) {
        const auto& p = v["params"];
        if (!p.is_object()) config_error(where + ".params", "expected an object");
        for (const auto& item : p.items()) {
            spec.params[item.key()] = get_number(item.value(), where + ".params." + item.key());
        }
    }
    return spec;
}

/// Strict reader of family parameters: every parameter must be consumed.
class Params {
public:
    Params(const FamilySpec& spec, std::string where) : spec_(spec), where_(std::move(where)) {}

    std::optional<double> maybe(const std::string& name) {
        used_.insert(name);
        auto it = spec_.params.find(name);
        if (it == spec_.params.end()) return std::nullopt;
        return it->second;
    }

    double real(const std::string& name) {
        auto v = maybe(name);
        if (!v) config_error(field(name), "missing parameter");
        return *v;
    }

    double real(const std::string& name, double fallback) { return maybe(name).value_or(fallback); }

    double real_in(const std::string& name, double lo, double hi, bool lo_open = false) {
        double v = real(name);
        if (v < lo || v > hi || (lo_open && v == lo)) {
            config_error(field(name), "must lie in " + std::string(lo_open ? "(" : "[") + format_number(lo) + ", " +
                                          format_number(hi) + "]");
        }
        return v;
    }

    int integer(const std::string& name, int lo, int hi) {
        double v = real(name);
        if (v != std::floor(v) || v < lo || v > hi) {
            config_error(field(name), "must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        return static_cast<int>(v);
    }

    /// A positive half-integer j, up to 32.
    double spin(const std::string& name) {
        double v = real(name);
        if (!(v >= 0.5) || v > 32.0 || 2.0 * v != std::floor(2.0 * v)) {
            config_error(field(name), "must be a positive half-integer <= 32");
        }
        return v;
    }

    void done() const {
        for (const auto& [k, v] : spec_.params) {
            if (!used_.count(k)) config_error(field(k), "unknown parameter for family '" + spec_.family + "'");
        }
    }

    std::string field(const std::string& name) const { return where_ + ".params." + name; }

private:
    const FamilySpec& spec_;
    std::string where_;
    std::set<std::string> used_;
};

// ------------------------------------------------------------ family building

enum class Domain { single_mode, two_mode, spin };

Domain state_domain(const FamilySpec& s) {
    static const std::set<std::string> two{"tmsv"};
    static const std::set<std::string> spin{"spin_basis", "spin_coherent", "spin_phase_averaged", "spin_half_random"};
    if (two.count(s.family)) return Domain::two_mode;
    if (spin.count(s.family)) return Domain::spin;
    return Domain::single_mode;
}

CatalogEntry phase_averaged_entry(double r, const TruncationPolicy& policy) {
    CatalogEntry e{phase_averaged_coherent(r, policy), Family::phase_averaged_coherent, "phase_averaged_coherent",
                   {{"r", r}}, {}, {PTag::singular, {}}, std::nullopt};
    const double u = r * r;
    e.analytic.number_probability = [u](int n) { return numerics::poisson_weight(n, u); };
    return e;
}

CatalogEntry build_state(const FamilySpec& spec, const TruncationPolicy& policy) {
    const std::string where = "state";
    Params p(spec, where);
    auto alpha = [&] { return PhasePoint{p.real("re", 0.0), p.real("im", 0.0)}; };
    std::optional<CatalogEntry> out;
    const auto& f = spec.family;
    if (f == "vacuum") {
        out = vacuum_state(policy);
    } else if (f == "number") {
        out = number_state(p.integer("n", 0, 4096), policy);
    } else if (f == "coherent") {
        out = coherent_state(alpha(), policy);
    } else if (f == "thermal") {
        out = thermal_state(p.real_in("n_tc", 0.0, 1e4), policy);
    } else if (f == "photon_added_thermal") {
        out = photon_added_thermal(p.real_in("n_tc", 0.0, 1e4), policy);
    } else if (f == "cat_even" || f == "cat_odd") {
        PhasePoint a = alpha();
        if (f == "cat_odd" && a.norm() == 0.0) config_error(where + ".params", "odd cat needs alpha != 0");
        out = cat_state(a, f == "cat_even" ? Parity::even : Parity::odd, policy);
    } else if (f == "squeezed_vacuum") {
        out = squeezed_vacuum(p.real_in("delta_x", 0.0, 1e3, true), policy);
    } else if (f == "vacuum_number_mixture") {
        double prob = p.real_in("p", 0.0, 1.0);
        out = vacuum_number_mixture(prob, p.integer("photons", 1, 4096), policy);
    } else if (f == "thermal_number_mixture") {
        double prob = p.real_in("p", 0.0, 1.0);
        double n_tc = p.real_in("n_tc", 0.0, 1e4);
        out = thermal_number_mixture(prob, n_tc, p.integer("n_0", 0, 4096), policy);
    } else if (f == "phase_averaged_coherent") {
        out = phase_averaged_entry(p.real_in("r", 0.0, 1e3), policy);
    } else {
        config_error(where + ".family", "unknown state family '" + f + "'");
    }
    p.done();
    return std::move(*out);
}

struct SingleModeMeasurement {
    std::optional<CatalogEntry> povm;          // discrete outcome
    std::optional<QuadratureEffect> quadrature;
    double theta = 0.0;
    std::optional<int> n_max;                  // number_range
    std::optional<std::pair<double, double>> x_range;  // quadrature_range
};

SingleModeMeasurement build_measurement(const FamilySpec& spec, const TruncationPolicy& policy) {
    const std::string where = "measurement";
    Params p(spec, where);
    SingleModeMeasurement m;
    const auto& f = spec.family;
    if (f == "number") {
        m.povm = povm_number(p.integer("n", 0, 4096));
    } else if (f == "coherent") {
        m.povm = povm_coherent({p.real("re", 0.0), p.real("im", 0.0)}, policy);
    } else if (f == "contaminated_one_photon") {
        double pp = p.real_in("p", 0.0, 1.0);
        double q = p.real_in("q", 0.0, 1.0);
        m.povm = contaminated_one_photon(pp, q);
    } else if (f == "quadrature") {
        m.quadrature = povm_quadrature(p.real("x"));
        m.theta = p.real("theta", 0.0);
    } else if (f == "number_range") {
        m.n_max = p.integer("n_max", 0, 4096);
    } else if (f == "quadrature_range") {
        double lo = p.real("lo"), hi = p.real("hi");
        if (!(hi > lo)) config_error(p.field("hi"), "must exceed lo");
        m.x_range = {lo, hi};
        m.theta = p.real("theta", 0.0);
    } else {
        config_error(where + ".family", "unknown measurement family '" + f + "'");
    }
    p.done();
    return m;
}

SpinOperator spin_coherent_projector(double j, SphereDirection omega, bool as_povm) {
    Vector v = su2_coherent(j, omega);
    Matrix m = v * v.adjoint();
    if (as_povm) return SpinOperator::povm_element(j, m * ((2.0 * j + 1.0) / (4.0 * M_PI)));
    return SpinOperator::state(j, m);
}

SpinOperator spin_basis_operator(double j, double m, const Params& p, const std::string& m_name, bool as_povm) {
    const int two_j = static_cast<int>(std::lround(2.0 * j));
    double idx = m + j;
    if (idx != std::floor(idx) || idx < 0 || idx > two_j) config_error(p.field(m_name), "must be one of -j, ..., j");
    Matrix mat = Matrix::Zero(two_j + 1, two_j + 1);
    mat(static_cast<int>(idx), static_cast<int>(idx)) = 1.0;
    return as_povm ? SpinOperator::povm_element(j, mat) : SpinOperator::state(j, mat);
}

SpinOperator build_spin(const FamilySpec& spec, const std::string& where, bool as_povm) {
    Params p(spec, where);
    std::optional<SpinOperator> out;
    const auto& f = spec.family;
    if (f == "spin_basis") {
        double j = p.spin("j");
        out = spin_basis_operator(j, p.real("m"), p, "m", as_povm);
    } else if (f == "spin_coherent") {
        double j = p.spin("j");
        out = spin_coherent_projector(j, {p.real_in("theta", 0.0, M_PI), p.real("phi", 0.0)}, as_povm);
    } else if (!as_povm && f == "spin_phase_averaged") {
        double j = p.spin("j");
        if (j != 1.0) config_error(p.field("j"), "only j = 1 is supported");
        out = phase_averaged_equatorial(j);
    } else {
        config_error(where + ".family", "unknown spin family '" + f + "'");
    }
    p.done();
    return std::move(*out);
}

// ------------------------------------------------------------------- reports

Json gaussian_interval_json(const ViolationInterval& iv) {
    Json j = Json::object();
    j["lo"] = iv.lo;
    j["hi"] = iv.hi;
    j["captured_probability"] = iv.captured_probability;
    return j;
}

BoundReport single_mode_report(const CatalogEntry& state, const SingleModeMeasurement& m, TestKind kind,
                               const std::optional<ImperfectionConfig>& imp) {
    if (imp && imp->eta) {
        if (!m.povm) config_error("measurement.family", "lossy bounds need a discrete POVM element");
        const double eta = *imp->eta;
        switch (imp->bound_kind) {
            case BoundKind::state_test: return lossy_state_test(state, *m.povm, eta);
            case BoundKind::ideal_povm: return lossy_bound_ideal_povm(*m.povm, state, eta);
            case BoundKind::effective_povm: return lossy_bound_effective_povm(*m.povm, state, eta);
        }
    }
    if (m.quadrature) {
        if (kind == TestKind::state_test) return state_test(state, *m.quadrature, m.theta);
        if (m.theta != 0.0) config_error("measurement.params.theta", "the measurement test uses theta = 0");
        return measurement_test(*m.quadrature, state);
    }
    if (!m.povm) config_error("measurement.family", "a single outcome is required for this command");
    return kind == TestKind::state_test ? state_test(state, *m.povm) : measurement_test(*m.povm, state);
}

std::vector<double> default_eta_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 100; ++i) g.push_back(i / 100.0);
    return g;
}

std::string with_eta(std::string label, double eta) { return label + "@eta=" + format_number(eta); }

struct Builder {
    const ScenarioConfig& config;
    TruncationPolicy policy;
    Json reports = Json::array();
    Json extras = Json::object();
    Json dims = Json::object();
    std::vector<BoundReport> list;

    void add(const BoundReport& r) {
        list.push_back(r);
        reports.push_back(report_to_json(r));
    }

    const FamilySpec& need_state() const {
        if (!config.state) config_error("state", "missing");
        return *config.state;
    }
    const FamilySpec& need_measurement() const {
        if (!config.measurement) config_error("measurement", "missing");
        return *config.measurement;
    }

    CatalogEntry single_state() {
        const auto& s = need_state();
        if (state_domain(s) != Domain::single_mode) config_error("state.family", "not a single-mode family");
        CatalogEntry e = build_state(s, policy);
        dims["state"] = e.op.dim();
        extras["state_truncation_loss"] = e.op.truncation_loss();
        return e;
    }

    SingleModeMeasurement single_measurement() {
        SingleModeMeasurement m = build_measurement(need_measurement(), policy);
        if (m.povm) dims["measurement"] = m.povm->op.dim();
        return m;
    }

    void bound() {
        CatalogEntry state = single_state();
        SingleModeMeasurement m = single_measurement();
        if (m.n_max || m.x_range) config_error("measurement.family", "ranges belong to the scan command");
        if (config.imperfection && !config.imperfection->eta) config_error("imperfection.eta", "missing");
        add(single_mode_report(state, m, config.test_kind, config.imperfection));
        if (m.quadrature && config.test_kind == TestKind::state_test && m.theta == 0.0 &&
            state.analytic.gaussian_quadrature && !config.imperfection) {
            extras["violating_interval"] =
                gaussian_interval_json(violating_interval(state, classical_quadrature_state_bound()));
        }
    }

    void scan() {
        CatalogEntry state = single_state();
        SingleModeMeasurement m = single_measurement();
        if (m.n_max) {
            bool any = false;
            for (int n = 0; n <= *m.n_max; ++n) {
                CatalogEntry povm = povm_number(n);
                BoundReport r = config.test_kind == TestKind::state_test ? state_test(state, povm)
                                                                         : measurement_test(povm, state);
                any = any || r.violated;
                add(r);
            }
            extras["any_violation"] = any;
        } else if (m.x_range) {
            double bound_value = 0.0;
            if (config.test_kind == TestKind::state_test) {
                bound_value = classical_quadrature_state_bound();
            } else {
                if (m.theta != 0.0) config_error("measurement.params.theta", "the measurement test uses theta = 0");
                bound_value = q_marginal_max(state).value;
            }
            const double theta = m.theta;
            auto density = [&](double x) { return quadrature_density(state, x, theta); };
            auto regions = scan_violating_regions(density, bound_value, m.x_range->first, m.x_range->second);
            Json arr = Json::array();
            for (const auto& iv : regions) {
                arr.push_back(gaussian_interval_json(iv));
                const double mid = 0.5 * (iv.lo + iv.hi);
                add(config.test_kind == TestKind::state_test ? state_test(state, povm_quadrature(mid), theta)
                                                             : measurement_test(povm_quadrature(mid), state));
            }
            extras["bound"] = bound_value;
            extras["violating_regions"] = arr;
        } else {
            config_error("measurement.family", "scan needs number_range or quadrature_range");
        }
    }

    void efficiency() {
        CatalogEntry state = single_state();
        SingleModeMeasurement m = single_measurement();
        if (!m.povm) config_error("measurement.family", "efficiency scans need a discrete POVM element");
        if (!config.imperfection) config_error("imperfection", "missing");
        const auto& imp = *config.imperfection;
        std::vector<double> grid = imp.eta_grid.empty() ? default_eta_grid() : imp.eta_grid;
        if (imp.eta) grid = {*imp.eta};
        for (const auto& pt : efficiency_scan(state, *m.povm, grid, imp.bound_kind)) {
            BoundReport r = pt.report;
            r.outcome_label = with_eta(r.outcome_label, pt.eta);
            add(r);
        }
        auto window = efficiency_violation_window(state, *m.povm, imp.bound_kind);
        if (window) {
            extras["window"] = Json{{"eta_lo", window->eta_lo}, {"eta_hi", window->eta_hi}};
        } else {
            extras["window"] = nullptr;
        }
    }

    void sample() {
        if (!config.sampling) config_error("sampling", "missing");
        CatalogEntry state = single_state();
        SingleModeMeasurement m = single_measurement();
        if (!m.povm) config_error("measurement.family", "sampling needs a discrete POVM element");
        if (config.imperfection && !config.imperfection->eta) config_error("imperfection.eta", "missing");
        BoundReport r = single_mode_report(state, m, config.test_kind, config.imperfection);
        add(r);
        const auto& s = *config.sampling;
        SamplingModel model{s.trials, s.seed};
        auto moments = sampling_moments(r.probability, model);
        const double z = significance(r, model);
        Json js = Json::object();
        js["trials"] = s.trials;
        js["mean"] = moments.mean;
        js["stddev"] = moments.stddev;
        js["estimate"] = simulate_counts(r.probability, model);
        js["significance_sigma"] = z;
        js["significant"] = r.violated && z >= kSignificanceSigma;
        if (s.replications > 0) {
            auto reps = simulate_replications(r.probability, model, s.replications);
            double mean = 0.0;
            for (double v : reps) mean += v;
            mean /= static_cast<double>(reps.size());
            double var = 0.0;
            for (double v : reps) var += (v - mean) * (v - mean);
            var /= reps.size() > 1 ? static_cast<double>(reps.size() - 1) : 1.0;
            js["replications"] = s.replications;
            js["replication_mean"] = mean;
            js["replication_stddev"] = std::sqrt(var);
        }
        extras["sampling"] = js;
    }

    void trace_estimate() {
        if (config.state) config_error("state", "trace estimation takes no state");
        SingleModeMeasurement m = single_measurement();
        if (!m.povm) config_error("measurement.family", "trace estimation needs a discrete POVM element");
        ProtocolConfig proto = config.protocol.value_or(ProtocolConfig{});
        extras["direct_trace"] = m.povm->op.trace();
        if (proto.radial) {
            RadialProtocolConfig rc{proto.r_grid,
                                    proto.radial_rule == "trapezoid" ? RadialRule::trapezoid : RadialRule::adaptive};
            auto est = trace_via_radial(m.povm->op, rc);
            extras["radial"] = Json{{"value", est.value}, {"r_max", est.r_max}, {"tail", est.tail}};
        }
        if (proto.thermal) {
            auto est = trace_via_thermal(m.povm->op, {proto.n_tc_values, proto.extrapolate});
            Json ratios = Json::array();
            for (const auto& r : est.ratios) {
                ratios.push_back(Json{{"n_tc", r.n_tc}, {"probability", r.probability}, {"ratio", r.ratio}});
            }
            Json th = Json::object();
            th["ratios"] = ratios;
            th["extrapolated"] = est.extrapolated ? Json(*est.extrapolated) : Json(nullptr);
            extras["thermal"] = th;
        }
    }

    void spin() {
        const auto& s = need_state();
        if (state_domain(s) != Domain::spin) config_error("state.family", "not a spin family");
        if (s.family == "spin_half_random") {
            if (config.measurement) config_error("measurement", "the randomized check draws its own POVM elements");
            Params p(s, "state");
            auto trials = static_cast<std::int64_t>(p.integer("trials", 1, 100000000));
            p.done();
            const std::uint64_t seed = config.sampling ? config.sampling->seed : 0;
            auto chk = spin_half_no_violation_check(trials, seed);
            dims["spin"] = 2;
            extras["spin_half_check"] = Json{{"trials", chk.trials},
                                             {"seed", chk.seed},
                                             {"state_violations", chk.state_violations},
                                             {"measurement_violations", chk.measurement_violations},
                                             {"max_ratio", chk.max_ratio},
                                             {"numeric_checks", chk.numeric_checks},
                                             {"max_numeric_discrepancy", chk.max_numeric_discrepancy}};
            return;
        }
        SpinOperator state = build_spin(s, "state", false);
        SpinOperator povm = build_spin(need_measurement(), "measurement", true);
        if (state.two_j() != povm.two_j()) config_error("measurement.params.j", "differs from the state's j");
        dims["spin"] = state.dim();
        add(config.test_kind == TestKind::state_test ? su2_state_test(state, povm)
                                                     : su2_measurement_test(povm, state));
        Eigen::Matrix3d z = covariance_z(state);
        Json zj = Json::array();
        for (int r = 0; r < 3; ++r) zj.push_back(Json{z(r, 0), z(r, 1), z(r, 2)});
        extras["covariance_z"] = zj;
        extras["covariance_z_min_eigenvalue"] = covariance_z_min_eigenvalue(state);
    }

    void two_mode() {
        const auto& s = need_state();
        if (state_domain(s) != Domain::two_mode) config_error("state.family", "not a two-mode family");
        if (config.test_kind != TestKind::state_test) config_error("test_kind", "two-mode tests are state tests");
        Params p(s, "state");
        auto zeta = p.maybe("zeta");
        auto zeta_sq = p.maybe("zeta_squared");
        if (zeta.has_value() == zeta_sq.has_value()) config_error("state.params", "give exactly one of zeta, zeta_squared");
        double z = zeta ? *zeta : std::sqrt(std::max(*zeta_sq, 0.0));
        if (!(z >= 0.0 && z < 1.0) || (zeta_sq && *zeta_sq < 0.0)) {
            config_error(p.field(zeta ? "zeta" : "zeta_squared"), "must lie in [0, 1)");
        }
        p.done();
        TwoModeState st = tmsv(z, policy);
        dims["mode1"] = st.space1().dim();
        dims["mode2"] = st.space2().dim();
        extras["state_truncation_loss"] = st.truncation_loss();

        const auto& ms = need_measurement();
        Params q(ms, "measurement");
        if (ms.family == "joint_number") {
            int n1 = q.integer("n1", 0, 4096), n2 = q.integer("n2", 0, 4096);
            q.done();
            add(joint_number_test(st, n1, n2));
        } else if (ms.family == "total_number") {
            int n = q.integer("n", 0, 4096);
            q.done();
            add(total_number_test(st, n));
        } else if (ms.family == "quadrature_difference") {
            double x = q.real("x");
            q.done();
            add(quadrature_difference_test(st, x));
            if (st.difference_gaussian) {
                extras["violating_interval"] = gaussian_interval_json(
                    violating_interval(*st.difference_gaussian, classical_difference_bound()));
            }
        } else {
            config_error("measurement.family", "unknown two-mode measurement '" + ms.family + "'");
        }
    }
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string command_name(Command command) {
    switch (command) {
        case Command::bound: return "bound";
        case Command::scan: return "scan";
        case Command::efficiency: return "efficiency";
        case Command::sample: return "sample";
        case Command::trace_estimate: return "trace-estimate";
        case Command::spin: return "spin";
        case Command::two_mode: return "two-mode";
    }
    return "?";
}

Command parse_command(const std::string& name) {
    for (Command c : {Command::bound, Command::scan, Command::efficiency, Command::sample, Command::trace_estimate,
                      Command::spin, Command::two_mode}) {
        if (command_name(c) == name) return c;
    }
    config_error("command", "unknown command '" + name + "'");
}

ScenarioConfig parse_config(const Json& json) {
    check_keys(json, "", {"schema_version", "command", "state", "measurement", "test_kind", "imperfection", "sampling",
                          "protocol", "output", "truncation"});
    ScenarioConfig c;
    if (!json.contains("schema_version")) config_error("schema_version", "missing");
    if (!json["schema_version"].is_number_integer() || json["schema_version"].get<std::int64_t>() != kSchemaVersion) {
        config_error("schema_version", "unsupported (expected " + std::to_string(kSchemaVersion) + ")");
    }
    if (json.contains("command")) c.command = parse_command(get_string(json["command"], "command"));
    if (json.contains("state")) c.state = parse_family(json["state"], "state");
    if (json.contains("measurement")) c.measurement = parse_family(json["measurement"], "measurement");
    if (json.contains("test_kind")) {
        auto k = get_string(json["test_kind"], "test_kind");
        if (k == "state_test") {
            c.test_kind = TestKind::state_test;
        } else if (k == "measurement_test") {
            c.test_kind = TestKind::measurement_test;
        } else {
            config_error("test_kind", "expected state_test or measurement_test");
        }
    }
    if (json.contains("imperfection")) {
        const auto& v = json["imperfection"];
        check_keys(v, "imperfection", {"eta", "bound_kind", "eta_grid"});
        ImperfectionConfig imp;
        if (v.contains("eta")) {
            double eta = get_number(v["eta"], "imperfection.eta");
            if (!(eta > 0.0 && eta <= 1.0)) config_error("imperfection.eta", "must lie in (0, 1]");
            imp.eta = eta;
        }
        if (v.contains("bound_kind")) {
            try {
                imp.bound_kind = parse_bound_kind(get_string(v["bound_kind"], "imperfection.bound_kind"));
            } catch (const ConfigError&) {
                config_error("imperfection.bound_kind", "expected state_test, ideal_povm or effective_povm");
            }
        }
        if (v.contains("eta_grid")) {
            imp.eta_grid = get_number_list(v["eta_grid"], "imperfection.eta_grid");
            for (std::size_t i = 0; i < imp.eta_grid.size(); ++i) {
                double e = imp.eta_grid[i];
                if (!(e > 0.0 && e <= 1.0) || (i > 0 && !(e > imp.eta_grid[i - 1]))) {
                    config_error("imperfection.eta_grid", "must increase strictly inside (0, 1]");
                }
            }
        }
        c.imperfection = imp;
    }
    if (json.contains("sampling")) {
        const auto& v = json["sampling"];
        check_keys(v, "sampling", {"trials", "seed", "replications"});
        SamplingConfig s;
        if (!v.contains("trials")) config_error("sampling.trials", "missing");
        std::uint64_t trials = get_u64(v["trials"], "sampling.trials");
        if (trials < 1 || trials > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            config_error("sampling.trials", "must be >= 1");
        }
        s.trials = static_cast<std::int64_t>(trials);
        if (v.contains("seed")) s.seed = get_u64(v["seed"], "sampling.seed");
        if (v.contains("replications")) {
            std::uint64_t r = get_u64(v["replications"], "sampling.replications");
            if (r > 10000000) config_error("sampling.replications", "must be <= 10000000");
            s.replications = static_cast<int>(r);
        }
        c.sampling = s;
    }
    if (json.contains("protocol")) {
        const auto& v = json["protocol"];
        check_keys(v, "protocol", {"radial", "thermal"});
        ProtocolConfig p;
        p.radial = v.contains("radial");
        p.thermal = v.contains("thermal");
        if (p.radial) {
            const auto& r = v["radial"];
            check_keys(r, "protocol.radial", {"r_grid", "rule"});
            if (r.contains("r_grid")) p.r_grid = get_number_list(r["r_grid"], "protocol.radial.r_grid");
            if (r.contains("rule")) {
                p.radial_rule = get_string(r["rule"], "protocol.radial.rule");
                if (p.radial_rule != "adaptive" && p.radial_rule != "trapezoid") {
                    config_error("protocol.radial.rule", "expected adaptive or trapezoid");
                }
            }
        }
        if (p.thermal) {
            const auto& t = v["thermal"];
            check_keys(t, "protocol.thermal", {"n_tc_values", "extrapolate"});
            if (t.contains("n_tc_values")) {
                p.n_tc_values = get_number_list(t["n_tc_values"], "protocol.thermal.n_tc_values");
            }
            if (t.contains("extrapolate")) p.extrapolate = get_bool(t["extrapolate"], "protocol.thermal.extrapolate");
        }
        c.protocol = p;
    }
    if (json.contains("output")) {
        const auto& v = json["output"];
        check_keys(v, "output", {"format", "path"});
        if (v.contains("format")) {
            c.format = get_string(v["format"], "output.format");
            if (c.format != "json" && c.format != "csv") config_error("output.format", "expected json or csv");
        }
        if (v.contains("path")) c.path = get_string(v["path"], "output.path");
    }
    if (json.contains("truncation")) {
        const auto& v = json["truncation"];
        check_keys(v, "truncation", {"dim"});
        if (v.contains("dim")) {
            std::uint64_t d = get_u64(v["dim"], "truncation.dim");
            if (d < 2 || d > 4096) config_error("truncation.dim", "must lie in [2, 4096]");
            c.dim = static_cast<int>(d);
        }
    }
    c.echo = json;
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) config_error("--config", "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Json json;
    try {
        json = Json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        config_error("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(json);
}

void apply_overrides(ScenarioConfig& config, std::optional<std::uint64_t> seed, std::optional<int> dim) {
    if (seed) {
        if (!config.sampling) {
            config.sampling = SamplingConfig{};
            config.echo["sampling"] = Json{{"trials", 1}};
        }
        config.sampling->seed = *seed;
        config.echo["sampling"]["seed"] = *seed;
    }
    if (dim) {
        if (*dim < 2 || *dim > 4096) config_error("--dim", "must lie in [2, 4096]");
        config.dim = *dim;
        config.echo["truncation"] = Json{{"dim", *dim}};
    }
}

ReportDocument run_scenario(const ScenarioConfig& config, Command command) {
    if (config.command && *config.command != command) {
        config_error("command", "config is for '" + command_name(*config.command) + "', not '" +
                                    command_name(command) + "'");
    }
    Builder b{config, TruncationPolicy{config.dim, kTolTrunc}, Json::array(), Json::object(), Json::object(), {}};
    switch (command) {
        case Command::bound: b.bound(); break;
        case Command::scan: b.scan(); break;
        case Command::efficiency: b.efficiency(); break;
        case Command::sample: b.sample(); break;
        case Command::trace_estimate: b.trace_estimate(); break;
        case Command::spin: b.spin(); break;
        case Command::two_mode: b.two_mode(); break;
    }

    ReportDocument doc;
    doc.reports = b.list;
    Json& j = doc.json;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command_name(command);
    j["scenario"] = config.echo;
    j["reports"] = b.reports;
    j["extras"] = b.extras;
    Json env = Json::object();
    env["dims"] = b.dims;
    env["tol_trunc"] = kTolTrunc;
    env["violation_tol"] = kViolationTol;
    env["seed"] = config.sampling ? config.sampling->seed : 0;
    j["environment"] = env;
    j = round_numbers(j);
    return doc;
}

Json report_to_json(const BoundReport& r) {
    Json j = Json::object();
    j["outcome"] = r.outcome_label;
    j["test_kind"] = test_kind_name(r.test_kind);
    j["probability"] = r.probability;
    j["bound"] = r.bound;
    j["violated"] = r.violated;
    j["violation_pct"] = r.violation_pct;
    j["density"] = r.density;
    j["probability_provenance"] = provenance_name(r.probability_provenance);
    j["bound_provenance"] = provenance_name(r.bound_provenance);
    return j;
}

double round_significant(double value) {
    if (!std::isfinite(value)) return value;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return std::strtod(buf, nullptr);
}

Json round_numbers(const Json& json) {
    if (json.is_number_float()) {
        double v = json.get<double>();
        if (!std::isfinite(v)) return format_number(v);
        return round_significant(v);
    }
    if (json.is_array()) {
        Json out = Json::array();
        for (const auto& item : json) out.push_back(round_numbers(item));
        return out;
    }
    if (json.is_object()) {
        Json out = Json::object();
        for (const auto& item : json.items()) out[item.key()] = round_numbers(item.value());
        return out;
    }
    return json;
}

std::string serialize(const Json& json) { return round_numbers(json).dump(2) + "\n"; }

std::string ReportDocument::to_json() const { return serialize(json); }

std::string ReportDocument::to_csv() const {
    std::ostringstream out;
    out << "outcome,test_kind,probability,bound,violated,violation_pct,density\n";
    for (const auto& r : reports) {
        out << csv_field(r.outcome_label) << ',' << test_kind_name(r.test_kind) << ','
            << format_number(r.probability) << ',' << format_number(r.bound) << ',' << (r.violated ? "true" : "false")
            << ',' << format_number(r.violation_pct) << ',' << (r.density ? "true" : "false") << '\n';
    }
    return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(kModule, "cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw IoError(kModule, "write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError(kModule, "cannot move output into place at '" + path + "'");
    }
}

}  // namespace phasebound::cli
