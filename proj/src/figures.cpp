#include "phasebound/figures.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "phasebound/bounds.hpp"
#include "phasebound/catalog.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/robustness.hpp"
#include "phasebound/scenario.hpp"
#include "phasebound/statistics.hpp"

namespace phasebound {

namespace {
constexpr int kFig2Dim = 80;
}

std::string FigureTable::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    char buf[64];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.12g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
    return out.str();
}

FigureTable figure1() {
    FigureTable t{{"n", "p_b"}, {}};
    for (int n = 0; n <= 50; ++n) t.rows.push_back({static_cast<double>(n), classical_number_bound(n)});
    return t;
}

FigureTable figure2() {
    FigureTable t{{"abs_alpha", "violation_pct", "squeezing_pct"}, {}};
    const double bound = classical_quadrature_state_bound();
    for (int i = 0; i <= 80; ++i) {
        const double a = 0.05 * i;
        // Imaginary alpha puts the interference fringes on the X axis. The
        // density check at the top level needs more room than the trace
        // budget alone, so the dimension is fixed well past |alpha|^2 = 16.
        CatalogEntry cat = cat_state({0.0, a}, Parity::even, {kFig2Dim});
        const double p0 = quadrature_density(cat.op, 0.0, 0.0);
        t.rows.push_back({a, 100.0 * (p0 - bound) / bound, squeezing_percentage(cat.op)});
    }
    return t;
}

FigureTable figure3() {
    FigureTable t{{"eta", "p_t1", "bound"}, {}};
    const CatalogEntry state = photon_added_thermal(0.7);
    const double line = classical_number_bound(1);
    for (int i = 1; i <= 100; ++i) {
        const double eta = i / 100.0;
        FockOperator lossy = lossy_state(state.op, eta);
        t.rows.push_back({eta, lossy.matrix()(1, 1).real(), line});
    }
    return t;
}

FigureTable figure_table(const std::string& name) {
    if (name == "fig1") return figure1();
    if (name == "fig2") return figure2();
    if (name == "fig3") return figure3();
    throw ConfigError("cli_runner", "figure: unknown name '" + name + "' (expected fig1, fig2 or fig3)");
}

void emit_figure(const std::string& name, const std::string& path) {
    cli::write_atomic(path, figure_table(name).to_csv());
}

}  // namespace phasebound
