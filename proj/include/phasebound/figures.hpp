#pragma once

#include <string>
#include <vector>

namespace phasebound {

/// Rows of a figure table, in column order.
struct FigureTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_csv() const;
};

/// Number bound p_{b,n} for n = 0..50.
FigureTable figure1();
/// Even cat with imaginary alpha: quadrature state-test violation at x = 0 and
/// squeezing percentage, |alpha| = 0..4 in steps of 0.05.
FigureTable figure2();
/// One-photon probability of a lossy photon-added thermal state (n_tc = 0.7)
/// and the 1/e bound, eta = 0.01..1 in steps of 0.01.
FigureTable figure3();

/// Throws ConfigError for names other than fig1, fig2 and fig3.
FigureTable figure_table(const std::string& name);
/// Writes the CSV atomically. Throws IoError.
void emit_figure(const std::string& name, const std::string& path);

}  // namespace phasebound
