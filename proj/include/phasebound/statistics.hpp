#pragma once

#include <vector>

#include "phasebound/catalog.hpp"
#include "phasebound/fock.hpp"

namespace phasebound {

struct NumberDistribution {
    std::vector<double> probabilities;
    double truncation_loss = 0.0;

    /// p_n, zero beyond the truncation.
    double at(int n) const;
    double mean() const;
};

struct MandelReport {
    double mean = 0.0;
    double variance = 0.0;
    double q_mandel = 0.0;
};

struct VarianceMinimum {
    double theta = 0.0;
    double value = 0.0;
};

struct SqueezingPercentage {
    double raw = 0.0;      // 100 (1 - 2 Delta X_min), negative without squeezing
    double clipped = 0.0;  // max(raw, 0)
};

NumberDistribution number_statistics(const FockOperator& state);

/// rho -> e^{i theta n} rho e^{-i theta n}, i.e. rho_mn e^{i theta (m - n)}.
FockOperator rotate_phase(const FockOperator& state, double theta);

/// Density of X_theta at x from the matrix elements.
double quadrature_density(const FockOperator& state, double x, double theta = 0.0);
/// Uses the entry's closed form when one exists for this angle.
double quadrature_density(const CatalogEntry& entry, double x, double theta = 0.0);

/// Throws DegenerateState when <n> = 0.
MandelReport mandel_q(const FockOperator& state);

double quadrature_variance(const FockOperator& state, double theta);
VarianceMinimum min_variance_over_theta(const FockOperator& state);
SqueezingPercentage squeezing(const FockOperator& state);
/// Clipped percentage 100 (1 - 2 Delta X_min), 0 for unsqueezed states.
double squeezing_percentage(const FockOperator& state);

}  // namespace phasebound
