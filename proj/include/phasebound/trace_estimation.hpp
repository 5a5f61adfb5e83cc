#pragma once

#include <optional>
#include <vector>

#include "phasebound/fock.hpp"

namespace phasebound {

/// Phase-averaged coherent state: Poissonian populations e^{-r^2} r^{2n} / n!.
FockOperator phase_averaged_coherent(double r, const FockSpace& space, double tol = kTolTrunc);
FockOperator phase_averaged_coherent(double r, const TruncationPolicy& policy = {});

enum class RadialRule { trapezoid, adaptive };

struct RadialProtocolConfig {
    /// Increasing radii from 0; empty selects [0, r_max] with the default r_max.
    std::vector<double> r_grid;
    RadialRule rule = RadialRule::adaptive;
};

struct RadialEstimate {
    double value = 0.0;
    double r_max = 0.0;
    double tail = 0.0;  // exact weight 2 int_{r_max}^inf r p(r) dr
};

/// tr Delta = 2 int_0^inf r p(r) dr with p(r) the outcome probability of a
/// phase-averaged coherent probe. Throws TailError when the part beyond the
/// grid exceeds 1e-6 of the estimate.
RadialEstimate trace_via_radial(const FockOperator& povm, const RadialProtocolConfig& config = {});

struct ThermalProtocolConfig {
    std::vector<double> n_tc_values{100.0, 200.0, 400.0};
    bool extrapolate = true;
};

struct ThermalRatio {
    double n_tc = 0.0;
    double probability = 0.0;  // p_m for the thermal probe
    double ratio = 0.0;        // p_m (n_tc + 1)
};

struct ThermalEstimate {
    std::vector<ThermalRatio> ratios;
    std::optional<double> extrapolated;  // polynomial extrapolation to 1/n_tc = 0
};

/// Ratios p_m / (pi Q_0) with pi Q_0 = 1/(n_tc + 1).
ThermalEstimate trace_via_thermal(const FockOperator& povm, const ThermalProtocolConfig& config = {});

}  // namespace phasebound
