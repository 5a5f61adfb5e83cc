#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phasebound/bounds.hpp"
#include "phasebound/catalog.hpp"
#include "phasebound/phase_space.hpp"

namespace phasebound {

struct EfficiencyModel {
    double eta = 1.0;

    /// Throws DomainError unless 0 < eta <= 1.
    explicit EfficiencyModel(double eta);
    double t() const;  // amplitude transmission sqrt(eta)
    double r() const;  // sqrt(1 - eta)
};

struct SamplingModel {
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
};

/// Pure-loss channel of transmissivity eta applied in the number basis.
FockOperator lossy_state(const FockOperator& state, double eta);

/// The two-mode convolution Q~(alpha) of a probe seen through a beam splitter
/// with a vacuum ancilla, by an exact product Gauss-Hermite rule over beta.
double lossy_q_tilde(const FockOperator& probe, double eta, PhasePoint alpha);
MaxResult lossy_q_tilde_max(const CatalogEntry& probe, double eta);

/// Ideal POVM, lossy probe: p = tr(Delta rho_t) against pi Q~_max tr Delta.
BoundReport lossy_bound_ideal_povm(const CatalogEntry& povm, const CatalogEntry& probe, double eta);
/// Effective POVM: p = tr(Delta rho_t) against pi Q_max(rho) tr Delta / eta.
BoundReport lossy_bound_effective_povm(const CatalogEntry& povm, const CatalogEntry& probe, double eta);
/// Lossy state against the state-test bound pi Q_{m,max} of the ideal element.
BoundReport lossy_state_test(const CatalogEntry& state, const CatalogEntry& povm, double eta);

enum class BoundKind { state_test, ideal_povm, effective_povm };

std::string bound_kind_name(BoundKind kind);
/// Throws ConfigError on unknown names.
BoundKind parse_bound_kind(const std::string& name);

struct EfficiencyPoint {
    double eta = 1.0;
    BoundReport report;
};

/// One report per eta; the grid must increase strictly inside (0, 1].
std::vector<EfficiencyPoint> efficiency_scan(const CatalogEntry& state, const CatalogEntry& povm,
                                             const std::vector<double>& eta_grid, BoundKind kind);

struct EfficiencyWindow {
    double eta_lo = 0.0;
    double eta_hi = 0.0;
};

/// First connected eta range on (0, 1] with a violation, endpoints resolved to
/// `resolution` by bisection. Empty when nothing on the scan grid violates.
std::optional<EfficiencyWindow> efficiency_violation_window(const CatalogEntry& state, const CatalogEntry& povm,
                                                            BoundKind kind, int grid_points = 200,
                                                            double resolution = 1e-4);

struct SamplingMoments {
    double mean = 0.0;
    double stddev = 0.0;
};

SamplingMoments sampling_moments(double p, const SamplingModel& model);

/// k/N for k ~ Binomial(N, p), from a portable seeded generator.
double simulate_counts(double p, const SamplingModel& model);

/// Independent replications, each seeded from `model.seed` and its index.
std::vector<double> simulate_replications(double p, const SamplingModel& model, int replications);

/// (p - p_b) / sqrt(p (1 - p) / N). Throws DensityUnsupported for densities.
double significance(const BoundReport& report, const SamplingModel& model);

/// Violations below this many standard deviations are flagged insignificant.
inline constexpr double kSignificanceSigma = 3.0;

}  // namespace phasebound
