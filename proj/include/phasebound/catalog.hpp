#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phasebound/fock.hpp"

namespace phasebound {

enum class Family {
    vacuum,
    number,
    coherent,
    thermal,
    photon_added_thermal,
    cat_even,
    cat_odd,
    squeezed_vacuum,
    mixture,
    vacuum_number_mixture,
    thermal_number_mixture,
    phase_averaged_coherent,
    povm_number,
    povm_projector,
    povm_coherent,
    contaminated_one_photon,
};

std::string family_name(Family family);

/// Regularity of the Glauber-Sudarshan P function. Singular covers every
/// delta-like or distributional P, including the coherent states themselves.
enum class PTag { regular_nonnegative, regular_negative, singular };

std::string p_tag_name(PTag tag);

struct PClassification {
    PTag tag = PTag::singular;
    std::function<double(PhasePoint)> closed_form;  // present iff tag is regular_*
};

/// Centered-or-shifted Gaussian statistics of the X = X_0 quadrature.
struct GaussianQuadrature {
    double mean = 0.0;
    double delta_x = 0.5;
};

struct PeakValue {
    double value = 0.0;
    PhasePoint argmax;
};

/// Closed-form handles used both as fast paths and as cross-validation oracles
/// for the matrix path. Every member is optional.
struct AnalyticForms {
    std::function<double(PhasePoint)> q;
    std::optional<PeakValue> q_max;
    std::function<double(double)> q_marginal;
    std::optional<double> q_marginal_max;
    std::function<double(int)> number_probability;
    /// p(x) for X_theta; returns nullopt for angles without a closed form.
    std::function<std::optional<double>(double, double)> quadrature_density;
    std::optional<GaussianQuadrature> gaussian_quadrature;
};

struct CatalogEntry {
    FockOperator op;
    Family family;
    std::string label;
    std::map<std::string, double> params;
    AnalyticForms analytic;
    PClassification p;
    std::optional<FockVector> pure_vector;
};

/// Continuous-outcome effect |x><x| of the X quadrature. Pairing it with a state
/// yields a probability density; its reduced trace tr_x is 1/pi.
struct QuadratureEffect {
    double x = 0.0;
    double reduced_trace() const;
};

enum class Parity { even, odd };

// States.
CatalogEntry vacuum_state(const TruncationPolicy& policy = {});
CatalogEntry number_state(int n, const TruncationPolicy& policy = {});
CatalogEntry coherent_state(PhasePoint alpha, const TruncationPolicy& policy = {});
CatalogEntry thermal_state(double n_tc, const TruncationPolicy& policy = {});
CatalogEntry photon_added_thermal(double n_tc, const TruncationPolicy& policy = {});
CatalogEntry cat_state(PhasePoint alpha, Parity parity, const TruncationPolicy& policy = {});
CatalogEntry squeezed_vacuum(double delta_x, const TruncationPolicy& policy = {});

struct WeightedEntry {
    double weight;
    CatalogEntry entry;
};

/// Convex combination; weights must be >= 0 and sum to 1 within 1e-12.
CatalogEntry mixture(const std::vector<WeightedEntry>& components);
/// (1 - p)|0><0| + p|N><N|
CatalogEntry vacuum_number_mixture(double p, int photons, const TruncationPolicy& policy = {});
/// p rho_tc + (1 - p)|n_0><n_0|
CatalogEntry thermal_number_mixture(double p, double n_tc, int n_0, const TruncationPolicy& policy = {});

// POVM elements.
CatalogEntry povm_number(int n);
CatalogEntry povm_projector(const FockVector& vector, std::string label = "projector");
/// |alpha><alpha| / pi
CatalogEntry povm_coherent(PhasePoint alpha, const TruncationPolicy& policy = {});
/// q|0><0| + p|1><1| + q|2><2|
CatalogEntry contaminated_one_photon(double p, double q);
QuadratureEffect povm_quadrature(double x);

/// xi = n_tc / (n_tc + 1)
double thermal_ratio(double n_tc);

}  // namespace phasebound
