#pragma once

#include <functional>
#include <string>

#include "phasebound/catalog.hpp"
#include "phasebound/fock.hpp"

namespace phasebound {

enum class MaxMethod { closed_form, grid_refine };

std::string max_method_name(MaxMethod method);

struct MaxResult {
    double value = 0.0;
    PhasePoint argmax;  // for marginals, argmax.re holds the maximizing x
    MaxMethod method = MaxMethod::grid_refine;
    double est_error = 0.0;
};

/// Q(alpha) = <alpha|A|alpha> / pi. Throws TruncationError when alpha lies
/// outside the disc where the truncated operator represents A faithfully.
double q_value(const FockOperator& op, PhasePoint alpha, double tol = kTolTrunc);

/// Closed form when the entry has one, matrix path otherwise.
double q_value(const CatalogEntry& entry, PhasePoint alpha);

/// Search radius sqrt(n_cut) + 5, n_cut being the smallest n where the
/// trace-normalized number population reaches 1 - 1e-8.
double search_radius(const FockOperator& op);

/// Global maximum of a smooth phase-space function on the disc |alpha| <= r_max.
/// Radial functions are searched along the positive real axis only.
MaxResult maximize_surface(const std::function<double(PhasePoint)>& f, double r_max, bool radial);

/// Global maximum of a smooth function of one real variable on [lo, hi].
MaxResult maximize_line(const std::function<double(double)>& f, double lo, double hi, int grid_points = 64);

MaxResult q_max(const FockOperator& op);
MaxResult q_max(const CatalogEntry& entry);

/// Q~(x) = integral of Q(x, y) over y, exact for truncated operators.
double q_marginal(const FockOperator& op, double x);
double q_marginal(const CatalogEntry& entry, double x);
MaxResult q_marginal_max(const FockOperator& op);
MaxResult q_marginal_max(const CatalogEntry& entry);

/// Closed-form Glauber-Sudarshan P. Throws SingularP for singular entries.
double p_value(const CatalogEntry& entry, PhasePoint alpha);

}  // namespace phasebound
