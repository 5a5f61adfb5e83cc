#pragma once

#include <optional>
#include <vector>

#include "phasebound/bounds.hpp"
#include "phasebound/catalog.hpp"
#include "phasebound/fock.hpp"

namespace phasebound {

/// Two-mode state on D1 x D2 levels, held either in Schmidt form
/// sum_n c_n |n>|n> or as a dense (D1 D2) x (D1 D2) matrix indexed by
/// n1 * D2 + n2.
class TwoModeState {
public:
    static TwoModeState schmidt(FockSpace space, std::vector<double> coefficients, double truncation_loss,
                                double tol = kTolTrunc);
    static TwoModeState dense(FockSpace space1, FockSpace space2, Matrix matrix, double truncation_loss,
                              double tol = kTolTrunc);
    static TwoModeState product(const FockOperator& mode1, const FockOperator& mode2);

    const FockSpace& space1() const { return space1_; }
    const FockSpace& space2() const { return space2_; }
    bool is_schmidt() const { return schmidt_; }
    const std::vector<double>& schmidt_coefficients() const { return coefficients_; }
    double truncation_loss() const { return truncation_loss_; }

    /// Dense matrix, materialized on demand for Schmidt-form states.
    Matrix dense_matrix() const;
    double joint_probability(int n1, int n2) const;
    /// Partial trace over the other mode; `mode` is 1 or 2.
    FockOperator reduced(int mode) const;

    /// Closed-form Gaussian statistics of X1 - X2, when known.
    std::optional<GaussianQuadrature> difference_gaussian;

private:
    TwoModeState(FockSpace s1, FockSpace s2) : space1_(s1), space2_(s2) {}

    FockSpace space1_;
    FockSpace space2_;
    bool schmidt_ = false;
    std::vector<double> coefficients_;
    Matrix matrix_;
    double truncation_loss_ = 0.0;
};

/// sqrt(1 - zeta^2) sum_n zeta^n |n>|n>, 0 <= zeta < 1.
TwoModeState tmsv(double zeta, const TruncationPolicy& policy = {});

/// p_{n1,n2} against p_{b,n1} p_{b,n2}.
BoundReport joint_number_test(const TwoModeState& state, int n1, int n2);
/// Total photon number n against the single-mode bound p_{b,n}.
BoundReport total_number_test(const TwoModeState& state, int n);

/// Density of X1 - X2 at x.
double quadrature_difference_density(const TwoModeState& state, double x);
/// Density of X1 - X2 against the classical bound 1/sqrt(pi).
BoundReport quadrature_difference_test(const TwoModeState& state, double x);
double classical_difference_bound();

struct JointBound {
    int n1 = 0;
    int n2 = 0;
    double bound = 0.0;
};

/// p_{b,n1} p_{b,n2} for n1, n2 <= n_max.
std::vector<JointBound> joint_bound_table(int n_max = 10);

}  // namespace phasebound
