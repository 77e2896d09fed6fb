#pragma once
//
// Variational structure of the planar weighted Dido problem over starlike
// profiles: Lagrange multiplier, Euler-Lagrange residual, a measure-constrained
// monotone perimeter flow, and the second variation.
//

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "conedido/starlike.hpp"

namespace conedido {

enum class FlowMetric {
    L2,       // nodal product-trapezoid mass
    Sobolev,  // mass + alpha * weighted stiffness
};

struct FlowOptions {
    double step = 1.0;                  // initial step; adapted by backtracking
    int max_iterations = 100000;
    double tolerance = 1e-11;           // stop when sup|delta rho| / sup rho falls below this
    double projection_tolerance = 1e-13;  // relative measure error after rescaling
    FlowMetric metric = FlowMetric::Sobolev;
    double sobolev_alpha = 1.0;
    std::ostream* trace = nullptr;      // CSV rows iter,perimeter,measure,sup_change
    int trace_every = 1;

    void validate() const;
};

struct FlowResult {
    explicit FlowResult(RadialProfile p) : profile(std::move(p)) {}

    RadialProfile profile;
    bool converged = false;
    std::string reason;
    int iterations = 0;
    double perimeter = 0.0;
    double measure = 0.0;
    double last_sup_change = 0.0;
    double gamma = 0.0;  // multiplier of the final projected step
};

/// gamma = (2 c R^2 + k + 1) / R, the multiplier of the half-disk of radius R.
double lagrange_multiplier(const Density& d, double R);

/// -(G_p z)' + G_r z - gamma F' z at interior nodes theta_1 .. theta_{M-1}.
Eigen::VectorXd euler_residual(const RadialProfile& p, double gamma);

/// Monotone constrained flow. rho0 is rescaled to measure m first if needed.
FlowResult minimize_perimeter(double m, const RadialProfile& rho0, const FlowOptions& opts = {});

/// Subtracts the F'z-weighted mean so that int F' kappa z = 0.
Eigen::VectorXd project_admissible(const RadialProfile& p, const Eigen::VectorXd& kappa);

/// Linearized measure constraint int F' kappa z, relative to int F' z * max|kappa|.
double constraint_violation(const RadialProfile& p, const Eigen::VectorXd& kappa);

/// int (G_rr k^2 + 2 G_rp k k' + G_pp k'^2 - gamma F'' k^2) z with kappa piecewise linear.
/// Throws PreconditionError when kappa violates the constraint by more than 1e-8
/// and project is false.
double second_variation(const RadialProfile& p, const Eigen::VectorXd& kappa, double gamma,
                        bool project = false);

struct VariationReport {
    double gamma = 0.0;
    double euler_residual_norm = 0.0;
    std::vector<std::pair<std::string, double>> second_variation_values;
};

VariationReport variation_report(const RadialProfile& p, double gamma,
                                 const std::vector<std::pair<std::string, Eigen::VectorXd>>& directions);

/// The second variation evaluated along kappa = rho' with nodal finite differences.
double rho_prime_second_variation(const RadialProfile& p, double gamma);

/// int G_p rho' (z'/z)' z, with (z'/z)' differenced from z'/z = k cot(theta).
double log_weight_term(const RadialProfile& p);

/// int e^{c rho^2} rho^k (rho^2 + rho'^2)^{-1/2} rho'^2 sin^{k-2}, endpoints skipped.
double slope_defect(const RadialProfile& p);

/// profile_perimeter(p) - isoperimetric_profile(d, profile_measure(p)).
double verify_isoperimetric(const RadialProfile& p);

} // namespace conedido
