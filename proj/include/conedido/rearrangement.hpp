#pragma once
//
// Scalar fields on a polar grid over a half-disk, their weighted distribution
// function, decreasing rearrangement u* and star rearrangement u-star.
//

#include <functional>
#include <iosfwd>
#include <memory>

#include <Eigen/Core>

#include "conedido/density.hpp"

namespace conedido {

/// Nodes (r_i, theta_j), r_i = i R_D / P, theta_j = j pi / M, over the half-disk of radius R_D.
/// The row i = 0 is the origin; it carries a single value.
struct PolarGrid {
    int P = 0;
    int M = 0;
    double R_D = 0.0;
    double dr = 0.0;
    double dtheta = 0.0;

    double r(int i) const { return i * dr; }
    double theta(int j) const { return j * dtheta; }
};

std::shared_ptr<const PolarGrid> make_polar_grid(int P, int M, double R_D);

/// mu-weights of the nodes: mu of the dual cell [r_{i-1/2}, r_{i+1/2}] x [theta_{j-1/2}, theta_{j+1/2}]
/// clipped to the half-disk, computed exactly. The origin row holds the split of the
/// central half-disk of radius dr/2 among the rays. Entries sum to mu(half-disk).
Eigen::MatrixXd node_measure(const PolarGrid& g, const Density& d);

class GridFunction {
public:
    GridFunction(std::shared_ptr<const PolarGrid> grid, Density density, Eigen::MatrixXd values);

    /// Samples f(x, y) at the nodes.
    static GridFunction sample(std::shared_ptr<const PolarGrid> grid, const Density& d,
                               const std::function<double(double, double)>& f);

    const PolarGrid& grid() const { return *grid_; }
    const std::shared_ptr<const PolarGrid>& grid_ptr() const { return grid_; }
    const Density& density() const { return density_; }
    const Eigen::MatrixXd& values() const { return values_; }  // (P+1) x (M+1)
    const Eigen::MatrixXd& weights() const { return *weights_; }

    double measure() const { return weights_->sum(); }
    /// int Phi(u) dmu by node quadrature.
    double integrate(const std::function<double(double)>& phi) const;

private:
    std::shared_ptr<const PolarGrid> grid_;
    Density density_;
    Eigen::MatrixXd values_;
    std::shared_ptr<const Eigen::MatrixXd> weights_;
};

/// Radial profile sampled at uniform radii on [0, radius].
class RadialFunction {
public:
    RadialFunction(Density density, double radius, Eigen::VectorXd values);

    const Density& density() const { return density_; }
    double radius() const { return radius_; }
    const Eigen::VectorXd& values() const { return values_; }
    int intervals() const { return static_cast<int>(values_.size()) - 1; }
    double step() const { return radius_ / intervals(); }
    double r(int i) const { return i * step(); }

    /// Linear interpolation; zero beyond the radius.
    double operator()(double r) const;

    bool nonincreasing(double tol = 0.0) const;

private:
    Density density_;
    double radius_;
    Eigen::VectorXd values_;
};

/// a C_mu * (radial_moment over [r_{i-1/2}, r_{i+1/2}]) clipped to [0, radius]: the mu
/// of each radial node's shell.
Eigen::VectorXd radial_node_measure(const RadialFunction& f);

/// int Phi(f) dmu over the ball (half-ball) of the function's radius, f linearly interpolated.
double integrate(const RadialFunction& f, const std::function<double(double)>& phi);

/// m_mu(t) = mu{|u| > t}.
double distribution(const GridFunction& u, double t);

class RearrangementTable {
public:
    /// Sorted-knot form: values v_n nonincreasing with cumulative measures S_n.
    RearrangementTable(Eigen::VectorXd values, Eigen::VectorXd weights);

    double total_measure() const { return total_; }
    double sup() const { return sorted_.size() ? sorted_(0) : 0.0; }

    /// m_mu(t).
    double distribution(double t) const;
    /// inf{t >= 0 : m(t) <= s}: right-continuous steps.
    double u_star_step(double s) const;
    /// Piecewise-linear through (midpoint of each level block, level); clamped at the ends.
    double u_star(double s) const;

    const Eigen::VectorXd& thresholds() const { return thresholds_; }
    Eigen::VectorXd distribution_values() const;

    /// int_0^{mu(D)} Phi(u*(s)) ds for the step form (exact for the node quadrature).
    double integrate(const std::function<double(double)>& phi) const;

private:
    Eigen::VectorXd sorted_;      // |u| descending
    Eigen::VectorXd cumulative_;  // S_n = sum_{m <= n} w_m
    Eigen::VectorXd knot_s_, knot_v_;
    Eigen::VectorXd thresholds_;
    double total_ = 0.0;
};

RearrangementTable decreasing_rearrangement(const GridFunction& u);

/// u*(a C_mu psi(r)) on [0, r_star] with r_star the radius of the half-disk of measure mu(D),
/// sampled at P + 1 radii.
RadialFunction star_rearrangement(const GridFunction& u);
RadialFunction star_rearrangement(const RearrangementTable& table, const Density& d, int intervals);

/// int |grad u|^q dmu, gradient (d_r u, r^{-1} d_theta u) by centered differences.
double gradient_qnorm(const GridFunction& u, double q);
double gradient_qnorm(const RadialFunction& u, double q);

void write_grid_function_csv(std::ostream& out, const GridFunction& u);
GridFunction read_grid_function_csv(std::istream& in);
/// Rows t, m_mu(t), s, u*(s) with s uniform on [0, mu(D)].
void write_rearrangement_csv(std::ostream& out, const RearrangementTable& table);

} // namespace conedido
