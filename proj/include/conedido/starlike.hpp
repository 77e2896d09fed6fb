#pragma once
//
// Starlike sets  { 0 < r < rho(theta), 0 < theta < pi }  in the upper half-plane,
// sampled at uniform nodes theta_j = j pi / M, and finite interval unions on
// the half-line with their one-dimensional symmetrization.
//

#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "conedido/angular_grid.hpp"
#include "conedido/density.hpp"

namespace conedido {

class RadialProfile {
public:
    RadialProfile(Density density, std::shared_ptr<const AngularGrid> grid, Eigen::VectorXd rho);

    static RadialProfile constant(const Density& d, int cells, double R);
    static RadialProfile from_function(const Density& d, int cells, const std::function<double(double)>& rho);

    const Density& density() const { return density_; }
    const AngularGrid& grid() const { return *grid_; }
    const std::shared_ptr<const AngularGrid>& grid_ptr() const { return grid_; }
    const Eigen::VectorXd& rho() const { return rho_; }
    int cells() const { return grid_->cells; }

    /// Same grid and density, new samples.
    RadialProfile with_rho(Eigen::VectorXd rho) const { return {density_, grid_, std::move(rho)}; }
    RadialProfile scaled(double factor) const { return with_rho(factor * rho_); }

    /// rho_j == rho_{M-j} within tol.
    bool symmetric(double tol = 1e-12) const;

private:
    Density density_;
    std::shared_ptr<const AngularGrid> grid_;
    Eigen::VectorXd rho_;
};

/// F(r) = int_0^r exp(c t^2) t^(k+1) dt,  F', F''.
double profile_F(const Density& d, double r);
double profile_dF(const Density& d, double r);
double profile_d2F(const Density& d, double r);

/// G(r, p) = exp(c r^2) r^k sqrt(r^2 + p^2) and its partial derivatives.
struct GValues {
    double G, Gr, Gp, Grr, Grp, Gpp;
};
GValues profile_G(const Density& d, double r, double p);

/// mu of the set: a * int_0^pi F(rho) sin^k.
double profile_measure(const RadialProfile& p);

/// mu-perimeter: a * int_0^pi G(rho, rho') sin^k.
double profile_perimeter(const RadialProfile& p);

/// Exact gradients of the discrete functionals with respect to the node samples.
Eigen::VectorXd profile_measure_gradient(const RadialProfile& p);
Eigen::VectorXd profile_perimeter_gradient(const RadialProfile& p);

/// Nodal rho' by centered differences, second-order one-sided at theta = 0, pi.
Eigen::VectorXd profile_derivative(const RadialProfile& p);

/// Radially rescaled copy (rho <- lambda rho) whose measure equals m to relative tol.
RadialProfile rescaled_to_measure(const RadialProfile& p, double m, double tol = 1e-13);

/// R (1 + sum_i eps_i sin(i theta)) with random eps, |eps|_1 <= max_amplitude,
/// modes i = 1..max_mode, floored at 0.05 R.
RadialProfile random_profile(const Density& d, int cells, double R, std::mt19937_64& rng,
                             int max_mode = 8, double max_amplitude = 0.5);

void write_profile_csv(std::ostream& out, const RadialProfile& p);
/// Reads "theta,rho" rows (an optional header is skipped); nodes must be uniform on [0, pi].
RadialProfile read_profile_csv(std::istream& in, const Density& d);

// ---------------------------------------------------------------------------

struct Interval {
    double lo, hi;
};

class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> parts);

    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }

private:
    std::vector<Interval> parts_;
};

struct IntervalSymmetrization {
    IntervalSet result;  // (0, d*)
    double measure;
    double perimeter_before;  // sum_j phi(a_j) + phi(b_j)
    double perimeter_after;   // phi(0) + phi(d*)
};

/// Replaces s by (0, d*) of equal nu-measure, d(nu) = phi dt with phi continuous,
/// positive and nondecreasing on the spanned range (checked by sampling).
IntervalSymmetrization interval_symmetrize(const IntervalSet& s, const std::function<double(double)>& phi);

} // namespace conedido
