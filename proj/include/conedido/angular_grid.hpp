#pragma once

#include <memory>

#include <Eigen/Core>

namespace conedido {

/// Uniform grid on an angle interval [lo, hi] with exact moments of the
/// weight z(theta) = sin^k(theta) against piecewise-linear elements.
///
/// For cell e = [theta_e, theta_e + h] and s = (theta - theta_e)/h:
///   moments(e, p) = int_e s^p sin^k(theta) d(theta),  p = 0, 1, 2.
/// node_weight(j) = int hat_j * sin^k: the product trapezoid weights.
struct AngularGrid {
    int cells = 0;
    double k = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double h = 0.0;
    Eigen::VectorXd theta;                      // cells + 1 nodes
    Eigen::VectorXd node_weight;                // cells + 1
    Eigen::Matrix<double, Eigen::Dynamic, 3> moments;  // cells x 3

    double total_weight() const { return moments.col(0).sum(); }
    double midpoint(int e) const { return lo + (e + 0.5) * h; }
};

std::shared_ptr<const AngularGrid> make_angular_grid(int cells, double k, double lo, double hi);

/// P1 mass-matrix contributions of one cell: int_e (k0 (1-s) + k1 s)^2 z.
inline double cell_l2(const AngularGrid& g, int e, double v0, double v1)
{
    const double m0 = g.moments(e, 0), m1 = g.moments(e, 1), m2 = g.moments(e, 2);
    return v0 * v0 * (m0 - 2.0 * m1 + m2) + 2.0 * v0 * v1 * (m1 - m2) + v1 * v1 * m2;
}

/// int_e (v0 (1-s) + v1 s) z.
inline double cell_mean(const AngularGrid& g, int e, double v0, double v1)
{
    return v0 * (g.moments(e, 0) - g.moments(e, 1)) + v1 * g.moments(e, 1);
}

} // namespace conedido
