#pragma once
//
// First nontrivial Neumann eigenvalue of -(sin^k u')' = lambda sin^k u on (0, pi),
// Rayleigh quotients for the coordinate eigenfunctions, and the right-hand side
// of the radial stability condition.
//

#include <functional>

#include <Eigen/Core>

#include "conedido/density.hpp"

namespace conedido {

struct EigenResult {
    double lambda1 = 0.0;
    Eigen::VectorXd theta;
    Eigen::VectorXd eigenvector;  // unit norm in the weighted L2 product
    int nodes = 0;
    int iterations = 0;
    double constant_overlap = 0.0;  // |int u sin^k| after normalization
};

/// P1 elements on `nodes` uniform nodes with exact moments of sin^k; the smallest
/// nonzero eigenvalue by inverse iteration with the constants deflated.
EigenResult neumann_eigenvalue(double k, int nodes);

/// int u'^2 sin^k / int u^2 sin^k over (0, pi) by adaptive quadrature.
double rayleigh_quotient(double k, const std::function<double(double)>& u, const std::function<double(double)>& du);

/// The same quotient for the piecewise-linear interpolant on `nodes` uniform nodes.
double discrete_rayleigh_quotient(double k, int nodes, const std::function<double(double)>& u);

/// int |grad_S x_1|^2 x_N^k / int x_1^2 x_N^k over the upper half of S^{N-1}.
double half_sphere_rayleigh(int N, double k);

/// N - 1 + r^2 [ (A'/A)^2 - A''/A ] from the values A, A', A'' at r.
double stability_rhs(int N, double r, double A, double dA, double d2A);

/// The same for A(r) = a r^k exp(c r^2) with its exact derivatives.
double stability_rhs(const Density& d, double r);

} // namespace conedido
