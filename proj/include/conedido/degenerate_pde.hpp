#pragma once
//
// The degenerate problem  -div(A grad u) = phi f  on a half-disk with u = 0 on
// the curved boundary and no flux through the flat side, where A = phi B and
// B has eigenvalues in [1, Lambda]; the radial comparison solution w and the
// pointwise / gradient comparison of u against w.
//

#include <array>
#include <functional>

#include <Eigen/Core>

#include "conedido/density.hpp"
#include "conedido/rearrangement.hpp"

namespace conedido {

using MatrixField = std::function<Eigen::Matrix2d(double x, double y)>;
using SourceField = std::function<double(double x, double y)>;

struct ProblemSpec {
    Density density;
    double R_D = 1.0;
    double lambda_bound = 1.0;
    MatrixField coefficient;  // B(x); the operator matrix is A = phi B
    SourceField source;

    static ProblemSpec isotropic(const Density& d, double R_D, SourceField f);
    /// B = diag(1, Lambda).
    static ProblemSpec diagonal(const Density& d, double R_D, double lambda, SourceField f);
    /// B = Q(alpha) diag(1, Lambda) Q(alpha)^T with the principal axis turning by alpha(x, y) = x + 2y.
    static ProblemSpec rotating(const Density& d, double R_D, double lambda, SourceField f);

    void validate() const;
};

struct FdSolution {
    GridFunction u;
    double residual = 0.0;            // |K u - F| / |F| after the solve
    double condition_estimate = 0.0;  // max / min pivot of the factorization
};

/// Q1 elements in (r, theta) on the polar grid, one unknown at the origin, exact
/// tensor-Gauss quadrature of the stiffness, lumped (nodal) load.
FdSolution solve_fd(const ProblemSpec& p, int P, int M);

/// w(r) = int_r^{r_star} rho^{1-N-k} e^{-c rho^2} int_0^rho f(s) s^{N+k-1} e^{c s^2} ds d rho,
/// sampled at `intervals` + 1 uniform radii on [0, R].
RadialFunction solve_radial(const Density& d, const std::function<double(double)>& f, double R, int intervals);

/// The same formula driven by a nonincreasing radial table (the rearranged source).
RadialFunction symmetrized_solution(const Density& d, const RadialFunction& fstar, double r_star);

struct ComparisonReport {
    static constexpr std::array<double, 4> qs{0.5, 1.0, 1.5, 2.0};

    double pointwise_margin = 0.0;  // min (w - u_star)
    double w_max = 0.0;
    std::array<double, 4> qnorm_margins{};  // int |grad w|^q - int |grad u|^q
    std::array<double, 4> qnorm_scales{};   // int |grad w|^q
    double tolerance = 1e-3;
    bool pointwise_pass = false;
    bool qnorm_pass = false;

    bool pass() const { return pointwise_pass && qnorm_pass; }
};

/// Rearranges u and |f| and compares against the symmetrized solution.
ComparisonReport compare(const GridFunction& u, const ProblemSpec& p, double tolerance = 1e-3);

} // namespace conedido
