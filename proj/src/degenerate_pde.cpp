#include "conedido/degenerate_pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/Sparse>

#include "conedido/angular_grid.hpp"
#include "conedido/errors.hpp"
#include "conedido/quadrature.hpp"

namespace conedido {

ProblemSpec ProblemSpec::isotropic(const Density& d, double R_D, SourceField f)
{
    return {d, R_D, 1.0, [](double, double) { return Eigen::Matrix2d::Identity().eval(); }, std::move(f)};
}

ProblemSpec ProblemSpec::diagonal(const Density& d, double R_D, double lambda, SourceField f)
{
    return {d, R_D, lambda,
            [lambda](double, double) {
                Eigen::Matrix2d B = Eigen::Matrix2d::Zero();
                B(0, 0) = 1.0;
                B(1, 1) = lambda;
                return B;
            },
            std::move(f)};
}

ProblemSpec ProblemSpec::rotating(const Density& d, double R_D, double lambda, SourceField f)
{
    return {d, R_D, lambda,
            [lambda](double x, double y) {
                const double a = x + 2.0 * y;
                Eigen::Matrix2d Q;
                Q << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
                return (Q * Eigen::Vector2d(1.0, lambda).asDiagonal() * Q.transpose()).eval();
            },
            std::move(f)};
}

void ProblemSpec::validate() const
{
    density.validate();
    if (density.N != 2) throw PreconditionError("problem: the grid solver is planar (N = 2)");
    if (!(R_D > 0.0)) throw PreconditionError("problem: R_D must be positive");
    if (!(lambda_bound >= 1.0)) throw PreconditionError("problem: Lambda must be >= 1");
    if (!coefficient || !source) throw PreconditionError("problem: coefficient and source are required");
}

namespace {

constexpr std::array<double, 3> gauss_x{0.1127016653792583, 0.5, 0.8872983346207417};
constexpr std::array<double, 3> gauss_w{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

void check_ellipticity(const Eigen::Matrix2d& B, double lambda, double x, double y)
{
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(B, Eigen::EigenvaluesOnly);
    const auto ev = es.eigenvalues();
    const double slack = 1e-12 * std::max(1.0, lambda);
    if (!(ev(0) >= 1.0 - slack && ev(1) <= lambda + slack) || (B - B.transpose()).norm() > 1e-12 * B.norm())
        throw PreconditionError("problem: coefficient fails ellipticity [1, Lambda] at (" + std::to_string(x) +
                                ", " + std::to_string(y) + ")");
}

} // namespace

FdSolution solve_fd(const ProblemSpec& p, int P, int M)
{
    p.validate();
    auto grid = make_polar_grid(P, M, p.R_D);
    const auto& d = p.density;
    const double dr = grid->dr, dt = grid->dtheta;
    const int ndof = 1 + (P - 1) * (M + 1);
    auto dof = [&](int i, int j) { return i == 0 ? 0 : (i == P ? -1 : 1 + (i - 1) * (M + 1) + j); };

    for (int i = 0; i <= P; ++i)
        for (int j = 0; j <= M; ++j) {
            const double r = grid->r(i), t = grid->theta(j);
            const double x = r * std::cos(t), y = r * std::sin(t);
            check_ellipticity(p.coefficient(x, y), p.lambda_bound, x, y);
        }

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(P) * M * 16);
    for (int i = 0; i < P; ++i)
        for (int j = 0; j < M; ++j) {
            const int ids[4] = {dof(i, j), dof(i + 1, j), dof(i, j + 1), dof(i + 1, j + 1)};
            Eigen::Matrix4d Ke = Eigen::Matrix4d::Zero();
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const double s = gauss_x[a], t = gauss_x[b];
                    const double r = grid->r(i) + s * dr, th = grid->theta(j) + t * dt;
                    const double ct = std::cos(th), st = std::sin(th);
                    const double phi = d.a * std::pow(r, d.k) * std::pow(st, d.k) * std::exp(d.c * r * r);
                    const double wq = gauss_w[a] * gauss_w[b] * dr * dt * r * phi;
                    Eigen::Matrix2d Q;
                    Q << ct, -st, st, ct;
                    const Eigen::Matrix2d Bp = Q.transpose() * p.coefficient(r * ct, r * st) * Q;
                    Eigen::Matrix<double, 2, 4> G;  // polar gradients (d_r, r^-1 d_theta) of the shapes
                    G << -(1 - t) / dr, (1 - t) / dr, -t / dr, t / dr,
                        -(1 - s) / (dt * r), -s / (dt * r), (1 - s) / (dt * r), s / (dt * r);
                    Ke.noalias() += wq * G.transpose() * Bp * G;
                }
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    if (ids[a] >= 0 && ids[b] >= 0) trip.emplace_back(ids[a], ids[b], Ke(a, b));
        }
    Eigen::SparseMatrix<double> K(ndof, ndof);
    K.setFromTriplets(trip.begin(), trip.end());

    // Lumped load: f at the node times int hat_i(r) hat_j(theta) phi dx, which factorizes.
    const auto ang = make_angular_grid(M, d.k, 0.0, std::numbers::pi);
    const QuadOptions qo{1e-15, 1e-13, 100};
    auto radial = [&](double r) { return d.a * std::pow(r, d.k + 1.0) * std::exp(d.c * r * r); };
    Eigen::VectorXd L(P);
    for (int i = 0; i < P; ++i) {
        const double ri = grid->r(i);
        double v = integrate([&](double r) { return (1.0 - (r - ri) / dr) * radial(r); }, ri, ri + dr, qo).value;
        if (i > 0) v += integrate([&](double r) { return (1.0 - (ri - r) / dr) * radial(r); }, ri - dr, ri, qo).value;
        L(i) = v;
    }
    Eigen::VectorXd F = Eigen::VectorXd::Zero(ndof);
    F(0) = p.source(0.0, 0.0) * L(0) * ang->total_weight();
    for (int i = 1; i < P; ++i)
        for (int j = 0; j <= M; ++j) {
            const double r = grid->r(i), t = grid->theta(j);
            F(dof(i, j)) = p.source(r * std::cos(t), r * std::sin(t)) * L(i) * ang->node_weight(j);
        }

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
    if (ldlt.info() != Eigen::Success) throw NumericalError("solve_fd: factorization failed");
    const Eigen::VectorXd D = ldlt.vectorD();
    const double cond = D.cwiseAbs().maxCoeff() / D.cwiseAbs().minCoeff();
    if (!(D.minCoeff() > 0.0))
        throw NumericalError("solve_fd: stiffness matrix is not positive definite (pivot ratio " +
                             std::to_string(cond) + ")");
    Eigen::VectorXd x = ldlt.solve(F);
    const double fn = F.norm();
    double residual = fn > 0.0 ? (K * x - F).norm() / fn : (K * x).norm();
    if (residual > 1e-12) {  // one step of iterative refinement
        x += ldlt.solve(F - K * x);
        residual = fn > 0.0 ? (K * x - F).norm() / fn : (K * x).norm();
    }
    if (!(residual <= 1e-10))
        throw NumericalError("solve_fd: linear residual " + std::to_string(residual) + " with pivot ratio " +
                             std::to_string(cond));

    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(P + 1, M + 1);
    for (int i = 0; i < P; ++i)
        for (int j = 0; j <= M; ++j) U(i, j) = x(dof(i, j));
    return {GridFunction(grid, d, std::move(U)), residual, cond};
}

RadialFunction solve_radial(const Density& d, const std::function<double(double)>& f, double R, int intervals)
{
    d.validate();
    if (!(R > 0.0)) throw PreconditionError("solve_radial: radius must be positive");
    if (intervals < 2) throw PreconditionError("solve_radial: need at least two intervals");
    const double pw = d.radial_power();
    const double h = R / intervals;
    const QuadOptions qo{1e-300, 1e-12, 200};
    auto inner_integrand = [&](double s) { return f(s) * std::pow(s, pw) * std::exp(d.c * s * s); };

    Eigen::VectorXd inner(intervals + 1);
    inner(0) = 0.0;
    for (int i = 0; i < intervals; ++i)
        inner(i + 1) = inner(i) + integrate(inner_integrand, i * h, (i + 1) * h, qo).value;

    Eigen::VectorXd w(intervals + 1);
    w(intervals) = 0.0;
    for (int i = intervals - 1; i >= 0; --i) {
        const double lo = i * h;
        auto outer = [&](double rho) {
            const double I = inner(i) + integrate(inner_integrand, lo, rho, qo).value;
            return I * std::pow(rho, -pw) * std::exp(-d.c * rho * rho);
        };
        w(i) = w(i + 1) + integrate(outer, lo, lo + h, qo).value;
    }
    return {d, R, std::move(w)};
}

RadialFunction symmetrized_solution(const Density& d, const RadialFunction& fstar, double r_star)
{
    if (!(r_star > 0.0)) throw PreconditionError("symmetrized_solution: r_star must be positive");
    if (fstar.radius() < r_star * (1.0 - 1e-12))
        throw PreconditionError("symmetrized_solution: f* must be defined on [0, r_star]");
    const double scale = fstar.values().cwiseAbs().maxCoeff();
    if (!fstar.nonincreasing(1e-12 * scale))
        throw PreconditionError("symmetrized_solution: f* must be nonincreasing");
    return solve_radial(d, [&fstar](double r) { return fstar(r); }, r_star, fstar.intervals());
}

ComparisonReport compare(const GridFunction& u, const ProblemSpec& p, double tolerance)
{
    p.validate();
    const auto& d = u.density();
    const auto ustar = star_rearrangement(u);
    const auto fgrid = GridFunction::sample(u.grid_ptr(), d, [&](double x, double y) { return std::abs(p.source(x, y)); });
    const auto fstar = star_rearrangement(fgrid);
    const auto w = symmetrized_solution(d, fstar, ustar.radius());

    ComparisonReport rep;
    rep.tolerance = tolerance;
    rep.w_max = w.values().maxCoeff();
    rep.pointwise_margin = (w.values() - ustar.values()).minCoeff();
    rep.pointwise_pass = rep.pointwise_margin >= -tolerance * rep.w_max;
    rep.qnorm_pass = true;
    for (std::size_t n = 0; n < ComparisonReport::qs.size(); ++n) {
        const double q = ComparisonReport::qs[n];
        rep.qnorm_scales[n] = gradient_qnorm(w, q);
        rep.qnorm_margins[n] = rep.qnorm_scales[n] - gradient_qnorm(u, q);
        rep.qnorm_pass = rep.qnorm_pass && rep.qnorm_margins[n] >= -tolerance * rep.qnorm_scales[n];
    }
    return rep;
}

} // namespace conedido
