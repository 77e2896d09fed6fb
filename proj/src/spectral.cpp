#include "conedido/spectral.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/SparseCholesky>
#include <Eigen/Sparse>

#include "conedido/angular_grid.hpp"
#include "conedido/errors.hpp"
#include "conedido/quadrature.hpp"

namespace conedido {

namespace {

struct Forms {
    Eigen::SparseMatrix<double> K, M;
};

Forms assemble(const AngularGrid& g)
{
    const int n = g.cells + 1;
    std::vector<Eigen::Triplet<double>> kt, mt;
    for (int e = 0; e < g.cells; ++e) {
        const double m0 = g.moments(e, 0), m1 = g.moments(e, 1), m2 = g.moments(e, 2);
        const double s = m0 / (g.h * g.h);
        kt.emplace_back(e, e, s);
        kt.emplace_back(e + 1, e + 1, s);
        kt.emplace_back(e, e + 1, -s);
        kt.emplace_back(e + 1, e, -s);
        mt.emplace_back(e, e, m0 - 2.0 * m1 + m2);
        mt.emplace_back(e + 1, e + 1, m2);
        mt.emplace_back(e, e + 1, m1 - m2);
        mt.emplace_back(e + 1, e, m1 - m2);
    }
    Forms f{Eigen::SparseMatrix<double>(n, n), Eigen::SparseMatrix<double>(n, n)};
    f.K.setFromTriplets(kt.begin(), kt.end());
    f.M.setFromTriplets(mt.begin(), mt.end());
    return f;
}

} // namespace

EigenResult neumann_eigenvalue(double k, int nodes)
{
    if (nodes < 16) throw PreconditionError("neumann_eigenvalue: need at least 16 nodes");
    if (!(k >= 0.0)) throw PreconditionError("neumann_eigenvalue: k must be nonnegative");
    const auto g = make_angular_grid(nodes - 1, k, 0.0, std::numbers::pi);
    const Forms f = assemble(*g);

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Eigen::SparseMatrix<double>(f.K + f.M));
    if (solver.info() != Eigen::Success) throw NumericalError("neumann_eigenvalue: factorization failed");

    const Eigen::VectorXd one = Eigen::VectorXd::Ones(nodes);
    const Eigen::VectorXd Mone = f.M * one;
    const double mass = one.dot(Mone);
    auto deflate = [&](Eigen::VectorXd& v) { v -= (Mone.dot(v) / mass) * one; };
    auto normalize = [&](Eigen::VectorXd& v) { v /= std::sqrt(v.dot(f.M * v)); };

    Eigen::VectorXd v = g->theta.array() - 0.5 * std::numbers::pi;
    deflate(v);
    normalize(v);
    double lambda = v.dot(f.K * v), prev = 0.0;
    int it = 0;
    for (; it < 500; ++it) {
        v = solver.solve(f.M * v);
        deflate(v);
        normalize(v);
        prev = lambda;
        lambda = v.dot(f.K * v);
        if (std::abs(lambda - prev) <= 1e-13 * lambda && it > 2) break;
    }
    if (it == 500) throw NumericalError("neumann_eigenvalue: inverse iteration did not converge");
    if (v(0) < 0.0) v = -v;
    return {lambda, g->theta, v, nodes, it + 1, std::abs(Mone.dot(v))};
}

double rayleigh_quotient(double k, const std::function<double(double)>& u, const std::function<double(double)>& du)
{
    const QuadOptions qo{1e-300, 1e-13, 400};
    auto z = [k](double t) { return k == 0.0 ? 1.0 : std::pow(std::sin(t), k); };
    const double num = integrate([&](double t) { return du(t) * du(t) * z(t); }, 0.0, std::numbers::pi, qo).value;
    const double den = integrate([&](double t) { return u(t) * u(t) * z(t); }, 0.0, std::numbers::pi, qo).value;
    if (!(den > 0.0)) throw DomainError("rayleigh_quotient: zero denominator");
    return num / den;
}

double discrete_rayleigh_quotient(double k, int nodes, const std::function<double(double)>& u)
{
    if (nodes < 3) throw PreconditionError("discrete_rayleigh_quotient: need at least 3 nodes");
    const auto g = make_angular_grid(nodes - 1, k, 0.0, std::numbers::pi);
    const Eigen::VectorXd v = g->theta.unaryExpr(u);
    double num = 0.0, den = 0.0;
    for (int e = 0; e < g->cells; ++e) {
        const double s = (v(e + 1) - v(e)) / g->h;
        num += s * s * g->moments(e, 0);
        den += cell_l2(*g, e, v(e), v(e + 1));
    }
    if (!(den > 0.0)) throw DomainError("discrete_rayleigh_quotient: zero denominator");
    return num / den;
}

double half_sphere_rayleigh(int N, double k)
{
    if (N < 2) throw PreconditionError("half_sphere_rayleigh: N must be at least 2");
    if (!(k >= 0.0)) throw PreconditionError("half_sphere_rayleigh: k must be nonnegative");
    // x_N = cos(phi), x_1 = sin(phi) xi_1 with xi on S^{N-2}; int xi_1^2 = |S^{N-2}| / (N-1).
    // |grad_S x_1|^2 = 1 - x_1^2, so the quotient is int x_N^k / int x_1^2 x_N^k - 1.
    const QuadOptions qo{1e-300, 1e-13, 400};
    const double half = 0.5 * std::numbers::pi;
    const double full = integrate([&](double p) { return std::pow(std::sin(p), N - 2) * std::pow(std::cos(p), k); },
                                  0.0, half, qo).value;
    const double x1 = integrate([&](double p) { return std::pow(std::sin(p), N) * std::pow(std::cos(p), k); },
                                0.0, half, qo).value / (N - 1);
    return full / x1 - 1.0;
}

double stability_rhs(int N, double r, double A, double dA, double d2A)
{
    if (!(r > 0.0)) throw DomainError("stability_rhs: r must be positive");
    if (!(A > 0.0)) throw DomainError("stability_rhs: A must be positive");
    const double L = dA / A;
    return (N - 1.0) + r * r * (L * L - d2A / A);
}

double stability_rhs(const Density& d, double r)
{
    d.validate();
    if (!(r > 0.0)) throw DomainError("stability_rhs: r must be positive");
    const double A = d.a * std::pow(r, d.k) * std::exp(d.c * r * r);
    const double L = d.k / r + 2.0 * d.c * r;  // A'/A
    const double dA = A * L;
    const double d2A = A * (L * L - d.k / (r * r) + 2.0 * d.c);
    return stability_rhs(d.N, r, A, dA, d2A);
}

} // namespace conedido
