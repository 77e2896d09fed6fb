#pragma once
//
// The weight family  d(mu) = a * x_N^k * exp(c |x|^2) dx  on the half-space
// {x_N > 0} (or the whole space when k = 0) and its closed-form geometry:
// radial cumulative weight psi, angular constant C_mu, half-ball measure and
// perimeter, and the isoperimetric profile I_mu.
//

#include <Eigen/Core>

namespace conedido {

enum class Domain { HalfSpace, FullSpace };

struct Density {
    double a = 1.0;
    double k = 0.0;
    double c = 0.0;
    int N = 2;
    Domain domain = Domain::HalfSpace;

    static Density half_space(double k, double c, int N = 2, double a = 1.0);
    static Density full_space(double c, int N, double a = 1.0);

    /// Throws PreconditionError unless a > 0, k >= 0, c >= 0, N >= 1 and FullSpace => k == 0.
    void validate() const;

    /// Exponent of the radial Jacobian-times-weight: t^(N+k-1).
    double radial_power() const { return N + k - 1.0; }

    /// Point density a * x_N^k * exp(c|x|^2); x has N entries, x_N is the last.
    double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

struct DensityConstants {
    double C_mu;   // angular constant
    double a_k;    // int_0^pi sin^k
    double omega;  // Lebesgue volume of the unit ball in dimension N-1
};

DensityConstants constants(const Density& d);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// int_0^pi sin^k(theta) d(theta) = B((k+1)/2, 1/2).
double sine_power_integral(double k);

/// psi(r) = int_0^r exp(c t^2) t^(N+k-1) dt, by adaptive quadrature.
double psi(const Density& d, double r);

/// Same integral via the positive power series
///   r^(p+1) * sum_n (c r^2)^n / (n! (p + 1 + 2n)),   p = exponent.
/// Independent of the quadrature path; used in hot loops over profile nodes.
double radial_moment(double exponent, double c, double r);

/// Inverse of psi: bracketing, bisection to relative width 1e-6, then safeguarded Newton.
double psi_inv(const Density& d, double m);

/// C_mu for HalfSpace; N * omega_N (the full sphere measure) for FullSpace.
double angular_constant(const Density& d);

/// mu(B_R cap R^N_+)  (or mu(B_R) for FullSpace) = a * C_mu * psi(R).
double half_ball_measure(const Density& d, double R);

/// P_mu(B_R cap R^N_+) relative to the half-space = a * C_mu * exp(c R^2) R^(N+k-1).
double half_ball_perimeter(const Density& d, double R);

/// Radius of the half-ball of measure tau.
double star_radius(const Density& d, double tau);

/// I_mu(tau): perimeter of the half-ball of measure tau.
double isoperimetric_profile(const Density& d, double tau);

template <class Derived>
Eigen::ArrayXd isoperimetric_profile(const Density& d, const Eigen::ArrayBase<Derived>& tau)
{
    return tau.derived().unaryExpr([&d](double t) { return isoperimetric_profile(d, t); });
}

template <class Derived>
Eigen::ArrayXd psi(const Density& d, const Eigen::ArrayBase<Derived>& r)
{
    return r.derived().unaryExpr([&d](double t) { return psi(d, t); });
}

} // namespace conedido
