#include "conedido/density.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "conedido/errors.hpp"
#include "conedido/quadrature.hpp"

namespace conedido {

Density Density::half_space(double k, double c, int N, double a)
{
    Density d{a, k, c, N, Domain::HalfSpace};
    d.validate();
    return d;
}

Density Density::full_space(double c, int N, double a)
{
    Density d{a, 0.0, c, N, Domain::FullSpace};
    d.validate();
    return d;
}

void Density::validate() const
{
    if (!(a > 0.0) || !std::isfinite(a)) throw PreconditionError("density amplitude a must be positive");
    if (!(k >= 0.0) || !std::isfinite(k)) throw PreconditionError("density exponent k must be nonnegative");
    if (!(c >= 0.0) || !std::isfinite(c)) throw PreconditionError("density rate c must be nonnegative");
    if (N < 1) throw PreconditionError("dimension N must be at least 1");
    if (domain == Domain::FullSpace && k != 0.0)
        throw PreconditionError("FullSpace densities require k = 0");
}

double Density::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const
{
    const double xn = x(x.size() - 1);
    if (domain == Domain::HalfSpace && xn <= 0.0) return 0.0;
    const double base = k == 0.0 ? 1.0 : std::pow(xn, k);
    return a * base * std::exp(c * x.squaredNorm());
}

double unit_ball_volume(int n)
{
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double sine_power_integral(double k)
{
    return std::beta(0.5 * (k + 1.0), 0.5);
}

DensityConstants constants(const Density& d)
{
    d.validate();
    const double omega = unit_ball_volume(d.N - 1);
    // (N-1)/2 * B((k+1)/2, (N-1)/2) -> 1 as N -> 1 (the half-line has one direction).
    double C;
    if (d.domain == Domain::FullSpace)
        C = d.N * unit_ball_volume(d.N);
    else if (d.N == 1)
        C = 1.0;
    else
        C = 0.5 * (d.N - 1) * omega * std::beta(0.5 * (d.k + 1.0), 0.5 * (d.N - 1));
    return {C, sine_power_integral(d.k), omega};
}

double angular_constant(const Density& d)
{
    return constants(d).C_mu;
}

double psi(const Density& d, double r)
{
    if (!(r >= 0.0)) throw DomainError("psi: radius must be nonnegative, got " + std::to_string(r));
    if (r == 0.0) return 0.0;
    const double p = d.radial_power();
    const double c = d.c;
    // Substituting t = r s keeps the integrand shape fixed on [0, 1].
    auto integrand = [p, c, r](double s) {
        const double t = r * s;
        return std::exp(c * t * t) * (p == 0.0 ? 1.0 : std::pow(s, p));
    };
    // Relative accuracy near machine precision keeps psi smooth in r for the inverse.
    QuadOptions opts{1e-300, 1e-14, 200};
    const auto res = integrate(integrand, 0.0, 1.0, opts);
    return std::pow(r, p + 1.0) * res.value;
}

double radial_moment(double exponent, double c, double r)
{
    if (!(r >= 0.0)) throw DomainError("radial_moment: radius must be nonnegative");
    if (r == 0.0) return 0.0;
    const double x = c * r * r;
    const double p1 = exponent + 1.0;
    double term = 1.0;  // x^n / n!
    double sum = 1.0 / p1;
    for (int n = 1; n < 5000; ++n) {
        term *= x / n;
        const double add = term / (p1 + 2.0 * n);
        sum += add;
        if (n > x && add <= sum * 1e-17) break;
    }
    return std::pow(r, p1) * sum;
}

double psi_inv(const Density& d, double m)
{
    if (!(m >= 0.0)) throw DomainError("psi_inv: measure must be nonnegative, got " + std::to_string(m));
    if (m == 0.0) return 0.0;
    const double p1 = d.radial_power() + 1.0;
    // exp(ct^2) >= 1 gives psi(r) >= r^(p+1)/(p+1): hi is an upper bound for the root,
    // and psi(r) <= exp(c r^2) r^(p+1)/(p+1) gives the lower bound.
    double hi = std::pow(p1 * m, 1.0 / p1);
    double lo = hi * std::exp(-d.c * hi * hi / p1);
    while (lo > 0.0 && psi(d, lo) > m) lo *= 0.5;
    while (psi(d, hi) < m) hi *= 2.0;
    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        (psi(d, mid) < m ? lo : hi) = mid;
    }
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        const double f = psi(d, r) - m;
        if (std::abs(f) <= 1e-14 * m) break;
        const double slope = std::exp(d.c * r * r) * std::pow(r, p1 - 1.0);
        double next = r - f / slope;
        if (f < 0.0) lo = std::max(lo, r); else hi = std::min(hi, r);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - r) <= 4.0 * std::numeric_limits<double>::epsilon() * r) {
            r = next;
            break;
        }
        r = next;
    }
    return r;
}

double half_ball_measure(const Density& d, double R)
{
    if (!(R >= 0.0)) throw DomainError("half_ball_measure: radius must be nonnegative");
    return d.a * angular_constant(d) * psi(d, R);
}

double half_ball_perimeter(const Density& d, double R)
{
    if (!(R > 0.0)) throw DomainError("half_ball_perimeter: radius must be positive");
    return d.a * angular_constant(d) * std::exp(d.c * R * R) * std::pow(R, d.radial_power());
}

double star_radius(const Density& d, double tau)
{
    if (!(tau >= 0.0)) throw DomainError("star_radius: measure must be nonnegative");
    return psi_inv(d, tau / (d.a * angular_constant(d)));
}

double isoperimetric_profile(const Density& d, double tau)
{
    if (!(tau >= 0.0)) throw DomainError("isoperimetric_profile: measure must be nonnegative");
    if (tau == 0.0) return 0.0;
    const double r = star_radius(d, tau);
    return d.a * angular_constant(d) * std::exp(d.c * r * r) * std::pow(r, d.radial_power());
}

} // namespace conedido
