#include "conedido/starlike.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "conedido/errors.hpp"
#include "conedido/quadrature.hpp"

namespace conedido {

RadialProfile::RadialProfile(Density density, std::shared_ptr<const AngularGrid> grid, Eigen::VectorXd rho)
    : density_(density), grid_(std::move(grid)), rho_(std::move(rho))
{
    density_.validate();
    if (density_.N != 2) throw PreconditionError("radial profiles live in the plane (N = 2)");
    if (!grid_) throw PreconditionError("radial profile needs an angular grid");
    if (grid_->k != density_.k) throw PreconditionError("angular grid weight exponent differs from density k");
    if (std::abs(grid_->lo) > 0.0 || std::abs(grid_->hi - std::numbers::pi) > 1e-14)
        throw PreconditionError("radial profile grid must span [0, pi]");
    if (rho_.size() != grid_->cells + 1) throw PreconditionError("profile needs cells + 1 samples");
    if (!(rho_.array() > 0.0).all() || !rho_.allFinite())
        throw PreconditionError("profile samples must be positive and finite");
}

RadialProfile RadialProfile::constant(const Density& d, int cells, double R)
{
    return {d, make_angular_grid(cells, d.k, 0.0, std::numbers::pi), Eigen::VectorXd::Constant(cells + 1, R)};
}

RadialProfile RadialProfile::from_function(const Density& d, int cells, const std::function<double(double)>& rho)
{
    auto grid = make_angular_grid(cells, d.k, 0.0, std::numbers::pi);
    Eigen::VectorXd v = grid->theta.unaryExpr(rho);
    return {d, std::move(grid), std::move(v)};
}

bool RadialProfile::symmetric(double tol) const
{
    return (rho_ - rho_.reverse()).cwiseAbs().maxCoeff() <= tol * rho_.cwiseAbs().maxCoeff();
}

double profile_F(const Density& d, double r) { return radial_moment(d.k + 1.0, d.c, r); }

double profile_dF(const Density& d, double r) { return std::exp(d.c * r * r) * std::pow(r, d.k + 1.0); }

double profile_d2F(const Density& d, double r)
{
    return std::exp(d.c * r * r) * std::pow(r, d.k) * (2.0 * d.c * r * r + d.k + 1.0);
}

GValues profile_G(const Density& d, double r, double p)
{
    const double E = std::exp(d.c * r * r) * std::pow(r, d.k);
    const double L = 2.0 * d.c * r + d.k / r;           // E_r / E
    const double Er = E * L;
    const double Err = E * (L * L + 2.0 * d.c - d.k / (r * r));
    const double S = std::sqrt(r * r + p * p);
    const double S3 = S * S * S;
    return {E * S,
            Er * S + E * r / S,
            E * p / S,
            Err * S + 2.0 * Er * r / S + E * p * p / S3,
            Er * p / S - E * r * p / S3,
            E * r * r / S3};
}

double profile_measure(const RadialProfile& p)
{
    const auto& g = p.grid();
    const auto& rho = p.rho();
    double sum = 0.0;
    for (int e = 0; e < g.cells; ++e)
        sum += profile_F(p.density(), 0.5 * (rho(e) + rho(e + 1))) * g.moments(e, 0);
    return p.density().a * sum;
}

double profile_perimeter(const RadialProfile& p)
{
    const auto& g = p.grid();
    const auto& rho = p.rho();
    double sum = 0.0;
    for (int e = 0; e < g.cells; ++e) {
        const double mid = 0.5 * (rho(e) + rho(e + 1));
        const double slope = (rho(e + 1) - rho(e)) / g.h;
        sum += profile_G(p.density(), mid, slope).G * g.moments(e, 0);
    }
    return p.density().a * sum;
}

Eigen::VectorXd profile_measure_gradient(const RadialProfile& p)
{
    const auto& g = p.grid();
    const auto& rho = p.rho();
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(rho.size());
    for (int e = 0; e < g.cells; ++e) {
        const double v = 0.5 * profile_dF(p.density(), 0.5 * (rho(e) + rho(e + 1))) * g.moments(e, 0);
        grad(e) += v;
        grad(e + 1) += v;
    }
    return p.density().a * grad;
}

Eigen::VectorXd profile_perimeter_gradient(const RadialProfile& p)
{
    const auto& g = p.grid();
    const auto& rho = p.rho();
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(rho.size());
    for (int e = 0; e < g.cells; ++e) {
        const double mid = 0.5 * (rho(e) + rho(e + 1));
        const double slope = (rho(e + 1) - rho(e)) / g.h;
        const auto G = profile_G(p.density(), mid, slope);
        const double m0 = g.moments(e, 0);
        grad(e) += (0.5 * G.Gr - G.Gp / g.h) * m0;
        grad(e + 1) += (0.5 * G.Gr + G.Gp / g.h) * m0;
    }
    return p.density().a * grad;
}

Eigen::VectorXd profile_derivative(const RadialProfile& p)
{
    const auto& rho = p.rho();
    const double h = p.grid().h;
    const Eigen::Index n = rho.size();
    Eigen::VectorXd d(n);
    for (Eigen::Index j = 1; j + 1 < n; ++j) d(j) = (rho(j + 1) - rho(j - 1)) / (2.0 * h);
    d(0) = (-3.0 * rho(0) + 4.0 * rho(1) - rho(2)) / (2.0 * h);
    d(n - 1) = (3.0 * rho(n - 1) - 4.0 * rho(n - 2) + rho(n - 3)) / (2.0 * h);
    return d;
}

RadialProfile rescaled_to_measure(const RadialProfile& p, double m, double tol)
{
    if (!(m > 0.0)) throw DomainError("target measure must be positive");
    const auto& g = p.grid();
    const auto& rho = p.rho();
    const auto& d = p.density();
    Eigen::VectorXd mid(g.cells);
    for (int e = 0; e < g.cells; ++e) mid(e) = 0.5 * (rho(e) + rho(e + 1));

    // mu(lambda rho) scales like lambda^(k+2) when c = 0; start from that guess.
    const double m0 = profile_measure(p);
    double lambda = std::pow(m / m0, 1.0 / (d.k + 2.0));
    for (int it = 0; it < 100; ++it) {
        double f = 0.0, df = 0.0;
        for (int e = 0; e < g.cells; ++e) {
            const double r = lambda * mid(e);
            f += profile_F(d, r) * g.moments(e, 0);
            df += profile_dF(d, r) * mid(e) * g.moments(e, 0);
        }
        f = d.a * f - m;
        df *= d.a;
        if (std::abs(f) <= tol * m) return p.scaled(lambda);
        double next = lambda - f / df;
        if (!(next > 0.0)) next = 0.5 * lambda;
        lambda = next;
    }
    throw NumericalError("rescaled_to_measure: Newton iteration did not converge");
}

RadialProfile random_profile(const Density& d, int cells, double R, std::mt19937_64& rng, int max_mode,
                             double max_amplitude)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> amp(0.0, max_amplitude);
    std::vector<double> eps(max_mode);
    double l1 = 0.0;
    for (auto& e : eps) {
        e = unit(rng);
        l1 += std::abs(e);
    }
    const double scale = amp(rng) / std::max(l1, 1e-300);
    for (auto& e : eps) e *= scale;
    return RadialProfile::from_function(d, cells, [&](double t) {
        double v = 1.0;
        for (int i = 0; i < max_mode; ++i) v += eps[i] * std::sin((i + 1) * t);
        return R * std::max(v, 0.05);
    });
}

void write_profile_csv(std::ostream& out, const RadialProfile& p)
{
    out << "theta,rho\n";
    out.precision(17);
    for (int j = 0; j <= p.cells(); ++j) out << p.grid().theta(j) << ',' << p.rho()(j) << '\n';
}

RadialProfile read_profile_csv(std::istream& in, const Density& d)
{
    std::vector<double> theta, rho;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double t, r;
        if (!(ss >> t >> r)) {
            if (theta.empty()) continue;  // header
            throw PreconditionError("profile csv: malformed row at line " + std::to_string(lineno));
        }
        theta.push_back(t);
        rho.push_back(r);
    }
    if (theta.size() < 3) throw PreconditionError("profile csv: need at least three rows");
    const int cells = static_cast<int>(theta.size()) - 1;
    const double h = std::numbers::pi / cells;
    for (int j = 0; j <= cells; ++j)
        if (std::abs(theta[j] - j * h) > 1e-9)
            throw PreconditionError("profile csv: nodes must be theta_j = j*pi/M (row " + std::to_string(j) + ")");
    return {d, make_angular_grid(cells, d.k, 0.0, std::numbers::pi),
            Eigen::Map<Eigen::VectorXd>(rho.data(), static_cast<Eigen::Index>(rho.size()))};
}

// ---------------------------------------------------------------------------

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts))
{
    for (std::size_t j = 0; j < parts_.size(); ++j) {
        const auto& I = parts_[j];
        if (!(I.lo >= 0.0) || !(I.lo < I.hi) || !std::isfinite(I.hi))
            throw PreconditionError("interval set: need 0 <= a_j < b_j < inf");
        if (j > 0 && !(parts_[j - 1].hi < I.lo))
            throw PreconditionError("interval set: intervals must be disjoint and ordered");
    }
}

IntervalSymmetrization interval_symmetrize(const IntervalSet& s, const std::function<double(double)>& phi)
{
    if (s.empty()) return {IntervalSet{}, 0.0, 0.0, 0.0};
    const double top = s.parts().back().hi;

    constexpr int samples = 2048;
    double prev = phi(0.0);
    if (!(prev > 0.0)) throw PreconditionError("interval_symmetrize: weight must be positive");
    for (int i = 1; i <= samples; ++i) {
        const double t = top * i / samples;
        const double v = phi(t);
        if (v < prev - 1e-12 * std::abs(prev))
            throw PreconditionError("interval_symmetrize: weight decreases near t = " + std::to_string(t));
        prev = v;
    }

    const QuadOptions opts{1e-14, 1e-13, 200};
    double measure = 0.0, before = 0.0;
    for (const auto& I : s.parts()) {
        measure += integrate(phi, I.lo, I.hi, opts).value;
        before += phi(I.lo) + phi(I.hi);
    }

    // nu((0, d)) is increasing in d and nu((0, top)) >= measure.
    double lo = 0.0, hi = top;
    double d = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = integrate(phi, 0.0, d, opts).value - measure;
        if (std::abs(f) <= 1e-13 * std::max(1.0, measure)) break;
        (f < 0.0 ? lo : hi) = d;
        double next = d - f / phi(d);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        d = next;
    }
    return {IntervalSet({{0.0, d}}), measure, before, phi(0.0) + phi(d)};
}

} // namespace conedido
