#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "conedido/errors.hpp"
#include "conedido/pixel_set.hpp"
#include "conedido/quadrature.hpp"
#include "conedido/starlike.hpp"

using namespace conedido;
using std::numbers::pi;

namespace {

// Arclength of the closed-form polar curve by a fine polyline.
double polyline_length(const std::function<double(double)>& rho, int n)
{
    double len = 0.0;
    double x0 = rho(0.0), y0 = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double t = pi * i / n;
        const double x = rho(t) * std::cos(t), y = rho(t) * std::sin(t);
        len += std::hypot(x - x0, y - y0);
        x0 = x;
        y0 = y;
    }
    return len;
}

double polar_measure(const Density& d, const std::function<double(double)>& rho)
{
    return integrate([&](double t) {
        return integrate([&](double r) {
            return std::pow(r * std::sin(t), d.k) * std::exp(d.c * r * r) * r;
        }, 0.0, rho(t), {1e-300, 1e-13, 400}).value;
    }, 0.0, pi, {1e-300, 1e-12, 400}).value;
}

} // namespace

TEST_CASE("angular grid moments")
{
    const auto g = make_angular_grid(64, 1.5, 0.0, pi);
    CHECK(g->total_weight() == doctest::Approx(sine_power_integral(1.5)).epsilon(1e-13));
    CHECK(g->node_weight.sum() == doctest::Approx(sine_power_integral(1.5)).epsilon(1e-13));
    for (int e : {0, 17, 63})
        for (int p = 0; p < 3; ++p) {
            const double t0 = g->theta(e);
            const double q = integrate([&](double t) { return std::pow((t - t0) / g->h, p) * std::pow(std::sin(t), 1.5); },
                                       t0, t0 + g->h, {1e-300, 1e-14, 400}).value;
            CHECK(g->moments(e, p) == doctest::Approx(q).epsilon(1e-11));
        }
    CHECK_THROWS_AS(make_angular_grid(1, 0.0, 0.0, pi), DomainError);
}

TEST_CASE("constant profile matches half-ball closed forms")
{
    for (double k : {0.0, 1.0, 2.5})
        for (double c : {0.0, 0.5, 1.0}) {
            const auto d = Density::half_space(k, c);
            const auto p = RadialProfile::constant(d, 4096, 1.3);
            CHECK(profile_measure(p) == doctest::Approx(half_ball_measure(d, 1.3)).epsilon(1e-8));
            CHECK(profile_perimeter(p) == doctest::Approx(half_ball_perimeter(d, 1.3)).epsilon(1e-6));
        }
    const auto flat = RadialProfile::constant(Density::half_space(0, 0), 64, 1.0);
    CHECK(profile_measure(flat) == doctest::Approx(pi / 2).epsilon(1e-3));
    CHECK(profile_perimeter(flat) == doctest::Approx(pi).epsilon(1e-3));
}

TEST_CASE("perimeter of a perturbed disk against a polyline")
{
    auto rho = [](double t) { return 1.0 + 0.3 * std::sin(2.0 * t); };
    const auto p = RadialProfile::from_function(Density::half_space(0, 0), 4096, rho);
    CHECK(std::abs(profile_perimeter(p) - polyline_length(rho, 1 << 20)) <= 1e-5);
}

TEST_CASE("measure of a perturbed disk against independent oracles")
{
    auto rho = [](double t) { return 1.0 + 0.3 * std::sin(2.0 * t); };
    const auto d = Density::half_space(1.0, 0.5);
    const auto p = RadialProfile::from_function(d, 2048, rho);
    const double m = profile_measure(p);
    CHECK(m == doctest::Approx(polar_measure(d, rho)).epsilon(1e-6));

    const double h = 1e-3;
    const auto g = PixelSet::from_predicate(2800, 1400, h, -1.4, 0.0, [&](double x, double y) {
        return std::hypot(x, y) < rho(std::atan2(y, x));
    });
    CHECK(grid_measure(g, d) == doctest::Approx(m).epsilon(2e-3));
}

TEST_CASE("gradients match finite differences")
{
    const auto d = Density::half_space(1.0, 0.5);
    const auto p = RadialProfile::from_function(d, 32, [](double t) { return 1.0 + 0.2 * std::cos(3.0 * t) + 0.1 * t; });
    const Eigen::VectorXd gm = profile_measure_gradient(p), gp = profile_perimeter_gradient(p);
    const double eps = 1e-6;
    for (int j : {0, 5, 16, 32}) {
        Eigen::VectorXd up = p.rho(), dn = p.rho();
        up(j) += eps;
        dn(j) -= eps;
        const double fm = (profile_measure(p.with_rho(up)) - profile_measure(p.with_rho(dn))) / (2 * eps);
        const double fp = (profile_perimeter(p.with_rho(up)) - profile_perimeter(p.with_rho(dn))) / (2 * eps);
        CHECK(gm(j) == doctest::Approx(fm).epsilon(1e-7));
        CHECK(gp(j) == doctest::Approx(fp).epsilon(1e-7));
    }
}

TEST_CASE("G and F derivatives")
{
    const auto d = Density::half_space(2.0, 0.7);
    const double r = 1.1, q = -0.4, e = 1e-5;
    const auto g = profile_G(d, r, q);
    CHECK(g.G == doctest::Approx(std::exp(0.7 * r * r) * r * r * std::hypot(r, q)).epsilon(1e-14));
    CHECK(g.Gr == doctest::Approx((profile_G(d, r + e, q).G - profile_G(d, r - e, q).G) / (2 * e)).epsilon(1e-8));
    CHECK(g.Gp == doctest::Approx((profile_G(d, r, q + e).G - profile_G(d, r, q - e).G) / (2 * e)).epsilon(1e-8));
    CHECK(g.Grr == doctest::Approx((profile_G(d, r + e, q).Gr - profile_G(d, r - e, q).Gr) / (2 * e)).epsilon(1e-7));
    CHECK(g.Grp == doctest::Approx((profile_G(d, r, q + e).Gr - profile_G(d, r, q - e).Gr) / (2 * e)).epsilon(1e-7));
    CHECK(g.Gpp == doctest::Approx((profile_G(d, r, q + e).Gp - profile_G(d, r, q - e).Gp) / (2 * e)).epsilon(1e-7));
    CHECK(profile_dF(d, r) == doctest::Approx((profile_F(d, r + e) - profile_F(d, r - e)) / (2 * e)).epsilon(1e-8));
    CHECK(profile_d2F(d, r) == doctest::Approx((profile_dF(d, r + e) - profile_dF(d, r - e)) / (2 * e)).epsilon(1e-7));
}

TEST_CASE("rescaling and random profiles")
{
    const auto d = Density::half_space(1.0, 1.0);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_profile(d, 128, 1.0, rng);
        CHECK(p.rho().minCoeff() >= 0.05);
        const auto q = rescaled_to_measure(p, 0.8);
        CHECK(profile_measure(q) == doctest::Approx(0.8).epsilon(1e-12));
        // a rescaled profile is a radial dilation
        CHECK((q.rho().array() / p.rho().array() - q.rho()(0) / p.rho()(0)).abs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("profile validation and csv")
{
    const auto d = Density::half_space(1.0, 0.5);
    const auto g = make_angular_grid(8, 1.0, 0.0, pi);
    CHECK_THROWS(RadialProfile(d, g, Eigen::VectorXd::Ones(5)));
    CHECK_THROWS(RadialProfile(d, g, -Eigen::VectorXd::Ones(9)));
    CHECK_THROWS(RadialProfile(d, make_angular_grid(8, 2.0, 0.0, pi), Eigen::VectorXd::Ones(9)));
    CHECK_THROWS(RadialProfile::constant(Density::half_space(0, 0, 3), 8, 1.0));

    const auto p = RadialProfile::from_function(d, 16, [](double t) { return 1.0 + 0.1 * std::sin(t); });
    std::stringstream ss;
    write_profile_csv(ss, p);
    const auto q = read_profile_csv(ss, d);
    CHECK((q.rho() - p.rho()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(p.symmetric(1e-14));
}

TEST_CASE("interval symmetrization")
{
    auto one = [](double) { return 1.0; };
    const auto a = interval_symmetrize(IntervalSet({{1.0, 2.0}}), one);
    REQUIRE(a.result.parts().size() == 1);
    CHECK(a.result.parts()[0].lo == 0.0);
    CHECK(a.result.parts()[0].hi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.perimeter_before == doctest::Approx(2.0));
    CHECK(a.perimeter_after == doctest::Approx(2.0));

    // nu = 3/2 + 7/2 = 5, so d*^2/2 + d* = 5
    const auto b = interval_symmetrize(IntervalSet({{0.0, 1.0}, {2.0, 3.0}}), [](double t) { return t + 1.0; });
    CHECK(b.measure == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(b.result.parts()[0].hi == doctest::Approx(std::sqrt(11.0) - 1.0).epsilon(1e-12));
    CHECK(b.perimeter_before == doctest::Approx(10.0));
    CHECK(b.perimeter_after == doctest::Approx(1.0 + std::sqrt(11.0)).epsilon(1e-12));
    CHECK(b.perimeter_after < b.perimeter_before);

    const auto c = interval_symmetrize(IntervalSet({{0.0, 0.75}}), [](double t) { return std::exp(t * t); });
    CHECK(c.result.parts()[0].hi == doctest::Approx(0.75).epsilon(1e-12));

    CHECK_THROWS_AS(interval_symmetrize(IntervalSet({{0.0, 2.0}}), [](double t) { return 2.0 - t; }), PreconditionError);
}
