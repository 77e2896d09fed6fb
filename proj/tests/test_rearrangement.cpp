#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "conedido/errors.hpp"
#include "conedido/rearrangement.hpp"

using namespace conedido;
using std::numbers::pi;

namespace {

double radial_abs(double x, double y) { return std::hypot(x, y); }

} // namespace

TEST_CASE("node weights are exact")
{
    const auto g = make_polar_grid(40, 30, 1.3);
    for (double k : {0.0, 1.0, 2.5})
        for (double c : {0.0, 0.5}) {
            const auto d = Density::half_space(k, c);
            CHECK(node_measure(*g, d).sum() == doctest::Approx(half_ball_measure(d, 1.3)).epsilon(1e-12));
        }
    CHECK_THROWS_AS(make_polar_grid(1, 4, 1.0), PreconditionError);
}

TEST_CASE("distribution of |x|")
{
    const auto flat = Density::half_space(0, 0);
    const auto g = make_polar_grid(256, 128, 1.0);
    const auto u = GridFunction::sample(g, flat, radial_abs);
    for (double t : {0.1, 0.4, 0.77})
        CHECK(std::abs(distribution(u, t) - 0.5 * pi * (1 - t * t)) <= 2 * pi * g->dr);
    CHECK(distribution(u, 0.0) == doctest::Approx(pi / 2).epsilon(1e-3));
    CHECK_THROWS_AS(distribution(u, -0.1), DomainError);

    const auto table = decreasing_rearrangement(u);
    for (double s : {0.05, 0.5, 1.0, 1.4})
        CHECK(std::abs(table.u_star(s) - std::sqrt(1 - 2 * s / pi)) <= 2 * g->dr);
    CHECK(table.total_measure() == doctest::Approx(pi / 2).epsilon(1e-12));
}

TEST_CASE("constant functions")
{
    const auto d = Density::half_space(1.0, 0.5);
    const auto g = make_polar_grid(32, 16, 1.0);
    const auto u = GridFunction::sample(g, d, [](double, double) { return 2.5; });
    const auto table = decreasing_rearrangement(u);
    for (double s : {0.0, 0.1, 0.5 * table.total_measure(), 0.999 * table.total_measure()}) {
        CHECK(table.u_star(s) == 2.5);
        CHECK(table.u_star_step(s) == 2.5);
    }
    // inf{t : m(t) <= mu(D)} = 0; the interpolated form keeps the last level up to mu(D)
    CHECK(table.u_star_step(table.total_measure()) == 0.0);
    CHECK(table.u_star(table.total_measure()) == 2.5);
    CHECK(table.u_star(1.01 * table.total_measure()) == 0.0);
    const auto star = star_rearrangement(u);
    CHECK(star.radius() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((star.values().array() - 2.5).abs().maxCoeff() == 0.0);
}

TEST_CASE("indicator of an annular sector")
{
    // the set is a union of dual cells, so its measure is exact
    const auto d = Density::half_space(1.0, 0.5);
    const auto g = make_polar_grid(20, 12, 1.0);
    const double r0 = 0.325, r1 = 0.625, t1 = 3.5 * pi / 12;
    const auto u = GridFunction::sample(g, d, [&](double x, double y) {
        const double r = std::hypot(x, y), t = std::atan2(y, x);
        return r > r0 && r < r1 && t < t1 ? 1.0 : 0.0;
    });
    const double exact = (radial_moment(2.0, 0.5, r1) - radial_moment(2.0, 0.5, r0)) * (1.0 - std::cos(t1));
    const auto table = decreasing_rearrangement(u);
    CHECK(table.distribution(0.5) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(table.distribution(1.0) == 0.0);
    CHECK(table.u_star_step(0.5 * exact) == 1.0);
    CHECK(table.u_star_step(1.5 * exact) == 0.0);
    CHECK(table.integrate([](double v) { return v; }) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("star rearrangement of |x|")
{
    const auto flat = Density::half_space(0, 0);
    const auto g = make_polar_grid(256, 256, 1.0);
    const auto star = star_rearrangement(GridFunction::sample(g, flat, radial_abs));
    double err = 0.0;
    for (int i = 0; i <= star.intervals(); ++i)
        err = std::max(err, std::abs(star.values()(i) - std::sqrt(std::max(0.0, 1 - star.r(i) * star.r(i)))));
    CHECK(err <= 2 * g->dr);
    CHECK(star.nonincreasing());
}

TEST_CASE("radial nonincreasing functions are fixed points")
{
    const auto d = Density::half_space(2.0, 0.5);
    const auto g = make_polar_grid(128, 64, 1.0);
    const auto u = GridFunction::sample(g, d, [](double x, double y) { return std::cos(1.2 * std::hypot(x, y)); });
    const auto star = star_rearrangement(u);
    for (int i = 0; i <= star.intervals(); ++i)
        CHECK(std::abs(star.values()(i) - std::cos(1.2 * star.r(i))) <= 2 * g->dr);
}

TEST_CASE("equimeasurability")
{
    const auto d = Density::half_space(1.0, 1.0);
    const auto g = make_polar_grid(128, 128, 1.0);
    const auto u = GridFunction::sample(g, d, [](double x, double y) { return std::sin(3 * x) * (1 - x * x - y * y) + 0.3 * y; });
    const auto table = decreasing_rearrangement(u);
    auto sq = [](double v) { return v * v; };
    CHECK(table.integrate(sq) == doctest::Approx(u.integrate([](double v) { return v * v; })).epsilon(1e-12));
    CHECK(integrate(star_rearrangement(u), sq) == doctest::Approx(u.integrate(sq)).epsilon(2e-3));
    const auto star = star_rearrangement(u);
    CHECK(integrate(star, [](double) { return 1.0; }) == doctest::Approx(half_ball_measure(d, 1.0)).epsilon(1e-12));
}

TEST_CASE("gradient norms")
{
    const auto flat = Density::half_space(0, 0);
    const auto g = make_polar_grid(256, 256, 1.0);
    const auto u = GridFunction::sample(g, flat, radial_abs);
    CHECK(gradient_qnorm(u, 2.0) == doctest::Approx(pi / 2).epsilon(1e-3));
    CHECK(gradient_qnorm(u, 1.0) == doctest::Approx(pi / 2).epsilon(1e-3));
    const auto p = GridFunction::sample(g, flat, [](double x, double y) { return 1 - x * x - y * y; });
    CHECK(gradient_qnorm(p, 2.0) == doctest::Approx(pi).epsilon(1e-3));
    CHECK_THROWS_AS(gradient_qnorm(u, 2.5), DomainError);
    CHECK_THROWS_AS(gradient_qnorm(u, 0.0), DomainError);
}

TEST_CASE("Polya-Szego on a non-radial function")
{
    const auto d = Density::half_space(1.0, 0.5);
    const auto g = make_polar_grid(192, 192, 1.0);
    const auto u = GridFunction::sample(g, d, [](double x, double y) {
        const double r2 = x * x + y * y;
        return r2 < 1 ? (1 - r2) * (1 - r2) * (1 + 0.8 * x) * (1 + y) : 0.0;
    });
    const auto star = star_rearrangement(u);
    for (double q : {0.5, 1.0, 1.5, 2.0}) CHECK(gradient_qnorm(star, q) <= gradient_qnorm(u, q) * (1 + 1e-3));
}

TEST_CASE("grid function csv")
{
    const auto d = Density::half_space(1.0, 0.5);
    const auto g = make_polar_grid(8, 6, 1.5);
    const auto u = GridFunction::sample(g, d, [](double x, double y) { return x + 2 * y; });
    std::stringstream ss;
    ss.precision(17);
    write_grid_function_csv(ss, u);
    const auto v = read_grid_function_csv(ss);
    CHECK(v.grid().P == 8);
    CHECK(v.grid().R_D == 1.5);
    CHECK(v.density().k == 1.0);
    CHECK((v.values() - u.values()).cwiseAbs().maxCoeff() <= 1e-15);
    std::stringstream bad("P,M,R_D,k,c\n8 6\n");
    CHECK_THROWS_AS(read_grid_function_csv(bad), PreconditionError);
    std::ostringstream table;
    write_rearrangement_csv(table, decreasing_rearrangement(u));
    CHECK(table.str().find("t,m_mu,s,u_star") == 0);
}
