#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conedido/errors.hpp"
#include "conedido/hardy.hpp"
#include "conedido/spectral.hpp"

using namespace conedido;
using std::numbers::pi;

TEST_CASE("first Neumann eigenvalue of the weighted half-circle")
{
    const auto e0 = neumann_eigenvalue(0.0, 4096);
    CHECK(e0.lambda1 == doctest::Approx(1.0).epsilon(1e-4));
    // eigenvector proportional to cos(theta)
    const double s = e0.eigenvector(0) / std::cos(e0.theta(0));
    double dev = 0.0;
    for (Eigen::Index j = 0; j < e0.theta.size(); ++j) dev = std::max(dev, std::abs(e0.eigenvector(j) - s * std::cos(e0.theta(j))));
    CHECK(dev <= 1e-4 * std::abs(s));
    CHECK(e0.constant_overlap <= 1e-10);
    CHECK(neumann_eigenvalue(1.0, 4096).lambda1 == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(neumann_eigenvalue(2.5, 4096).lambda1 == doctest::Approx(3.5).epsilon(1e-3));
    CHECK_THROWS(neumann_eigenvalue(1.0, 4));
}

TEST_CASE("eigenvalue converges at second order")
{
    for (double k : {0.5, 2.5}) {
        const double e1 = std::abs(neumann_eigenvalue(k, 256).lambda1 - (1 + k));
        const double e2 = std::abs(neumann_eigenvalue(k, 1024).lambda1 - (1 + k));
        const double order = std::log(e1 / e2) / std::log(4.0);
        CHECK(order >= 1.7);
        CHECK(order <= 2.3);
    }
}

TEST_CASE("Rayleigh quotients")
{
    auto c = [](double t) { return std::cos(t); };
    auto dc = [](double t) { return -std::sin(t); };
    for (double k : {0.0, 1.0, 2.5}) CHECK(rayleigh_quotient(k, c, dc) == doctest::Approx(1 + k).epsilon(1e-10));
    // any other mean-zero trial gives a larger value
    auto u = [](double t) { return std::cos(t) + 0.3 * std::cos(3 * t); };
    auto du = [](double t) { return -std::sin(t) - 0.9 * std::sin(3 * t); };
    CHECK(rayleigh_quotient(1.0, u, du) > 2.0);
    CHECK(discrete_rayleigh_quotient(1.0, 2048, c) == doctest::Approx(2.0).epsilon(1e-5));
    for (int N : {2, 3, 4})
        for (double k : {0.0, 1.0, 2.5}) CHECK(half_sphere_rayleigh(N, k) == doctest::Approx(N - 1 + k).epsilon(1e-10));
}

TEST_CASE("stability right-hand side")
{
    for (int N : {2, 3})
        for (double r : {0.3, 1.0, 2.0}) CHECK(stability_rhs(Density::half_space(0, 0, N), r) == doctest::Approx(N - 1.0));
    CHECK(stability_rhs(Density::half_space(3, 0, 2), 2.0) == doctest::Approx(4.0));
    CHECK(stability_rhs(Density::half_space(3, 0, 3), 2.0) == doctest::Approx(5.0));
    CHECK(stability_rhs(Density::half_space(1, 0.5, 3), 1.0) == doctest::Approx(2.0));
    CHECK_THROWS(stability_rhs(Density::half_space(1, 0.5), 0.0));
    // generic A(r): the closed-form route agrees with the derivative form
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int s = 0; s < 100; ++s) {
        const int N = 2 + static_cast<int>(rng() % 3);
        const double k = 4 * U(rng), c = U(rng), r = 0.1 + 2 * U(rng);
        const double A = std::pow(r, k) * std::exp(c * r * r);
        const double dA = A * (k / r + 2 * c * r);
        const double d2A = A * ((k / r + 2 * c * r) * (k / r + 2 * c * r) - k / (r * r) + 2 * c);
        const double v = stability_rhs(N, r, A, dA, d2A);
        CHECK(v == doctest::Approx(N - 1 + k - 2 * c * r * r).epsilon(1e-12).scale(1.0));
        CHECK(v <= N - 1 + k + 1e-12);
    }
}

TEST_CASE("Hardy constants")
{
    CHECK(hardy_constant({2, 0, 0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(hardy_constant({3, 1, 2}) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(hardy_constant({2, 2, 0}) == doctest::Approx(4.0).epsilon(1e-14));
    for (int N : {2, 3, 4})
        for (double k : {0.0, 0.5, 2.0})
            for (double m : {0.0, 1.0, 3.0}) {
                const HardySpec s{N, k, m};
                CHECK(std::abs(hardy_constant(s) - hardy_constant_alt(s)) <= 1e-12 * hardy_constant(s));
            }
    CHECK_THROWS_AS(hardy_constant({2, 0, 0.5}), PreconditionError);
    CHECK_NOTHROW(hardy_constant({2, 0, 0.5, true}));
}

TEST_CASE("quarter-sphere moments")
{
    // N = 2: int_0^{pi/2} cos^2 sin^k and int sin^2 sin^k
    const auto m = quarter_sphere_moments({2, 2.0, 0.0});
    CHECK(m.theta1 == doctest::Approx(pi / 16).epsilon(1e-12));
    CHECK(m.gradient == doctest::Approx(3 * pi / 16).epsilon(1e-12));
    // the ratio is the first eigenvalue N - 1 + k
    for (int N : {2, 3, 5})
        for (double k : {0.0, 1.0, 2.5}) {
            const auto q = quarter_sphere_moments({N, k, 0.0});
            CHECK(q.gradient / q.theta1 == doctest::Approx(N - 1 + k).epsilon(1e-11));
        }
}

TEST_CASE("Hardy quotients of admissible functions")
{
    const HardySpec s{2, 0, 0};
    const auto g = make_quarter_grid(400, 200, 1e-4, 1.0);
    const auto a = hardy_quotient(QuarterFunction::sample(g, [](double x, double y) { return x * (1 - std::hypot(x, y)); }), s);
    CHECK(a.admissible);
    CHECK(a.value > 1.0);
    // separable form with v = r (1 - r): 1 + int v'^2 r / int v^2 / r = 1 + (1/6) / (1/12)
    const double sep = separable_hardy_quotient(s, [](double r) { return r < 1 ? r * (1 - r) : 0.0; },
                                                [](double r) { return r < 1 ? 1 - 2 * r : 0.0; }, {1e-8, 1.0});
    CHECK(a.value == doctest::Approx(sep).epsilon(1e-3));
    CHECK(sep == doctest::Approx(3.0).epsilon(1e-6));
    const auto b = hardy_quotient(QuarterFunction::sample(g, [](double x, double y) { return 1 - std::hypot(x, y); }), s);
    CHECK_FALSE(b.admissible);
}

TEST_CASE("extremal sequence")
{
    // log-linear cutoff: Q_n = C + (2 / ln 2) / (ln(n^2 / 2) + 2 ln 2 / 3)
    for (const HardySpec& s : {HardySpec{2, 0, 0}, HardySpec{3, 1, 2}, HardySpec{2, 2, 0}}) {
        const double C = hardy_constant(s);
        double prev = 1e300;
        for (int n : {4, 8, 16, 32, 1024}) {
            const double q = hardy_test_sequence(s, n);
            const double closed = C + (2 / std::log(2.0)) / (std::log(n * n / 2.0) + 2 * std::log(2.0) / 3);
            CHECK(q == doctest::Approx(closed).epsilon(1e-9));
            CHECK(q > C);
            CHECK(q < prev);
            prev = q;
        }
    }
    CHECK(hardy_test_sequence({3, 1, 2}, 32) <= 1.1 * 7.0);
    const auto grid = hardy_test_sequence_grid({2, 0, 0}, 8, 800, 100);
    CHECK(grid.admissible);
    CHECK(grid.value == doctest::Approx(hardy_test_sequence({2, 0, 0}, 8)).epsilon(5e-3));
    CHECK_THROWS_AS(hardy_test_sequence({2, 0, 0}, 1), PreconditionError);
    CHECK_THROWS_AS(hardy_test_sequence({2, 0, 0}, max_hardy_n + 1), PreconditionError);
    CHECK(hardy_cutoff(8, 0.1) == 0.0);
    CHECK(hardy_cutoff(8, 1.0) == 1.0);
    CHECK(hardy_cutoff(8, 20.0) == 0.0);
}
