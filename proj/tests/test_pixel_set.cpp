#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "conedido/errors.hpp"
#include "conedido/pixel_set.hpp"

using namespace conedido;
using std::numbers::pi;

namespace {

int symmetric_difference(const PixelSet& a, const PixelSet& b)
{
    int n = 0;
    for (int j = 0; j < a.height(); ++j)
        for (int i = 0; i < a.width(); ++i) n += a(i, j) != b(i, j);
    return n;
}

} // namespace

TEST_CASE("unit square")
{
    const auto flat = Density::half_space(0, 0);
    const double h = 1e-3;
    // lifted off the axis every side counts
    const auto lifted = PixelSet::from_predicate(1000, 2000, h, 0.0, 0.0, [](double, double y) { return y > 0.5 && y < 1.5; });
    CHECK(grid_measure(lifted, flat) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(grid_perimeter(lifted, flat) == doctest::Approx(4.0).epsilon(1e-3));
    // resting on y = 0 the bottom side is not perimeter relative to the half-plane
    const auto resting = PixelSet::from_predicate(1000, 1000, h, 0.0, 0.0, [](double, double) { return true; });
    CHECK(grid_measure(resting, flat) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(grid_perimeter(resting, flat) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("half-disk measure converges")
{
    const double h = 1.0 / 512;
    const auto g = PixelSet::from_predicate(1024, 512, h, -1.0, 0.0, [](double x, double y) { return x * x + y * y < 1.0; });
    CHECK(std::abs(grid_measure(g, Density::half_space(0, 0)) - pi / 2) <= 4 * h);
    const auto d = Density::half_space(1, 1);
    CHECK(std::abs(grid_measure(g, d) - half_ball_measure(d, 1.0)) <= 4 * h * std::exp(1.0));
}

TEST_CASE("half-disk is a fixed point up to one layer")
{
    const double h = 1.0 / 256;
    const auto d = Density::half_space(1.0, 0.5);
    const auto g = PixelSet::from_predicate(512, 256, h, -1.0, 0.0, [](double x, double y) { return x * x + y * y < 0.81; });
    const auto s = steiner_y(steiner_x(g, d), d);
    // boundary cells of the disk: about its perimeter over h
    CHECK(symmetric_difference(g, s) <= static_cast<int>(pi * 0.9 / h) + 8);
}

TEST_CASE("two blobs merge into centred slabs")
{
    const double h = 1.0 / 128;
    const auto flat = Density::half_space(0, 0);
    const auto g = PixelSet::from_predicate(256, 128, h, -1.0, 0.0, [](double x, double y) {
        return std::hypot(x - 0.5, y - 0.5) < 0.2 || std::hypot(x + 0.5, y - 0.5) < 0.2;
    });
    const auto s = steiner_x(g, flat);
    int rows = 0;
    for (int j = 0; j < s.height(); ++j) {
        int first = -1, last = -1, count = 0, before = 0;
        for (int i = 0; i < s.width(); ++i) {
            before += g(i, j);
            if (s(i, j)) {
                if (first < 0) first = i;
                last = i;
                ++count;
            }
        }
        CHECK(count == before);
        if (count > 0) {
            ++rows;
            CHECK(last - first + 1 == count);
            CHECK(first + last + 1 == s.width());
        }
    }
    CHECK(std::abs(grid_measure(s, flat) - grid_measure(g, flat)) <= 2 * h * h * rows);
    CHECK(grid_perimeter(s, flat) <= grid_perimeter(g, flat));
}

TEST_CASE("weighted symmetrization keeps measure and does not raise perimeter")
{
    const double h = 1.0 / 512;
    const auto d = Density::half_space(1.0, 0.5);
    const auto g = PixelSet::from_predicate(1024, 512, h, -1.0, 0.0, [](double x, double y) {
        const double u = (x - 0.3) / 0.4, v = (y - 0.45) / 0.2;
        return u * u + v * v < 1.0 || std::hypot(x + 0.4, y - 0.2) < 0.15;
    });
    const auto s = steiner_y(steiner_x(g, d), d);
    CHECK(grid_measure(s, d) == doctest::Approx(grid_measure(g, d)).epsilon(0.02));
    CHECK(grid_perimeter(s, d) <= grid_perimeter(g, d) + 4 * h * std::exp(0.5 * 2.0));
}

TEST_CASE("preconditions and text format")
{
    const auto d = Density::half_space(0, 0);
    CHECK_THROWS_AS(steiner_x(PixelSet(10, 4, 0.1, -0.4, 0.0), d), PreconditionError);
    CHECK_THROWS_AS(steiner_y(PixelSet(10, 4, 0.1, -0.5, 0.1), d), PreconditionError);
    CHECK_THROWS_AS(PixelSet(10, 4, 0.1, -0.5, -0.1), PreconditionError);
    CHECK_THROWS_AS(grid_measure(PixelSet(2, 2, 0.1, 0, 0), Density::half_space(0, 0, 3)), PreconditionError);

    auto g = PixelSet(6, 3, 0.25, -0.75, 0.0);
    g.set(1, 0, true);
    g.set(4, 2, true);
    std::stringstream ss;
    write_pixel_set(ss, g);
    const auto back = read_pixel_set(ss);
    CHECK(back.width() == 6);
    CHECK(back.height() == 3);
    CHECK(back(1, 0));
    CHECK(back(4, 2));
    CHECK(back.count() == 2);
    std::stringstream bad("6 3 0.25 -0.75 0\n000000\n0001\n");
    CHECK_THROWS_AS(read_pixel_set(bad), PreconditionError);
}
