#include "conedido/pixel_set.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "conedido/errors.hpp"

namespace conedido {

namespace {

double weight(const Density& d, double x, double y)
{
    return d.a * (d.k == 0.0 ? 1.0 : std::pow(y, d.k)) * std::exp(d.c * (x * x + y * y));
}

void require_plane(const Density& d)
{
    d.validate();
    if (d.N != 2) throw PreconditionError("pixel sets live in the plane (N = 2)");
}

// Number of leading entries of `w` whose partial sum is closest to `target`.
int nearest_prefix(const std::vector<double>& w, double target)
{
    double sum = 0.0, best = std::abs(target);
    int n = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sum += w[i];
        const double err = std::abs(sum - target);
        if (err < best) {
            best = err;
            n = static_cast<int>(i) + 1;
        }
    }
    return n;
}

} // namespace

PixelSet::PixelSet(int width, int height, double h, double x0, double y0)
    : width_(width), height_(height), h_(h), x0_(x0), y0_(y0)
{
    if (width < 1 || height < 1) throw PreconditionError("pixel set: width and height must be positive");
    if (!(h > 0.0) || !std::isfinite(h)) throw PreconditionError("pixel set: cell size must be positive");
    if (!(y0 >= 0.0)) throw PreconditionError("pixel set: cells must lie in y >= 0");
    cells_.assign(static_cast<std::size_t>(width) * height, 0);
}

PixelSet PixelSet::from_predicate(int width, int height, double h, double x0, double y0,
                                  const std::function<bool(double, double)>& inside)
{
    PixelSet g(width, height, h, x0, y0);
    for (int j = 0; j < height; ++j)
        for (int i = 0; i < width; ++i) g.set(i, j, inside(g.x_center(i), g.y_center(j)));
    return g;
}

int PixelSet::count() const { return static_cast<int>(std::count(cells_.begin(), cells_.end(), 1)); }

bool PixelSet::x_symmetric() const { return std::abs(2.0 * x0_ + width_ * h_) <= 1e-9 * width_ * h_; }

double grid_measure(const PixelSet& g, const Density& d)
{
    require_plane(d);
    const double h2 = g.h() * g.h();
    double sum = 0.0;
    for (int j = 0; j < g.height(); ++j)
        for (int i = 0; i < g.width(); ++i)
            if (g(i, j)) sum += weight(d, g.x_center(i), g.y_center(j));
    return sum * h2;
}

double grid_perimeter(const PixelSet& g, const Density& d)
{
    require_plane(d);
    const double h = g.h();
    const bool floor_on_axis = g.y0() == 0.0;
    auto occ = [&](int i, int j) {
        return i >= 0 && i < g.width() && j >= 0 && j < g.height() && g(i, j);
    };
    double sum = 0.0;
    for (int j = 0; j < g.height(); ++j) {
        const double yc = g.y_center(j);
        for (int i = 0; i <= g.width(); ++i)  // vertical edges left of column i
            if (occ(i - 1, j) != occ(i, j)) sum += weight(d, g.x0() + i * h, yc);
    }
    for (int j = 0; j <= g.height(); ++j) {  // horizontal edges below row j
        if (j == 0 && floor_on_axis) continue;
        const double ye = g.y0() + j * h;
        for (int i = 0; i < g.width(); ++i)
            if (occ(i, j - 1) != occ(i, j)) sum += weight(d, g.x_center(i), ye);
    }
    return sum * h;
}

PixelSet steiner_x(const PixelSet& g, const Density& d)
{
    require_plane(d);
    if (!g.x_symmetric()) throw PreconditionError("steiner_x: grid must be symmetric about x = 0");
    const int W = g.width();
    // Mirror pairs (i, W-1-i) ordered by distance from the axis; a middle column stands alone.
    std::vector<std::vector<int>> groups;
    std::vector<double> gw;
    if (W % 2 == 1) groups.push_back({W / 2});
    for (int i = (W - 1) / 2 - (W % 2 == 1 ? 1 : 0); i >= 0; --i) groups.push_back({i, W - 1 - i});
    for (const auto& grp : groups) {
        double s = 0.0;
        for (int i : grp) s += std::exp(d.c * g.x_center(i) * g.x_center(i));
        gw.push_back(s);
    }
    PixelSet out = g.cleared();
    for (int j = 0; j < g.height(); ++j) {
        double len = 0.0;
        for (int i = 0; i < W; ++i)
            if (g(i, j)) len += std::exp(d.c * g.x_center(i) * g.x_center(i));
        const int n = nearest_prefix(gw, len);
        for (int q = 0; q < n; ++q)
            for (int i : groups[q]) out.set(i, j, true);
    }
    return out;
}

PixelSet steiner_y(const PixelSet& g, const Density& d)
{
    require_plane(d);
    if (g.y0() != 0.0) throw PreconditionError("steiner_y: grid must start at y = 0");
    std::vector<double> w(g.height());
    for (int j = 0; j < g.height(); ++j) {
        const double y = g.y_center(j);
        w[j] = (d.k == 0.0 ? 1.0 : std::pow(y, d.k)) * std::exp(d.c * y * y);
    }
    PixelSet out = g.cleared();
    for (int i = 0; i < g.width(); ++i) {
        double len = 0.0;
        for (int j = 0; j < g.height(); ++j)
            if (g(i, j)) len += w[j];
        const int n = nearest_prefix(w, len);
        for (int j = 0; j < n; ++j) out.set(i, j, true);
    }
    return out;
}

void write_pixel_set(std::ostream& out, const PixelSet& g)
{
    out.precision(17);
    out << g.width() << ' ' << g.height() << ' ' << g.h() << ' ' << g.x0() << ' ' << g.y0() << '\n';
    std::string row(g.width(), '0');
    for (int j = g.height() - 1; j >= 0; --j) {
        for (int i = 0; i < g.width(); ++i) row[i] = g(i, j) ? '1' : '0';
        out << row << '\n';
    }
}

PixelSet read_pixel_set(std::istream& in)
{
    int width = 0, height = 0;
    double h = 0, x0 = 0, y0 = 0;
    if (!(in >> width >> height >> h >> x0 >> y0))
        throw PreconditionError("pixel set: header must be 'width height h x0 y0'");
    PixelSet g(width, height, h, x0, y0);
    for (int r = 0; r < height; ++r) {
        const int j = height - 1 - r;
        for (int i = 0; i < width; ++i) {
            char ch = 0;
            if (!(in >> ch) || (ch != '0' && ch != '1'))
                throw PreconditionError("pixel set: row " + std::to_string(r + 1) + " has a missing or bad cell");
            g.set(i, j, ch == '1');
        }
    }
    return g;
}

} // namespace conedido
