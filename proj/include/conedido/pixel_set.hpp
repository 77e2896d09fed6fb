#pragma once
//
// Occupancy grids over a rectangle in the closed upper half-plane, used as a
// brute-force representation for weighted Steiner symmetrization.
//

#include <functional>
#include <iosfwd>
#include <vector>

#include "conedido/density.hpp"

namespace conedido {

/// Cell (i, j) covers [x0 + i h, x0 + (i+1) h] x [y0 + j h, y0 + (j+1) h];
/// row j = 0 is the bottom row.
class PixelSet {
public:
    PixelSet(int width, int height, double h, double x0, double y0);

    static PixelSet from_predicate(int width, int height, double h, double x0, double y0,
                                   const std::function<bool(double, double)>& inside);

    int width() const { return width_; }
    int height() const { return height_; }
    double h() const { return h_; }
    double x0() const { return x0_; }
    double y0() const { return y0_; }

    double x_center(int i) const { return x0_ + (i + 0.5) * h_; }
    double y_center(int j) const { return y0_ + (j + 0.5) * h_; }

    bool operator()(int i, int j) const { return cells_[index(i, j)] != 0; }
    void set(int i, int j, bool v) { cells_[index(i, j)] = v ? 1 : 0; }
    int count() const;
    PixelSet cleared() const { return {width_, height_, h_, x0_, y0_}; }

    /// The grid is mirror-symmetric about x = 0.
    bool x_symmetric() const;

private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * width_ + i; }

    int width_, height_;
    double h_, x0_, y0_;
    std::vector<unsigned char> cells_;
};

/// Sum over occupied cells of the density at the cell center times h^2.
double grid_measure(const PixelSet& g, const Density& d);

/// Sum over exposed cell edges of the density at the edge midpoint times h.
/// Edges lying on y = 0 are not counted (perimeter relative to the half-plane).
double grid_perimeter(const PixelSet& g, const Density& d);

/// Each row replaced by the cells nearest x = 0 whose e^{c x^2}-length is
/// closest to the row's. Requires a grid symmetric about x = 0.
PixelSet steiner_x(const PixelSet& g, const Density& d);

/// Each column replaced by the lowest cells whose y^k e^{c y^2}-length is
/// closest to the column's. Requires y0 = 0.
PixelSet steiner_y(const PixelSet& g, const Density& d);

/// Text format: "width height h x0 y0", then height rows of 0/1, top row first.
void write_pixel_set(std::ostream& out, const PixelSet& g);
PixelSet read_pixel_set(std::istream& in);

} // namespace conedido
