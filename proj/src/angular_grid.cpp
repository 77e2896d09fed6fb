#include "conedido/angular_grid.hpp"

#include <cmath>

#include "conedido/errors.hpp"
#include "conedido/quadrature.hpp"

namespace conedido {

std::shared_ptr<const AngularGrid> make_angular_grid(int cells, double k, double lo, double hi)
{
    if (cells < 2) throw DomainError("angular grid needs at least two cells");
    if (!(hi > lo)) throw DomainError("angular grid needs hi > lo");
    if (!(k >= 0.0)) throw DomainError("angular weight exponent must be nonnegative");
    auto g = std::make_shared<AngularGrid>();
    g->cells = cells;
    g->k = k;
    g->lo = lo;
    g->hi = hi;
    g->h = (hi - lo) / cells;
    g->theta = Eigen::VectorXd::LinSpaced(cells + 1, lo, hi);
    g->moments.resize(cells, 3);
    g->node_weight = Eigen::VectorXd::Zero(cells + 1);

    const QuadOptions opts{1e-300, 1e-13, 100};
    for (int e = 0; e < cells; ++e) {
        const double t0 = lo + e * g->h;
        const double h = g->h;
        for (int p = 0; p < 3; ++p) {
            auto f = [&](double s) {
                const double z = k == 0.0 ? 1.0 : std::pow(std::sin(t0 + s * h), k);
                return z * (p == 0 ? 1.0 : (p == 1 ? s : s * s));
            };
            g->moments(e, p) = h * integrate(f, 0.0, 1.0, opts).value;
        }
        g->node_weight(e) += g->moments(e, 0) - g->moments(e, 1);
        g->node_weight(e + 1) += g->moments(e, 1);
    }
    return g;
}

} // namespace conedido
