#include "conedido/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "conedido/errors.hpp"
#include "conedido/quadrature.hpp"

namespace conedido {

std::shared_ptr<const PolarGrid> make_polar_grid(int P, int M, double R_D)
{
    if (P < 2 || M < 2) throw PreconditionError("polar grid: need P >= 2 and M >= 2");
    if (!(R_D > 0.0) || !std::isfinite(R_D)) throw PreconditionError("polar grid: radius must be positive");
    auto g = std::make_shared<PolarGrid>();
    g->P = P;
    g->M = M;
    g->R_D = R_D;
    g->dr = R_D / P;
    g->dtheta = std::numbers::pi / M;
    return g;
}

namespace {

Eigen::VectorXd angular_dual_weights(int M, double k)
{
    const double h = std::numbers::pi / M;
    Eigen::VectorXd w(M + 1);
    const QuadOptions opts{1e-15, 1e-13, 100};
    for (int j = 0; j <= M; ++j) {
        const double lo = std::max(0.0, (j - 0.5) * h), hi = std::min(std::numbers::pi, (j + 0.5) * h);
        w(j) = k == 0.0 ? hi - lo
                        : conedido::integrate([k](double t) { return std::pow(std::sin(t), k); }, lo, hi, opts).value;
    }
    return w;
}

Eigen::VectorXd radial_shells(int P, double dr, double R, double exponent, double c)
{
    Eigen::VectorXd w(P + 1);
    double below = 0.0;
    for (int i = 0; i <= P; ++i) {
        const double hi = std::min(R, (i + 0.5) * dr);
        const double above = radial_moment(exponent, c, hi);
        w(i) = above - below;
        below = above;
    }
    return w;
}

void check_q(double q)
{
    if (!(q > 0.0 && q <= 2.0)) throw DomainError("gradient_qnorm: q must lie in (0, 2]");
}

// Second-order differences on a uniform grid; one-sided at both ends.
double diff(const auto& v, Eigen::Index i, Eigen::Index n, double h)
{
    if (i == 0) return (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
    if (i == n - 1) return (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) / (2.0 * h);
    return (v(i + 1) - v(i - 1)) / (2.0 * h);
}

} // namespace

Eigen::MatrixXd node_measure(const PolarGrid& g, const Density& d)
{
    d.validate();
    if (d.N != 2) throw PreconditionError("polar grids are planar (N = 2)");
    const Eigen::VectorXd ang = angular_dual_weights(g.M, d.k);
    const Eigen::VectorXd rad = radial_shells(g.P, g.dr, g.R_D, d.k + 1.0, d.c);
    return d.a * rad * ang.transpose();
}

GridFunction::GridFunction(std::shared_ptr<const PolarGrid> grid, Density density, Eigen::MatrixXd values)
    : grid_(std::move(grid)), density_(density), values_(std::move(values))
{
    if (!grid_) throw PreconditionError("grid function needs a grid");
    if (values_.rows() != grid_->P + 1 || values_.cols() != grid_->M + 1)
        throw PreconditionError("grid function: values must be (P+1) x (M+1)");
    if (!values_.allFinite()) throw PreconditionError("grid function: values must be finite");
    values_.row(0).setConstant(values_(0, 0));
    weights_ = std::make_shared<const Eigen::MatrixXd>(node_measure(*grid_, density_));
}

GridFunction GridFunction::sample(std::shared_ptr<const PolarGrid> grid, const Density& d,
                                  const std::function<double(double, double)>& f)
{
    Eigen::MatrixXd v(grid->P + 1, grid->M + 1);
    for (int i = 0; i <= grid->P; ++i)
        for (int j = 0; j <= grid->M; ++j) {
            const double r = grid->r(i), t = grid->theta(j);
            v(i, j) = f(r * std::cos(t), r * std::sin(t));
        }
    return {std::move(grid), d, std::move(v)};
}

double GridFunction::integrate(const std::function<double(double)>& phi) const
{
    return (values_.unaryExpr(phi).array() * weights_->array()).sum();
}

RadialFunction::RadialFunction(Density density, double radius, Eigen::VectorXd values)
    : density_(density), radius_(radius), values_(std::move(values))
{
    density_.validate();
    if (!(radius_ > 0.0)) throw PreconditionError("radial function: radius must be positive");
    if (values_.size() < 3) throw PreconditionError("radial function: need at least three samples");
    if (!values_.allFinite()) throw PreconditionError("radial function: values must be finite");
}

double RadialFunction::operator()(double r) const
{
    if (r < 0.0) r = -r;
    if (r > radius_) return 0.0;
    const double x = r / step();
    const int i = std::min(static_cast<int>(x), intervals() - 1);
    const double t = x - i;
    return (1.0 - t) * values_(i) + t * values_(i + 1);
}

bool RadialFunction::nonincreasing(double tol) const
{
    for (Eigen::Index i = 1; i < values_.size(); ++i)
        if (values_(i) > values_(i - 1) + tol) return false;
    return true;
}

Eigen::VectorXd radial_node_measure(const RadialFunction& f)
{
    const auto& d = f.density();
    return d.a * angular_constant(d)
         * radial_shells(f.intervals(), f.step(), f.radius(), d.radial_power(), d.c);
}

double integrate(const RadialFunction& f, const std::function<double(double)>& phi)
{
    // Phi of the piecewise-linear interpolant against a C_mu e^{c r^2} r^{N+k-1}, interval by interval.
    const auto& d = f.density();
    const double pw = d.radial_power();
    const QuadOptions qo{1e-300, 1e-11, 50};
    double sum = 0.0;
    for (int i = 0; i < f.intervals(); ++i) {
        const double lo = f.r(i), hi = f.r(i + 1), v0 = f.values()(i), v1 = f.values()(i + 1);
        sum += conedido::integrate([&](double r) {
            const double t = (r - lo) / (hi - lo);
            return phi((1.0 - t) * v0 + t * v1) * std::pow(r, pw) * std::exp(d.c * r * r);
        }, lo, hi, qo).value;
    }
    return d.a * angular_constant(d) * sum;
}

double distribution(const GridFunction& u, double t)
{
    if (t < 0.0) throw DomainError("distribution: t must be nonnegative");
    return ((u.values().array().abs() > t).cast<double>() * u.weights().array()).sum();
}

RearrangementTable::RearrangementTable(Eigen::VectorXd values, Eigen::VectorXd weights)
{
    if (values.size() != weights.size() || values.size() == 0)
        throw PreconditionError("rearrangement: values and weights must match and be nonempty");
    const Eigen::Index n = values.size();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(values(a)) > std::abs(values(b)); });
    sorted_.resize(n);
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sorted_(i) = std::abs(values(order[i]));
        w(i) = weights(order[i]);
    }
    cumulative_.resize(n + 1);
    cumulative_(0) = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) cumulative_(i + 1) = cumulative_(i) + w(i);
    total_ = cumulative_(n);

    std::vector<double> ks, kv;
    for (Eigen::Index i = 0; i < n;) {
        Eigen::Index j = i;
        while (j < n && sorted_(j) == sorted_(i)) ++j;
        ks.push_back(0.5 * (cumulative_(i) + cumulative_(j)));
        kv.push_back(sorted_(i));
        i = j;
    }
    knot_s_ = Eigen::Map<Eigen::VectorXd>(ks.data(), static_cast<Eigen::Index>(ks.size()));
    knot_v_ = Eigen::Map<Eigen::VectorXd>(kv.data(), static_cast<Eigen::Index>(kv.size()));

    std::vector<double> t;
    constexpr int levels = 256;
    for (int l = 0; l < levels; ++l) t.push_back(sup() * l / (levels - 1));
    if (kv.size() < 4096) t.insert(t.end(), kv.begin(), kv.end());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    thresholds_ = Eigen::Map<Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
}

double RearrangementTable::distribution(double t) const
{
    if (t < 0.0) throw DomainError("distribution: t must be nonnegative");
    // number of sorted values strictly greater than t
    const auto* b = sorted_.data();
    const auto* e = b + sorted_.size();
    const auto count = std::partition_point(b, e, [t](double v) { return v > t; }) - b;
    return cumulative_(count);
}

Eigen::VectorXd RearrangementTable::distribution_values() const
{
    return thresholds_.unaryExpr([this](double t) { return distribution(t); });
}

double RearrangementTable::u_star_step(double s) const
{
    if (s < 0.0) throw DomainError("u*: s must be nonnegative");
    const auto* b = cumulative_.data();
    const auto* e = b + cumulative_.size();
    const auto n = (std::upper_bound(b, e, s) - b) - 1;  // max n with S_n <= s
    return n < sorted_.size() ? sorted_(n) : 0.0;
}

double RearrangementTable::u_star(double s) const
{
    if (s < 0.0) throw DomainError("u*: s must be nonnegative");
    if (s > total_) return 0.0;
    const Eigen::Index n = knot_s_.size();
    if (s <= knot_s_(0)) return knot_v_(0);
    if (s >= knot_s_(n - 1)) return knot_v_(n - 1);
    const auto* b = knot_s_.data();
    const auto i = (std::upper_bound(b, b + n, s) - b) - 1;
    const double t = (s - knot_s_(i)) / (knot_s_(i + 1) - knot_s_(i));
    // monotone in s even when neighbouring levels differ in the last bits
    return std::max(knot_v_(i + 1), knot_v_(i) + t * (knot_v_(i + 1) - knot_v_(i)));
}

double RearrangementTable::integrate(const std::function<double(double)>& phi) const
{
    double sum = 0.0;
    for (Eigen::Index i = 0; i < sorted_.size(); ++i) sum += (cumulative_(i + 1) - cumulative_(i)) * phi(sorted_(i));
    return sum;
}

RearrangementTable decreasing_rearrangement(const GridFunction& u)
{
    // The origin row is one point: keep a single entry carrying the whole row's weight.
    const auto& v = u.values();
    const auto& w = u.weights();
    const Eigen::Index rows = v.rows(), cols = v.cols();
    Eigen::VectorXd vals(1 + (rows - 1) * cols), wts(1 + (rows - 1) * cols);
    vals(0) = v(0, 0);
    wts(0) = w.row(0).sum();
    Eigen::Index n = 1;
    for (Eigen::Index i = 1; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j, ++n) {
            vals(n) = v(i, j);
            wts(n) = w(i, j);
        }
    return {std::move(vals), std::move(wts)};
}

RadialFunction star_rearrangement(const RearrangementTable& table, const Density& d, int intervals)
{
    if (intervals < 2) throw PreconditionError("star_rearrangement: need at least two intervals");
    if (!(table.total_measure() > 0.0)) throw PreconditionError("star_rearrangement: empty domain");
    const double r_star = star_radius(d, table.total_measure());
    const double scale = d.a * angular_constant(d);
    Eigen::VectorXd values(intervals + 1);
    for (int i = 0; i <= intervals; ++i) {
        const double r = r_star * i / intervals;
        values(i) = table.u_star(std::min(table.total_measure(), scale * radial_moment(d.radial_power(), d.c, r)));
    }
    return {d, r_star, std::move(values)};
}

RadialFunction star_rearrangement(const GridFunction& u)
{
    return star_rearrangement(decreasing_rearrangement(u), u.density(), u.grid().P);
}

double gradient_qnorm(const GridFunction& u, double q)
{
    check_q(q);
    const auto& g = u.grid();
    const auto& v = u.values();
    const auto& w = u.weights();
    const Eigen::Index nr = g.P + 1, nt = g.M + 1;
    double sum = 0.0;
    for (Eigen::Index j = 0; j < nt; ++j) {
        const auto ray = v.col(j);
        // Origin node: radial one-sided difference along each ray, no angular part.
        sum += w(0, j) * std::pow(std::abs(diff(ray, 0, nr, g.dr)), q);
        for (Eigen::Index i = 1; i < nr; ++i) {
            const double ur = diff(ray, i, nr, g.dr);
            const double ut = diff(v.row(i), j, nt, g.dtheta) / g.r(static_cast<int>(i));
            sum += w(i, j) * std::pow(ur * ur + ut * ut, 0.5 * q);
        }
    }
    return sum;
}

double gradient_qnorm(const RadialFunction& u, double q)
{
    check_q(q);
    const Eigen::VectorXd w = radial_node_measure(u);
    const auto& v = u.values();
    const Eigen::Index n = v.size();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) sum += w(i) * std::pow(std::abs(diff(v, i, n, u.step())), q);
    return sum;
}

void write_grid_function_csv(std::ostream& out, const GridFunction& u)
{
    const auto& g = u.grid();
    out.precision(17);
    out << "P,M,R_D,k,c\n" << g.P << ',' << g.M << ',' << g.R_D << ',' << u.density().k << ','
        << u.density().c << "\ni,j,u\n";
    for (int i = 0; i <= g.P; ++i)
        for (int j = 0; j <= g.M; ++j) out << i << ',' << j << ',' << u.values()(i, j) << '\n';
}

GridFunction read_grid_function_csv(std::istream& in)
{
    std::string line;
    auto next_fields = [&](int lineno_hint) {
        if (!std::getline(in, line))
            throw PreconditionError("grid function csv: unexpected end of input near line " +
                                    std::to_string(lineno_hint));
        std::replace(line.begin(), line.end(), ',', ' ');
        return std::istringstream(line);
    };
    next_fields(1);  // column names
    auto hdr = next_fields(2);
    int P = 0, M = 0;
    double R = 0, k = 0, c = 0;
    if (!(hdr >> P >> M >> R >> k >> c)) throw PreconditionError("grid function csv: bad header values on line 2");
    next_fields(3);
    auto grid = make_polar_grid(P, M, R);
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(P + 1, M + 1, std::nan(""));
    int lineno = 3;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        int i, j;
        double x;
        if (!(ss >> i >> j >> x) || i < 0 || i > P || j < 0 || j > M)
            throw PreconditionError("grid function csv: bad row at line " + std::to_string(lineno));
        v(i, j) = x;
    }
    if (!v.allFinite()) throw PreconditionError("grid function csv: missing nodes");
    return {grid, Density::half_space(k, c), std::move(v)};
}

void write_rearrangement_csv(std::ostream& out, const RearrangementTable& table)
{
    out.precision(17);
    out << "t,m_mu,s,u_star\n";
    const auto& t = table.thresholds();
    const Eigen::Index n = t.size();
    for (Eigen::Index l = 0; l < n; ++l) {
        const double s = table.total_measure() * l / std::max<Eigen::Index>(n - 1, 1);
        out << t(l) << ',' << table.distribution(t(l)) << ',' << s << ',' << table.u_star(s) << '\n';
    }
}

} // namespace conedido
