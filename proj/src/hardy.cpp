#include "conedido/hardy.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "conedido/errors.hpp"
#include "conedido/quadrature.hpp"

namespace conedido {

void HardySpec::validate() const
{
    if (N < 2) throw PreconditionError("hardy: N must be at least 2");
    if (!(k >= 0.0)) throw PreconditionError("hardy: k must be nonnegative");
    if (!(m >= 0.0)) throw PreconditionError("hardy: m must be nonnegative");
    if (!experimental && m != std::floor(m))
        throw PreconditionError("hardy: m must be an integer (set experimental to allow other values)");
}

double hardy_constant_alt(const HardySpec& s)
{
    s.validate();
    const double h = 0.5 * (s.N + s.m + s.k);
    return h * h - s.m;
}

double hardy_constant(const HardySpec& s)
{
    s.validate();
    const double h = 0.5 * (s.N + s.m + s.k - 2.0);
    const double c = h * h + s.N + s.k - 1.0;
    const double alt = hardy_constant_alt(s);
    if (std::abs(c - alt) > 1e-12 * std::max(1.0, std::abs(c)))
        throw NumericalError("hardy_constant: closed forms disagree");
    return c;
}

QuarterSphereMoments quarter_sphere_moments(const HardySpec& s)
{
    s.validate();
    const QuadOptions qo{1e-300, 1e-13, 400};
    const double half = 0.5 * std::numbers::pi;
    const double k = s.k;
    auto pw = [](double x, double e) { return e == 0.0 ? 1.0 : std::pow(x, e); };
    double all, x1sq;
    if (s.N == 2) {
        // x_1 = cos(b), x_2 = sin(b), b in (0, pi/2)
        all = integrate([&](double b) { return pw(std::sin(b), k); }, 0.0, half, qo).value;
        x1sq = integrate([&](double b) { return std::cos(b) * std::cos(b) * pw(std::sin(b), k); }, 0.0, half, qo).value;
    } else {
        // (x_1, x_N) = sin(p) (cos b, sin b), middle coordinates cos(p) eta with eta on S^{N-3};
        // surface element sin(p) cos^{N-3}(p) dp db d(eta). The |S^{N-3}| factor cancels in
        // the quotients but is kept so the moments are the true integrals.
        const int n3 = s.N - 3;
        const double sphere = n3 == 0 ? 2.0 : 2.0 * std::pow(std::numbers::pi, 0.5 * (n3 + 1)) / std::tgamma(0.5 * (n3 + 1));
        auto radial = [&](double e) {
            return integrate([&](double p) { return pw(std::sin(p), e) * pw(std::cos(p), n3); }, 0.0, half, qo).value;
        };
        const double beta_all = integrate([&](double b) { return pw(std::sin(b), k); }, 0.0, half, qo).value;
        const double beta_x1 =
            integrate([&](double b) { return std::cos(b) * std::cos(b) * pw(std::sin(b), k); }, 0.0, half, qo).value;
        all = sphere * radial(1.0 + k) * beta_all;
        x1sq = sphere * radial(3.0 + k) * beta_x1;
    }
    return {x1sq, all - x1sq};  // |grad_S x_1|^2 = 1 - x_1^2
}

double separable_hardy_quotient(const HardySpec& s, const std::function<double(double)>& v,
                                const std::function<double(double)>& dv, const std::vector<double>& breakpoints)
{
    const auto mom = quarter_sphere_moments(s);
    const double e = s.N - 1.0 + s.k + s.m;
    // integrate in t = ln r to resolve exponentially wide supports
    std::vector<double> logs;
    for (double b : breakpoints) {
        if (!(b > 0.0)) throw PreconditionError("separable_hardy_quotient: breakpoints must be positive");
        logs.push_back(std::log(b));
    }
    const QuadOptions qo{1e-300, 1e-13, 2000};
    const double grad = integrate_pieces([&](double t) {
        const double r = std::exp(t);
        return dv(r) * dv(r) * std::pow(r, e + 1.0);
    }, logs, qo).value;
    const double val = integrate_pieces([&](double t) {
        const double r = std::exp(t);
        return v(r) * v(r) * std::pow(r, e - 1.0);
    }, logs, qo).value;
    if (!(val > 0.0)) throw DomainError("hardy quotient: zero denominator");
    return (mom.theta1 * grad + mom.gradient * val) / (mom.theta1 * val);
}

double QuarterGrid::r(int i) const { return r_min * std::exp(i * log_step); }

std::shared_ptr<const QuarterGrid> make_quarter_grid(int P, int M, double r_min, double r_max)
{
    if (P < 2 || M < 2) throw PreconditionError("quarter grid: need P >= 2 and M >= 2");
    if (!(r_min > 0.0 && r_max > r_min)) throw PreconditionError("quarter grid: need 0 < r_min < r_max");
    auto g = std::make_shared<QuarterGrid>();
    g->P = P;
    g->M = M;
    g->r_min = r_min;
    g->r_max = r_max;
    g->log_step = std::log(r_max / r_min) / P;
    g->dtheta = 0.5 * std::numbers::pi / M;
    return g;
}

QuarterFunction QuarterFunction::sample(std::shared_ptr<const QuarterGrid> grid,
                                        const std::function<double(double, double)>& u)
{
    Eigen::MatrixXd v(grid->P + 1, grid->M + 1);
    for (int i = 0; i <= grid->P; ++i)
        for (int j = 0; j <= grid->M; ++j) {
            const double r = grid->r(i), t = grid->theta(j);
            v(i, j) = u(r * std::cos(t), r * std::sin(t));
        }
    return {std::move(grid), std::move(v)};
}

HardyQuotient hardy_quotient(const QuarterFunction& u, const HardySpec& s)
{
    s.validate();
    if (s.N != 2) throw PreconditionError("hardy_quotient: grid quotient is planar (N = 2)");
    const auto& g = *u.grid;
    const auto& v = u.values;
    if (v.rows() != g.P + 1 || v.cols() != g.M + 1) throw PreconditionError("hardy_quotient: value shape mismatch");
    // Cells in (t = ln r, theta); with r = e^t, dx = r^2 dt dtheta and |grad u|^2 = r^-2 (u_t^2 + u_theta^2).
    const double ht = g.log_step, hb = g.dtheta;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.P; ++i) {
        const double r = g.r_min * std::exp((i + 0.5) * ht);
        const double radial = std::pow(r, s.k + s.m);  // |x|^m r^k; r^-2 of |grad|^2 cancels r^2 of dx
        for (int j = 0; j < g.M; ++j) {
            const double b = (j + 0.5) * hb;
            const double w = radial * (s.k == 0.0 ? 1.0 : std::pow(std::sin(b), s.k)) * ht * hb;
            const double a = v(i, j), bb = v(i + 1, j), c = v(i, j + 1), d = v(i + 1, j + 1);
            const double ut = 0.5 * ((bb - a) + (d - c)) / ht;
            const double ub = 0.5 * ((c - a) + (d - bb)) / hb;
            const double um = 0.25 * (a + bb + c + d);
            num += w * (ut * ut + ub * ub);
            den += w * um * um;
        }
    }
    if (!(den > 0.0)) throw DomainError("hardy_quotient: zero denominator");
    const double scale = v.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * scale;
    const bool axis = v.col(g.M).cwiseAbs().maxCoeff() <= tol;
    const bool outer = v.row(g.P).cwiseAbs().maxCoeff() <= tol;
    return {num / den, axis && outer};
}

double hardy_cutoff(int n, double t)
{
    const double lo = 1.0 / n;
    if (t <= lo || t >= 2.0 * n) return 0.0;
    if (t < 2.0 * lo) return std::log2(t * n);
    if (t <= n) return 1.0;
    return std::log2(2.0 * n / t);
}

namespace {

void check_n(int n)
{
    if (n < 2) throw PreconditionError("hardy_test_sequence: n must be at least 2");
    if (n > max_hardy_n)
        throw PreconditionError("hardy_test_sequence: n exceeds the grid budget; use n <= " +
                                std::to_string(max_hardy_n));
}

} // namespace

double hardy_test_sequence(const HardySpec& s, int n)
{
    s.validate();
    check_n(n);
    const double a = 1.0 - 0.5 * (s.N + s.m + s.k);  // v(r) = r^a psi_n(r)
    const double ln2 = std::numbers::ln2;
    auto dpsi = [n, ln2](double t) {
        if (t <= 1.0 / n || t >= 2.0 * n) return 0.0;
        if (t < 2.0 / n) return 1.0 / (t * ln2);
        if (t <= n) return 0.0;
        return -1.0 / (t * ln2);
    };
    auto v = [&](double r) { return std::pow(r, a) * hardy_cutoff(n, r); };
    auto dv = [&](double r) { return a * std::pow(r, a - 1.0) * hardy_cutoff(n, r) + std::pow(r, a) * dpsi(r); };
    return separable_hardy_quotient(s, v, dv, {1.0 / n, 2.0 / n, static_cast<double>(n), 2.0 * n});
}

HardyQuotient hardy_test_sequence_grid(const HardySpec& s, int n, int P, int M)
{
    s.validate();
    check_n(n);
    // Annulus [0.5/(2n), 4n] as in the test-sequence construction.
    const auto grid = make_quarter_grid(P, M, 0.25 / n, 4.0 * n);
    const double e = -0.5 * (s.N + s.m + s.k);
    return hardy_quotient(QuarterFunction::sample(grid,
                                                  [&](double x, double y) {
                                                      const double r = std::hypot(x, y);
                                                      return x * std::pow(r, e) * hardy_cutoff(n, r);
                                                  }),
                          s);
}

} // namespace conedido
