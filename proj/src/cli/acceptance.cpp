#include "conedido/cli/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "conedido/degenerate_pde.hpp"
#include "conedido/density.hpp"
#include "conedido/hardy.hpp"
#include "conedido/isoperimetric.hpp"
#include "conedido/pixel_set.hpp"
#include "conedido/rearrangement.hpp"
#include "conedido/spectral.hpp"
#include "conedido/starlike.hpp"

namespace conedido::cli {

using json = nlohmann::ordered_json;

namespace {

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Check {
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
};

// ---------------------------------------------------------------------------

CriterionResult profile_consistency(bool)
{
    CriterionResult r{1, "Profile consistency", false, {}, 0.0, 10.0, {}};
    double worst = 0.0;
    for (int N : {2, 3})
        for (double k : {0.0, 1.0, 2.5})
            for (double c : {0.0, 0.5, 1.0})
                for (double R : {0.1, 0.5, 1.0, 2.0, 5.0}) {
                    const auto d = Density::half_space(k, c, N);
                    const double P = half_ball_perimeter(d, R);
                    worst = std::max(worst, std::abs(isoperimetric_profile(d, half_ball_measure(d, R)) - P) / P);
                }
    r.pass = worst <= 1e-8;
    r.detail = "max relative |I(mu(B_R)) - P(B_R)| = " + fmt("%.2e", worst) + " (limit 1e-8)";
    r.data = {{"max_relative_error", worst}};
    return r;
}

CriterionResult measure_oracle(bool quick)
{
    CriterionResult r{2, "Measure oracle (Monte Carlo)", false, {}, 0.0, 120.0, {}};
    const long samples = quick ? 1000000 : 10000000;
    const double R = 1.0;
    double worst_z = 0.0;
    json rows = json::array();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int N : {2, 3})
        for (double k : {0.0, 1.0, 2.5})
            for (double c : {0.0, 0.5, 1.0}) {
                const auto d = Density::half_space(k, c, N);
                const double box = std::pow(2.0 * R, N - 1) * R;
                double s1 = 0.0, s2 = 0.0;
                for (long n = 0; n < samples; ++n) {
                    double r2 = 0.0;
                    for (int i = 0; i + 1 < N; ++i) {
                        const double x = R * (2.0 * U(rng) - 1.0);
                        r2 += x * x;
                    }
                    const double y = R * U(rng);
                    r2 += y * y;
                    if (r2 >= R * R) continue;
                    const double w = d.a * (k == 0.0 ? 1.0 : std::pow(y, k)) * std::exp(c * r2);
                    s1 += w;
                    s2 += w * w;
                }
                const double mean = s1 / samples;
                const double var = s2 / samples - mean * mean;
                const double est = box * mean;
                const double se = box * std::sqrt(var / samples);
                const double exact = half_ball_measure(d, R);
                const double z = std::abs(est - exact) / se;
                worst_z = std::max(worst_z, z);
                rows.push_back({{"N", N}, {"k", k}, {"c", c}, {"exact", exact}, {"estimate", est}, {"se", se}, {"z", z}});
            }
    r.pass = worst_z <= 3.0;
    r.detail = std::to_string(samples) + " samples per case, max |error|/SE = " + fmt("%.2f", worst_z) + " (limit 3)";
    r.data = {{"samples", samples}, {"max_z", worst_z}, {"cases", rows}};
    return r;
}

CriterionResult isoperimetric_property(bool quick)
{
    CriterionResult r{3, "Isoperimetric property (N = 2)", false, {}, 0.0, 300.0, {}};
    const int per = quick ? 100 : 1000;
    const int M = 1024;
    double worst = std::numeric_limits<double>::infinity(), worst_eq = 0.0;
    std::mt19937_64 rng(31337);
    for (double k : {0.0, 0.5, 1.0, 2.0})
        for (double c : {0.0, 0.5, 1.0}) {
            const auto d = Density::half_space(k, c);
            const double m = half_ball_measure(d, 1.0);
            const double Pstar = half_ball_perimeter(d, 1.0);
            worst_eq = std::max(worst_eq, std::abs(verify_isoperimetric(RadialProfile::constant(d, M, 1.0))) / Pstar);
            for (int s = 0; s < per; ++s) {
                const auto p = rescaled_to_measure(random_profile(d, M, 1.0, rng), m);
                worst = std::min(worst, verify_isoperimetric(p) / Pstar);
            }
        }
    r.pass = worst >= -1e-6 && worst_eq <= 1e-6;
    r.detail = std::to_string(per) + " profiles x 12 densities, min margin/P* = " + fmt("%.3e", worst) +
               " (limit -1e-6), equality case " + fmt("%.1e", worst_eq) + " (limit 1e-6)";
    r.data = {{"profiles_per_density", per}, {"min_relative_margin", worst}, {"equality_case", worst_eq}};
    return r;
}

CriterionResult dido_flow(bool)
{
    CriterionResult r{4, "Dido flow", false, {}, 0.0, 60.0, {}};
    const auto d = Density::half_space(1.0, 0.5);
    const auto p0 = RadialProfile::from_function(d, 512, [](double t) { return 1.0 + 0.3 * std::sin(2.0 * t); });
    const double m = profile_measure(p0);
    FlowOptions opts;
    opts.max_iterations = 100000;
    const auto res = minimize_perimeter(m, p0, opts);
    const double Rs = star_radius(d, m);
    const double dev = (res.profile.rho().array() - Rs).abs().maxCoeff() / Rs;
    const double I = isoperimetric_profile(d, m);
    const double perr = std::abs(res.perimeter - I) / I;
    r.pass = res.converged && res.iterations <= 100000 && dev <= 1e-3 && perr <= 1e-4;
    r.detail = std::to_string(res.iterations) + " iterations, sup|rho-R*|/R* = " + fmt("%.2e", dev) +
               " (limit 1e-3), perimeter rel. error " + fmt("%.2e", perr) + " (limit 1e-4)";
    r.data = {{"iterations", res.iterations}, {"converged", res.converged}, {"sup_deviation", dev},
              {"perimeter_relative_error", perr}, {"R_star", Rs}};
    return r;
}

CriterionResult euler_and_second_variation(bool)
{
    CriterionResult r{5, "Euler residual and second variation", false, {}, 0.0, 30.0, {}};
    struct Case {
        double k, c, R;
    };
    const Case cases[] = {{0.0, 0.0, 1.0}, {1.0, 0.5, 2.0}, {2.0, 1.0, 1.0}, {2.5, 0.5, 0.7}};
    double worst_res = 0.0, worst_q = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> Z;
    for (const auto& cs : cases) {
        const auto d = Density::half_space(cs.k, cs.c);
        const auto p = RadialProfile::constant(d, 2048, cs.R);
        const double gamma = lagrange_multiplier(d, cs.R);
        worst_res = std::max(worst_res, euler_residual(p, gamma).cwiseAbs().maxCoeff());
        const auto& g = p.grid();
        for (int s = 0; s < 25; ++s) {
            std::vector<double> a(17), b(17);
            for (int i = 0; i <= 16; ++i) {
                a[i] = Z(rng) / (1.0 + i);
                b[i] = Z(rng) / (1.0 + i);
            }
            Eigen::VectorXd kappa = g.theta.unaryExpr([&](double t) {
                double v = 0.0;
                for (int i = 0; i <= 16; ++i) v += a[i] * std::cos(i * t) + b[i] * std::sin(i * t);
                return v;
            });
            kappa = project_admissible(p, kappa);
            double norm = 0.0;
            for (int e = 0; e < g.cells; ++e) norm += cell_l2(g, e, kappa(e), kappa(e + 1));
            worst_q = std::min(worst_q, second_variation(p, kappa, gamma) / norm);
        }
    }
    r.pass = worst_res <= 1e-5 && worst_q >= -1e-8;
    r.detail = "max Euler residual " + fmt("%.2e", worst_res) + " (limit 1e-5), min Q/|kappa|^2 over 100 directions " +
               fmt("%.3e", worst_q) + " (limit -1e-8)";
    r.data = {{"max_euler_residual", worst_res}, {"min_normalized_second_variation", worst_q}};
    return r;
}

CriterionResult steiner_monotonicity(bool quick)
{
    CriterionResult r{6, "Steiner monotonicity", false, {}, 0.0, 120.0, {}};
    const int sets = quick ? 20 : 100;
    const int W = 1024, H = 512;
    const double h = 1.0 / 512;
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double ks[] = {0.0, 1.0, 2.0}, cs[] = {0.0, 0.5};
    double worst_m = 0.0, worst_p = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < sets; ++s) {
        const auto d = Density::half_space(ks[s % 3], cs[(s / 3) % 2]);
        const int blobs = 1 + static_cast<int>(rng() % 4);
        std::vector<std::array<double, 5>> el;
        for (int b = 0; b < blobs; ++b)
            el.push_back({-0.6 + 1.2 * U(rng), 0.05 + 0.65 * U(rng), 0.05 + 0.25 * U(rng), 0.05 + 0.25 * U(rng),
                          std::numbers::pi * U(rng)});
        const auto g = PixelSet::from_predicate(W, H, h, -1.0, 0.0, [&](double x, double y) {
            for (const auto& e : el) {
                const double dx = x - e[0], dy = y - e[1], ca = std::cos(e[4]), sa = std::sin(e[4]);
                const double u = (ca * dx + sa * dy) / e[2], v = (-sa * dx + ca * dy) / e[3];
                if (u * u + v * v < 1.0) return true;
            }
            return false;
        });
        const auto sym = steiner_y(steiner_x(g, d), d);
        const double m0 = grid_measure(g, d), m1 = grid_measure(sym, d);
        // grid tolerance: four cell edges at the largest weight on the grid box
        const double tol = 4.0 * h * d.a * std::exp(d.c * 2.0);
        worst_m = std::max(worst_m, std::abs(m1 - m0) / m0);
        worst_p = std::max(worst_p, (grid_perimeter(sym, d) - grid_perimeter(g, d)) / tol);
    }
    r.pass = worst_m <= 0.02 && worst_p <= 1.0;
    r.detail = std::to_string(sets) + " sets, max measure change " + fmt("%.2e", worst_m) +
               " (limit 2e-2), max perimeter increase / grid tol " + fmt("%.3f", worst_p) + " (limit 1)";
    r.data = {{"sets", sets}, {"max_relative_measure_change", worst_m}, {"max_perimeter_excess_over_tol", worst_p}};
    return r;
}

double smooth_cutoff(double r)
{
    if (r <= 0.4) return 1.0;
    if (r >= 0.85) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * (r - 0.4) / 0.45));
}

CriterionResult rearrangement_checks(bool quick)
{
    CriterionResult r{7, "Rearrangement", false, {}, 0.0, 60.0, {}};
    const int P = quick ? 128 : 256;
    const int count = quick ? 10 : 50;
    const auto grid = make_polar_grid(P, P, 1.0);

    const auto flat = Density::half_space(0.0, 0.0);
    const auto us = star_rearrangement(GridFunction::sample(grid, flat, [](double x, double y) { return std::hypot(x, y); }));
    double err = 0.0;
    for (int i = 0; i <= us.intervals(); ++i)
        err = std::max(err, std::abs(us.values()(i) - std::sqrt(std::max(0.0, 1.0 - us.r(i) * us.r(i)))));
    const double res = grid->dr;

    std::mt19937_64 rng(77);
    std::normal_distribution<double> Z;
    const double ks[] = {0.0, 1.0, 2.5}, cs[] = {0.0, 0.5, 1.0};
    double worst_eq = 0.0, worst_ps = std::numeric_limits<double>::infinity(), poincare = 0.0;
    for (int s = 0; s < count; ++s) {
        const auto d = Density::half_space(ks[s % 3], cs[(s / 3) % 3]);
        double b[10];
        for (double& x : b) x = Z(rng);
        const auto u = GridFunction::sample(grid, d, [&](double x, double y) {
            return smooth_cutoff(std::hypot(x, y)) * (b[0] + b[1] * x + b[2] * y + b[3] * x * x + b[4] * x * y +
                                                      b[5] * y * y + b[6] * x * x * x + b[7] * x * x * y +
                                                      b[8] * x * y * y + b[9] * y * y * y);
        });
        const auto star = star_rearrangement(u);
        const double i1 = u.integrate([](double v) { return v * v; });
        const double i2 = integrate(star, [](double v) { return v * v; });
        const double g1 = gradient_qnorm(u, 2.0), g2 = gradient_qnorm(star, 2.0);
        worst_eq = std::max(worst_eq, std::abs(i1 - i2) / i1);
        worst_ps = std::min(worst_ps, (g1 - g2) / g1);
        poincare = std::max(poincare, i1 / g1);
    }
    r.pass = err <= 2.0 * res && worst_eq <= 1e-3 && worst_ps >= -1e-3;
    r.detail = "|u* - sqrt(1-r^2)| = " + fmt("%.2e", err) + " (limit " + fmt("%.2e", 2.0 * res) + "), equimeasurability " +
               fmt("%.2e", worst_eq) + " (limit 1e-3), min Polya-Szego margin/scale " + fmt("%.3e", worst_ps) +
               " (limit -1e-3), max Poincare ratio " + fmt("%.4f", poincare);
    r.data = {{"grid", P}, {"star_error", err}, {"equimeasurability", worst_eq}, {"polya_szego_margin", worst_ps},
              {"poincare_ratio_max", poincare}};
    return r;
}

CriterionResult pde_comparison(bool quick)
{
    CriterionResult r{8, "PDE comparison", false, {}, 0.0, 300.0, {}};
    Check chk;
    const int fine = quick ? 128 : 256;

    // radial equality case
    const auto flat = Density::half_space(0.0, 0.0);
    const auto iso = ProblemSpec::isotropic(flat, 1.0, [](double, double) { return 1.0; });
    const auto sol = solve_fd(iso, fine, fine);
    const double u0 = sol.u.values()(0, 0);
    const auto rad = compare(sol.u, iso);
    double radial_worst = std::abs(rad.pointwise_margin);
    for (double m : rad.qnorm_margins) radial_worst = std::max(radial_worst, std::abs(m));
    chk.require(std::abs(u0 - 0.25) <= 1e-3, "u(0) = " + fmt("%.6f", u0));
    chk.require(radial_worst <= 1e-3, "radial margins " + fmt("%.2e", radial_worst));

    // anisotropic suite
    const int P = quick ? 64 : 128;
    const int problems = quick ? 6 : 20;
    int run = 0;
    double worst_point = std::numeric_limits<double>::infinity(), worst_q = std::numeric_limits<double>::infinity();
    json rows = json::array();
    auto nonradial = [](double x, double y) { return std::max(0.0, 1.0 + x + 0.5 * y * y); };
    auto radial = [](double x, double y) { return 2.0 - x * x - y * y; };
    for (int pass = 0; pass < 2 && run < problems; ++pass)
        for (double L : {2.0, 4.0})
            for (double k : {0.0, 1.0, 2.0})
                for (double c : {0.0, 0.5}) {
                    if (run >= problems || (pass == 1 && k == 1.0)) continue;
                    const auto d = Density::half_space(k, c);
                    const auto spec = (run % 2 == 0) ? ProblemSpec::rotating(d, 1.0, L, pass == 0 ? SourceField(nonradial) : SourceField(radial))
                                                     : ProblemSpec::diagonal(d, 1.0, L, pass == 0 ? SourceField(nonradial) : SourceField(radial));
                    const auto rep = compare(solve_fd(spec, P, P).u, spec);
                    const double pm = rep.pointwise_margin / rep.w_max;
                    double qm = std::numeric_limits<double>::infinity();
                    for (std::size_t n = 0; n < 4; ++n) qm = std::min(qm, rep.qnorm_margins[n] / rep.qnorm_scales[n]);
                    worst_point = std::min(worst_point, pm);
                    worst_q = std::min(worst_q, qm);
                    rows.push_back({{"Lambda", L}, {"k", k}, {"c", c}, {"source", pass == 0 ? "nonradial" : "radial"},
                                    {"pointwise_margin", rep.pointwise_margin}, {"min_q_margin_relative", qm}});
                    ++run;
                }
    chk.require(worst_point >= -1e-3, "pointwise margin " + fmt("%.2e", worst_point));
    chk.require(worst_q >= -1e-3, "q-norm margin " + fmt("%.2e", worst_q));

    // grid convergence against the radial solution
    const auto d = Density::half_space(1.0, 0.5);
    auto f = [](double rr) { return 1.0 - rr * rr; };
    const auto exact = solve_radial(d, f, 1.0, 4096);
    const auto spec = ProblemSpec::isotropic(d, 1.0, [&](double x, double y) { return f(std::hypot(x, y)); });
    std::vector<double> errs;
    const std::vector<int> grids = quick ? std::vector<int>{16, 32, 64} : std::vector<int>{32, 64, 128};
    for (int n : grids) {
        const auto s = solve_fd(spec, n, n);
        double e = 0.0;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) e = std::max(e, std::abs(s.u.values()(i, j) - exact(s.u.grid().r(i))));
        errs.push_back(e);
    }
    const double o1 = std::log2(errs[0] / errs[1]), o2 = std::log2(errs[1] / errs[2]);
    chk.require(o1 >= 1.7 && o1 <= 2.3 && o2 >= 1.7 && o2 <= 2.3, "orders " + fmt("%.3f", o1) + ", " + fmt("%.3f", o2));

    r.pass = chk.ok;
    r.detail = "u(0) = " + fmt("%.6f", u0) + ", radial margins " + fmt("%.1e", radial_worst) + ", " +
               std::to_string(run) + " anisotropic problems: min pointwise " + fmt("%.2e", worst_point) + ", min q " +
               fmt("%.2e", worst_q) + " (limit -1e-3, relative), orders " + fmt("%.2f", o1) + "/" + fmt("%.2f", o2);
    r.data = {{"u0", u0}, {"radial_margin_max", radial_worst}, {"problems", rows},
              {"convergence_errors", errs}, {"orders", {o1, o2}}};
    return r;
}

CriterionResult eigenvalue(bool)
{
    CriterionResult r{9, "Neumann eigenvalue", false, {}, 0.0, 30.0, {}};
    Check chk;
    json rows = json::array();
    for (double k : {0.0, 0.5, 1.0, 2.5}) {
        std::vector<double> e;
        for (int n : {256, 1024, 4096}) e.push_back(std::abs(neumann_eigenvalue(k, n).lambda1 - (1.0 + k)));
        const double o1 = std::log(e[0] / e[1]) / std::log(4.0), o2 = std::log(e[1] / e[2]) / std::log(4.0);
        chk.require(e[2] <= 1e-3, "k=" + fmt("%g", k) + " error " + fmt("%.2e", e[2]));
        chk.require(o1 >= 1.7 && o1 <= 2.3 && o2 >= 1.7 && o2 <= 2.3, "k=" + fmt("%g", k) + " order");
        rows.push_back({{"k", k}, {"errors", e}, {"orders", {o1, o2}}});
    }
    r.pass = chk.ok;
    r.detail = chk.ok ? "lambda1 = 1+k within 1e-3 at 4096 nodes, orders in [1.7, 2.3] for k in {0, 0.5, 1, 2.5}"
                      : "failed: " + chk.notes.front();
    r.data = {{"cases", rows}};
    return r;
}

CriterionResult hardy(bool)
{
    CriterionResult r{10, "Hardy constant and extremal sequence", false, {}, 0.0, 120.0, {}};
    Check chk;
    json rows = json::array();
    const HardySpec specs[] = {{2, 0.0, 0.0}, {3, 1.0, 2.0}, {2, 2.0, 0.0}};
    for (const auto& s : specs) {
        const double C = hardy_constant(s), C2 = hardy_constant_alt(s);
        const std::string tag = "(N,k,m)=(" + std::to_string(s.N) + "," + fmt("%g", s.k) + "," + fmt("%g", s.m) + ")";
        chk.require(std::abs(C - C2) <= 1e-12 * C, tag + " closed forms differ");

        // admissible test functions
        double min_test = std::numeric_limits<double>::infinity();
        if (s.N == 2) {
            const auto g = make_quarter_grid(400, 200, 1e-4, 1.0);
            const std::function<double(double, double)> fs[] = {
                [](double x, double y) { return x * (1.0 - std::hypot(x, y)); },
                [](double x, double y) { return x * (1.0 + y) * std::pow(1.0 - std::hypot(x, y), 2); },
                [](double x, double y) { return x * y * (1.0 - x * x - y * y); },
                [](double x, double y) { return x * std::exp(-y) * std::sin(std::numbers::pi * std::hypot(x, y)); },
            };
            for (const auto& f : fs) {
                const auto q = hardy_quotient(QuarterFunction::sample(g, f), s);
                chk.require(q.admissible, tag + " test function flagged inadmissible");
                min_test = std::min(min_test, q.value);
            }
            for (int n : {4, 8}) min_test = std::min(min_test, hardy_test_sequence_grid(s, n, 800, 100).value);
        } else {
            const std::pair<std::function<double(double)>, std::function<double(double)>> vs[] = {
                {[](double t) { return t < 1.0 ? t * (1.0 - t) * (1.0 - t) : 0.0; },
                 [](double t) { return t < 1.0 ? (1.0 - t) * (1.0 - 3.0 * t) : 0.0; }},
                {[](double t) { return t < 1.0 ? t * t * std::sin(std::numbers::pi * t) : 0.0; },
                 [](double t) {
                     return t < 1.0 ? 2.0 * t * std::sin(std::numbers::pi * t) +
                                          std::numbers::pi * t * t * std::cos(std::numbers::pi * t)
                                    : 0.0;
                 }},
            };
            for (const auto& [v, dv] : vs) min_test = std::min(min_test, separable_hardy_quotient(s, v, dv, {1e-6, 0.5, 1.0}));
        }
        chk.require(min_test >= C * (1.0 - 1e-3), tag + " test quotient " + fmt("%.5f", min_test) + " below C");

        std::vector<double> seq;
        for (int n : {4, 8, 16, 32}) seq.push_back(hardy_test_sequence(s, n));
        bool mono = true;
        for (std::size_t i = 1; i < seq.size(); ++i) mono = mono && seq[i] <= seq[i - 1] + 1e-6;
        const double excess = (seq.back() - C) / C;
        chk.require(mono && seq.back() >= C, tag + " sequence not monotone or below C");
        chk.require(excess <= 0.10, tag + " Q(32) is " + fmt("%.1f", 100.0 * excess) + "% above C");
        rows.push_back({{"N", s.N}, {"k", s.k}, {"m", s.m}, {"C", C}, {"min_test_quotient", min_test},
                        {"sequence", seq}, {"excess_at_32", excess}});
    }
    r.pass = chk.ok;
    std::string detail;
    for (const auto& row : rows)
        detail += (detail.empty() ? "" : "; ") + std::string("C=") + fmt("%g", row["C"].get<double>()) + " Q(32)=" +
                  fmt("%.4f", row["sequence"].back().get<double>()) + " (+" +
                  fmt("%.1f", 100.0 * row["excess_at_32"].get<double>()) + "%)";
    if (!chk.ok) {
        detail += " | failed:";
        for (const auto& n : chk.notes) detail += " [" + n + "]";
    }
    r.detail = detail;
    r.data = {{"cases", rows}};
    return r;
}

CriterionResult stability(bool)
{
    CriterionResult r{11, "Stability inequality", false, {}, 0.0, 1.0, {}};
    std::mt19937_64 rng(1111);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst_formula = 0.0, worst_bound = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < 1000; ++s) {
        const int N = 1 + static_cast<int>(rng() % 5);
        const double k = 5.0 * U(rng), c = U(rng), rr = 0.01 + 2.99 * U(rng), a = 0.1 + 10.0 * U(rng);
        const auto d = Density::half_space(k, c, N, a);
        const double v = stability_rhs(d, rr);
        const double closed = N - 1.0 + k - 2.0 * c * rr * rr;
        worst_formula = std::max(worst_formula, std::abs(v - closed) / std::max(1.0, std::abs(closed)));
        worst_bound = std::max(worst_bound, v - (N - 1.0 + k));
    }
    r.pass = worst_formula <= 1e-12 && worst_bound <= 1e-12;
    r.detail = "1000 draws, max |rhs - (N-1+k-2cr^2)| = " + fmt("%.1e", worst_formula) +
               ", max rhs - (N-1+k) = " + fmt("%.1e", worst_bound) + " (limit 1e-12)";
    r.data = {{"max_formula_error", worst_formula}, {"max_bound_excess", worst_bound}};
    return r;
}

using CriterionFn = CriterionResult (*)(bool);
constexpr CriterionFn criteria[criterion_count] = {
    profile_consistency, measure_oracle, isoperimetric_property, dido_flow, euler_and_second_variation,
    steiner_monotonicity, rearrangement_checks, pde_comparison, eigenvalue, hardy, stability,
};

} // namespace

CriterionResult run_criterion(int id, bool quick)
{
    if (id < 1 || id > criterion_count) throw std::out_of_range("criterion id out of range");
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = criteria[id - 1](quick);
    } catch (const std::exception& e) {
        r.id = id;
        r.title = "criterion " + std::to_string(id);
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.budget_seconds > 0.0 && r.seconds > r.budget_seconds) {
        r.pass = false;
        r.detail += " | over time budget";
    }
    return r;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& opts)
{
    std::vector<int> ids = opts.only;
    if (ids.empty())
        for (int i = 1; i <= criterion_count; ++i) ids.push_back(i);
    std::vector<CriterionResult> out(ids.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < ids.size();) out[i] = run_criterion(ids[i], opts.quick);
    };
    const int n = std::clamp(opts.threads, 1, static_cast<int>(ids.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

int threads_from_env()
{
    const char* v = std::getenv("CONEDIDO_THREADS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end == v || *end != '\0') return 1;
    return static_cast<int>(std::clamp(n, 1L, 64L));
}

std::string format_line(const CriterionResult& r)
{
    char head[128];
    std::snprintf(head, sizeof head, "criterion %2d %s  %s: ", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str());
    char tail[64];
    std::snprintf(tail, sizeof tail, " (%.1f s / %.0f s)", r.seconds, r.budget_seconds);
    return head + r.detail + tail;
}

} // namespace conedido::cli
