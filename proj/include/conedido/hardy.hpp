#pragma once
//
// Weighted Hardy inequality on the quarter space Q = {x_1 > 0, x_N > 0} with
// d(nu) = x_N^k |x|^m dx: the sharp constant, Hardy quotients of test functions
// and the extremal sequence x_1 |x|^{-(N+m+k)/2} psi_n(|x|).
//

#include <functional>
#include <memory>

#include <Eigen/Core>

namespace conedido {

struct HardySpec {
    int N = 2;
    double k = 0.0;
    double m = 0.0;
    bool experimental = false;  // admits non-integer m

    void validate() const;
};

/// ((N+m+k-2)/2)^2 + N+k-1; throws NumericalError if it differs from ((N+m+k)/2)^2 - m
/// by more than 1e-12 relative.
double hardy_constant(const HardySpec& s);
double hardy_constant_alt(const HardySpec& s);

/// Moments over the quarter sphere S^{N-1} cap Q with B = x_N^k:
/// theta1 = int x_1^2 B, gradient = int |grad_S x_1|^2 B.
struct QuarterSphereMoments {
    double theta1;
    double gradient;
};
QuarterSphereMoments quarter_sphere_moments(const HardySpec& s);

/// Quotient of u = x_1 g(|x|) = |x| Theta_1 g, for any N, reduced to radial integrals of
/// v(r) = r g(r) over [r0, r1] split at the given breakpoints (v vanishes outside).
double separable_hardy_quotient(const HardySpec& s, const std::function<double(double)>& v,
                                const std::function<double(double)>& dv, const std::vector<double>& breakpoints);

/// Log-spaced polar grid on the planar quarter annulus r in [r_min, r_max], theta in [0, pi/2];
/// x_1 = r cos(theta), x_2 = r sin(theta).
struct QuarterGrid {
    int P = 0, M = 0;
    double r_min = 0.0, r_max = 0.0;
    double log_step = 0.0, dtheta = 0.0;

    double r(int i) const;
    double theta(int j) const { return j * dtheta; }
};
std::shared_ptr<const QuarterGrid> make_quarter_grid(int P, int M, double r_min, double r_max);

struct QuarterFunction {
    std::shared_ptr<const QuarterGrid> grid;
    Eigen::MatrixXd values;  // (P+1) x (M+1)

    static QuarterFunction sample(std::shared_ptr<const QuarterGrid> grid, const std::function<double(double, double)>& u);
};

struct HardyQuotient {
    double value = 0.0;
    bool admissible = false;  // vanishes on x_1 = 0 and on the outer arc
};

/// Cell-centred quadrature of int |grad u|^2 dnu / int u^2 |x|^-2 dnu over the grid annulus (N = 2).
HardyQuotient hardy_quotient(const QuarterFunction& u, const HardySpec& s);

/// Piecewise cutoff: 0 outside (1/n, 2n), 1 on [2/n, n], log-linear ramps in between.
double hardy_cutoff(int n, double t);

/// Quotient of x_1 |x|^{-(N+m+k)/2} psi_n(|x|). Throws PreconditionError for n < 2 or
/// n beyond max_hardy_n.
double hardy_test_sequence(const HardySpec& s, int n);
/// Same member sampled on a planar quarter grid (N = 2 only), P log-spaced radii.
HardyQuotient hardy_test_sequence_grid(const HardySpec& s, int n, int P, int M);

inline constexpr int max_hardy_n = 1000000;

} // namespace conedido
