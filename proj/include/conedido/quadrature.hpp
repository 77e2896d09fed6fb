#pragma once
//
// Adaptive Gauss-Kronrod (G10/K21) quadrature on finite intervals.
//
// Subintervals are kept in a max-heap keyed on their |K21 - G10| error
// estimate and the worst one is bisected until the global estimate meets
// max(epsabs, epsrel * |I|) or the interval budget is exhausted.
//

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace conedido {

struct QuadOptions {
    double epsabs = 1e-12;
    double epsrel = 1e-10;
    int max_intervals = 400;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 11> kronrod_nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

inline constexpr std::array<double, 11> kronrod_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208931475992, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for kronrod_nodes[1], [3], [5], [7], [9].
inline constexpr std::array<double, 5> gauss_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment kronrod21(F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kronrod_weights[10];
    double gauss = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double dx = half * kronrod_nodes[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kronrod_weights[i] * pair;
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace detail

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opts = {})
{
    if (a == b) return {0.0, 0.0, 0, true};
    if (b < a) {
        QuadResult r = integrate(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    std::priority_queue<detail::Segment> heap;
    auto first = detail::kronrod21(f, a, b);
    double total = first.value;
    double error = first.error;
    heap.push(first);
    int intervals = 1;
    auto done = [&] { return error <= std::max(opts.epsabs, opts.epsrel * std::abs(total)); };
    while (!done() && intervals < opts.max_intervals) {
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            heap.push(worst);
            break;  // interval no longer divisible in floating point
        }
        const auto left = detail::kronrod21(f, worst.a, mid);
        const auto right = detail::kronrod21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // Re-sum from the leaves to shed accumulated cancellation in the running totals.
    double value = 0.0, err = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {value, err, intervals, err <= std::max(opts.epsabs, opts.epsrel * std::abs(value))};
}

/// Sum of integrate() over consecutive pieces [x_i, x_{i+1}] of a breakpoint list.
template <class F>
QuadResult integrate_pieces(F&& f, const std::vector<double>& breakpoints, const QuadOptions& opts = {})
{
    QuadResult out{0.0, 0.0, 0, true};
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        auto r = integrate(f, breakpoints[i], breakpoints[i + 1], opts);
        out.value += r.value;
        out.error += r.error;
        out.intervals += r.intervals;
        out.converged = out.converged && r.converged;
    }
    return out;
}

} // namespace conedido
