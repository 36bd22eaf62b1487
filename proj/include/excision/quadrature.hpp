#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace excision {

enum class Substitution { none, sqrt_endpoint };

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdiv = 60;
    Substitution substitution = Substitution::none;

    void validate() const
    {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
            throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
        }
        if (max_subdiv < 1) {
            throw std::invalid_argument("QuadratureSpec: max_subdiv must be at least 1");
        }
    }
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

namespace detail {

// 21-point Gauss-Kronrod nodes and weights on [-1, 1] (the 10-point Gauss
// rule is embedded at the odd positions).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980478210, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& o) const noexcept { return error < o.error; }
};

template <class F>
Segment gk21(F& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * kWgk[10];
    double gauss = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        kron += kWgk[j] * s;
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    kron *= h;
    gauss *= h;
    return Segment{a, b, kron, std::abs(kron - gauss)};
}

template <class F>
QuadratureResult adaptive(F& f, double a, double b, const QuadratureSpec& spec)
{
    std::priority_queue<Segment> heap;
    Segment first = gk21(f, a, b);
    heap.push(first);
    double total = first.value;
    double err = first.error;
    int subdiv = 0;
    while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) && subdiv < spec.max_subdiv) {
        Segment s = heap.top();
        heap.pop();
        const double m = 0.5 * (s.a + s.b);
        if (!(m > s.a && m < s.b)) {
            heap.push(s);
            break;
        }
        Segment l = gk21(f, s.a, m);
        Segment r = gk21(f, m, s.b);
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        ++subdiv;
    }
    // Re-sum to shed the drift of incremental updates.
    double v = 0.0;
    double e = 0.0;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    QuadratureResult out;
    out.value = v;
    out.abs_error = e;
    out.subdivisions = subdiv;
    out.converged = e <= std::max(spec.abs_tol, spec.rel_tol * std::abs(v));
    return out;
}

inline QuadratureResult combine(const QuadratureResult& x, const QuadratureResult& y)
{
    QuadratureResult r;
    r.value = x.value + y.value;
    r.abs_error = x.abs_error + y.abs_error;
    r.subdivisions = x.subdivisions + y.subdivisions;
    r.converged = x.converged && y.converged;
    return r;
}

} // namespace detail

/**
 * Adaptive Gauss-Kronrod integral of f over [a, b]. With sqrt_endpoint the
 * interval is split at its midpoint and s = endpoint +- u^2 is substituted on
 * both halves, which makes 1/sqrt endpoint singularities smooth.
 */
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {})
{
    spec.validate();
    if (!(b > a)) {
        if (a == b) return QuadratureResult{0.0, 0.0, 0, true};
        throw std::invalid_argument("integrate: interval must satisfy a <= b");
    }
    if (spec.substitution == Substitution::none) {
        return detail::adaptive(f, a, b, spec);
    }
    const double m = 0.5 * (a + b);
    const double r = std::sqrt(m - a);
    QuadratureSpec half = spec;
    half.abs_tol = 0.5 * spec.abs_tol;
    auto left = [&](double u) { return 2.0 * u * f(a + u * u); };
    auto right = [&](double u) { return 2.0 * u * f(b - u * u); };
    return detail::combine(detail::adaptive(left, 0.0, r, half),
                           detail::adaptive(right, 0.0, std::sqrt(b - m), half));
}

/**
 * Integral of f over [a, inf). The tail is mapped onto a finite interval by
 * s = a + (v/(1-v))^p with p = 2 under sqrt_endpoint (also smoothing a 1/sqrt
 * singularity at a), p = 1 otherwise.
 */
template <class F>
QuadratureResult integrate_to_infinity(F&& f, double a, const QuadratureSpec& spec = {})
{
    spec.validate();
    if (spec.substitution == Substitution::sqrt_endpoint) {
        auto g = [&](double v) {
            if (v >= 1.0) return 0.0;
            const double u = v / (1.0 - v);
            const double du = 1.0 / ((1.0 - v) * (1.0 - v));
            const double y = f(a + u * u) * 2.0 * u * du;
            return std::isfinite(y) ? y : 0.0;
        };
        return detail::adaptive(g, 0.0, 1.0, spec);
    }
    auto g = [&](double v) {
        if (v >= 1.0) return 0.0;
        const double u = v / (1.0 - v);
        const double y = f(a + u) / ((1.0 - v) * (1.0 - v));
        return std::isfinite(y) ? y : 0.0;
    };
    return detail::adaptive(g, 0.0, 1.0, spec);
}

} // namespace excision
