#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "excision/path.hpp"
#include "excision/rng.hpp"

namespace excision {

/**
 * Conditional midpoint refinement of sampled Brownian coordinates.
 *
 * Given the values of a D-dimensional Brownian motion (or bridge) at two
 * times, the path in between is a Brownian bridge in each coordinate, so a
 * midpoint drawn as (l + r)/2 + sqrt(dt/4) Z is exact in law. Refining only
 * where a level crossing is plausible removes the grid bias of maxima,
 * hitting times and "did the excursion reach this level" decisions at a
 * cost far below uniform refinement.
 *
 * A step is split while its crossing probability for a watched level exceeds
 * `epsilon` and the step is longer than the grid spacing over 2^max_depth.
 */
struct RefineSpec {
    double epsilon = 1e-4;
    int max_depth = 16;
    // Splits near the running maximum stop this many halvings below the grid.
    int max_watch_depth = 6;
    bool enabled = true;

    double log_epsilon() const noexcept { return std::log(epsilon); }

    static RefineSpec off()
    {
        RefineSpec r;
        r.enabled = false;
        return r;
    }
};

/// Probability that a Brownian bridge from a to b over a step of length dt
/// reaches `level`; 1 when the endpoints are not strictly on the same side.
inline double crossing_probability(double a, double b, double level, double dt) noexcept
{
    double da = level - a;
    double db = level - b;
    if (da * db <= 0.0) return 1.0;
    return std::exp(-2.0 * da * db / dt);
}

/// crossing_probability(a, b, level, dt) > exp(log_p), without the exp.
inline bool crossing_exceeds(double a, double b, double level, double dt, double log_p) noexcept
{
    const double da = level - a;
    const double db = level - b;
    if (da * db <= 0.0) return true;
    return -2.0 * da * db > log_p * dt;
}

template <std::size_t D>
struct CoordNode {
    double t;
    std::array<double, D> x;
};

template <std::size_t D>
CoordNode<D> bridge_midpoint(const CoordNode<D>& l, const CoordNode<D>& r, RngStream& rng)
{
    CoordNode<D> m;
    m.t = 0.5 * (l.t + r.t);
    const double sd = std::sqrt(0.25 * (r.t - l.t));
    for (std::size_t k = 0; k < D; ++k) {
        m.x[k] = 0.5 * (l.x[k] + r.x[k]) + sd * rng.normal();
    }
    return m;
}

template <std::size_t D>
double euclidean_norm(const std::array<double, D>& x) noexcept
{
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}

/// Scalar read-outs of coordinate paths. `lift` moves coordinates to a point
/// where the read-out equals y (used to insert sampled step maxima).
struct FirstCoordinate {
    double operator()(const std::array<double, 1>& x) const noexcept { return x[0]; }
    std::array<double, 1> lift(const std::array<double, 1>&, double y) const noexcept { return {y}; }
};
struct Norm3 {
    double operator()(const std::array<double, 3>& x) const noexcept { return euclidean_norm(x); }
    std::array<double, 3> lift(std::array<double, 3> g, double y) const noexcept
    {
        const double n = euclidean_norm(g);
        if (n == 0.0) return {y, 0.0, 0.0};
        for (double& c : g) c *= y / n;
        return g;
    }
};
/// level - |x|: the time-reversed Bessel(3) bridge that builds first-passage bridges.
struct LevelMinusNorm3 {
    double level;
    double operator()(const std::array<double, 3>& x) const noexcept
    {
        return level - euclidean_norm(x);
    }
    std::array<double, 3> lift(const std::array<double, 3>& g, double y) const noexcept
    {
        return Norm3{}.lift(g, level - y);
    }
};

/// Maximum of a Brownian bridge from a to b over a step of length dt, drawn
/// by inverting P(max >= y) = exp(-2 (y - a)(y - b) / dt).
inline double sample_bridge_max(double a, double b, double dt, double u) noexcept
{
    const double d = b - a;
    return 0.5 * (a + b + std::sqrt(d * d - 2.0 * dt * std::log(u)));
}

namespace detail {

// Inverse Gaussian with the given mean and shape (transformation with one rejection step).
inline double inverse_gaussian(double mean, double shape, RngStream& rng)
{
    const double n = rng.normal();
    const double w = mean * n * n;
    const double s = std::sqrt(w * (w + 4.0 * shape));
    const double x = w > 0.0 ? 4.0 * mean * shape * w / ((s + w) * (s + w)) : mean;
    return rng.uniform() * (mean + x) <= mean ? x : mean * mean / x;
}

} // namespace detail

/**
 * Time of the maximum, as a fraction of the step, of a Brownian bridge from
 * a to b over dt whose maximum is y. Its density is proportional to
 * f_A(u) f_B(1 - u), with f_c(u) = u^{-3/2} exp(-c/2u), A = (y-a)^2/dt and
 * B = (y-b)^2/dt. In r = u/(1-u) this is a mixture, weights sqrt B : sqrt A,
 * of IG(sqrt(A/B), A) and the reciprocal of IG(sqrt(B/A), B); drawn exactly.
 */
inline double sample_argmax_fraction(double a, double b, double y, double dt, RngStream& rng)
{
    const double A = (y - a) * (y - a) / dt;
    const double B = (y - b) * (y - b) / dt;
    if (!(A > 0.0)) return 0.0;
    if (!(B > 0.0)) return 1.0;
    const double sa = std::sqrt(A);
    const double sb = std::sqrt(B);
    if (rng.uniform() * (sa + sb) < sb) {
        const double r = detail::inverse_gaussian(sa / sb, A, rng);
        return r / (1.0 + r);
    }
    const double q = detail::inverse_gaussian(sb / sa, B, rng);
    return 1.0 / (1.0 + q);
}

template <std::size_t D, class Obs>
Path to_path(const std::vector<CoordNode<D>>& nodes, Obs obs, PathKind kind = PathKind::free,
             double level = 0.0)
{
    std::vector<double> t(nodes.size());
    std::vector<double> v(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        t[i] = nodes[i].t;
        v[i] = obs(nodes[i].x);
    }
    return Path(std::move(t), std::move(v), kind, level);
}

/**
 * Refines every step until the maximum of the observable is located:
 * a step is split while it may exceed (or touches) the current best node value.
 * The running best only grows, so one left-to-right pass suffices.
 */
template <std::size_t D, class Obs>
std::vector<CoordNode<D>> refine_global_max(const std::vector<CoordNode<D>>& in, Obs obs,
                                            RngStream& rng, const RefineSpec& spec)
{
    if (!spec.enabled || in.size() < 2) return in;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& n : in) best = std::max(best, obs(n.x));
    const double min_dt = (in[1].t - in[0].t) / std::ldexp(1.0, spec.max_depth) * 1.0000001;
    const double log_eps = spec.log_epsilon();

    std::vector<CoordNode<D>> out;
    out.reserve(in.size() + in.size() / 8);
    out.push_back(in.front());
    std::vector<CoordNode<D>> stack;
    for (std::size_t i = 1; i < in.size(); ++i) {
        stack.push_back(in[i]);
        while (!stack.empty()) {
            const CoordNode<D>& l = out.back();
            const CoordNode<D> r = stack.back();
            const double dt = r.t - l.t;
            const double vl = obs(l.x);
            const double vr = obs(r.x);
            // Steps touching the current best always split: the true peak
            // sits next to it with probability one.
            bool split = dt > min_dt && crossing_exceeds(vl, vr, best, dt, log_eps);
            if (split) {
                CoordNode<D> m = bridge_midpoint(l, r, rng);
                best = std::max(best, obs(m.x));
                stack.push_back(m);
            } else {
                out.push_back(r);
                stack.pop_back();
            }
        }
    }
    return out;
}

/**
 * State of a forward scan that watches the excursions of the observable
 * below its running maximum M.
 *
 * `half_level` selects the excision floor of an excursion at level l:
 * 0 when l < half_level, half_level otherwise (pass +inf for the single
 * floor 0). An excursion whose floor has been reached is "doomed"; its
 * remaining dips need no refinement.
 */
/// Steps whose maximum exceeds the running maximum with a smaller
/// probability than exp(kLogPeakCut) get no sampled peak.
inline constexpr double kLogPeakCut = -32.0;

struct ForwardWatch {
    double half_level = std::numeric_limits<double>::infinity();
    double target = std::numeric_limits<double>::infinity();  // level whose first passage ends the scan
    double running_max = -std::numeric_limits<double>::infinity();
    bool doomed = false;
    // Insert the sampled maximum of each final step that sets a new running
    // maximum, strictly below `cap`. Keeps the envelope exact in law, which
    // fixes where excised excursions end.
    bool peaks = true;
    double cap = std::numeric_limits<double>::infinity();

    double floor_for(double level) const noexcept { return level >= half_level ? half_level : 0.0; }

    void observe(double v) noexcept
    {
        if (v >= running_max) {
            running_max = v;
            doomed = false;
        } else if (v <= floor_for(running_max)) {
            doomed = true;
        }
    }

    bool reached_target() const noexcept { return running_max >= target; }
};

/**
 * Refines one step [l, r] of a forward scan and appends the refined nodes
 * after `l` (which must already be the last node of `out`). Splits while
 * (a) the excursion in progress could reach its floor unseen, or
 * (b) the first passage over half_level or target could hide inside.
 * The scan state is advanced node by node.
 */
template <std::size_t D, class Obs>
void refine_forward_step(std::vector<CoordNode<D>>& out, const CoordNode<D>& r_in, Obs obs,
                         ForwardWatch& watch, RngStream& rng, const RefineSpec& spec, double min_dt)
{
    thread_local std::vector<CoordNode<D>> stack;
    stack.clear();
    stack.push_back(r_in);
    const double log_eps = spec.log_epsilon();
    const double watch_dt = min_dt * std::ldexp(1.0, std::max(0, spec.max_depth - spec.max_watch_depth));
    while (!stack.empty()) {
        const CoordNode<D>& l = out.back();
        const CoordNode<D> r = stack.back();
        const double dt = r.t - l.t;
        bool split = false;
        if (spec.enabled && dt > min_dt && !watch.reached_target()) {
            const double vl = obs(l.x);
            const double vr = obs(r.x);
            const double m = watch.running_max;
            if (!watch.doomed) {
                double fl = watch.floor_for(m);
                // A step that starts on the floor (time 0, the half-level node)
                // has probability one and is split to full depth.
                if (crossing_exceeds(vl, vr, fl, dt, log_eps)) split = true;
                // Steps that may touch the running maximum are conditioned to
                // stay below it when no new peak turns up; a chord overstates them.
                if (!split && dt > watch_dt && crossing_exceeds(vl, vr, m, dt, log_eps)) split = true;
            }
            // The return of an excised excursion to its level sets its end;
            // a chord through the step would place it too early.
            if (!split && watch.doomed && crossing_exceeds(vl, vr, m, dt, log_eps)) {
                split = true;
            }
            if (!split) {
                for (double level : {watch.half_level, watch.target}) {
                    if (!std::isfinite(level) || m >= level) continue;
                    if (crossing_exceeds(vl, vr, level, dt, log_eps)) {
                        split = true;
                        break;
                    }
                }
            }
        }
        if (split) {
            stack.push_back(bridge_midpoint(l, r, rng));
            continue;
        }
        if (spec.enabled && watch.peaks) {
            const double vl = obs(l.x);
            const double vr = obs(r.x);
            const double m = watch.running_max;
            const double top = std::max(vl, vr);
            if (top >= m || crossing_exceeds(vl, vr, m, dt, kLogPeakCut)) {
                double y = sample_bridge_max(vl, vr, dt, rng.uniform());
                if (y >= watch.cap) y = std::nextafter(watch.cap, -std::numeric_limits<double>::infinity());
                if (y > top && y > m) {
                    const double w = sample_argmax_fraction(vl, vr, y, dt, rng);
                    CoordNode<D> pk;
                    pk.t = l.t + w * dt;
                    if (pk.t > l.t && pk.t < r.t) {
                        std::array<double, D> g;
                        for (std::size_t k = 0; k < D; ++k) g[k] = l.x[k] + w * (r.x[k] - l.x[k]);
                        pk.x = obs.lift(g, y);
                        out.push_back(pk);
                        watch.observe(obs(pk.x));
                    }
                }
            }
        }
        out.push_back(r);
        watch.observe(obs(r.x));
        stack.pop_back();
    }
}

/// Forward excursion refinement of a whole node sequence.
template <std::size_t D, class Obs>
std::vector<CoordNode<D>> refine_forward(const std::vector<CoordNode<D>>& in, Obs obs,
                                         double half_level, RngStream& rng, const RefineSpec& spec,
                                         double base_dt,
                                         double cap = std::numeric_limits<double>::infinity())
{
    if (!spec.enabled || in.size() < 2) return in;
    const double min_dt = base_dt / std::ldexp(1.0, spec.max_depth) * 1.0000001;
    ForwardWatch watch;
    watch.half_level = half_level;
    watch.cap = cap;
    std::vector<CoordNode<D>> out;
    out.reserve(in.size() + in.size() / 8);
    out.push_back(in.front());
    watch.observe(obs(in.front().x));
    for (std::size_t i = 1; i < in.size(); ++i) {
        refine_forward_step(out, in[i], obs, watch, rng, spec, min_dt);
    }
    return out;
}

/// Time reversal t -> a - t of a node sequence on [0, a].
template <std::size_t D>
std::vector<CoordNode<D>> reverse_nodes(const std::vector<CoordNode<D>>& in, double a)
{
    std::vector<CoordNode<D>> out(in.rbegin(), in.rend());
    for (auto& n : out) n.t = a - n.t;
    out.front().t = 0.0;
    out.back().t = a;
    return out;
}

/**
 * Refinement tailored to two-sided maximum excision of a bridge-like path:
 * locate the global maximum, then refine dips to 0 forward before it and
 * backward after it.
 */
template <std::size_t D, class Obs>
std::vector<CoordNode<D>> refine_for_bridge_excision(const std::vector<CoordNode<D>>& in, Obs obs,
                                                     RngStream& rng, const RefineSpec& spec)
{
    if (!spec.enabled) return in;
    const double base_dt = in[1].t - in[0].t;
    std::vector<CoordNode<D>> g = refine_global_max(in, obs, rng, spec);
    std::size_t mu = 0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (obs(g[i].x) > obs(g[mu].x)) mu = i;
    }
    const double top = obs(g[mu].x);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<CoordNode<D>> pre(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(mu + 1));
    std::vector<CoordNode<D>> post(g.begin() + static_cast<std::ptrdiff_t>(mu), g.end());
    std::vector<CoordNode<D>> out;
    if (pre.size() >= 2) {
        out = refine_forward(pre, obs, inf, rng, spec, base_dt, top);
    } else {
        out = pre;
    }
    if (post.size() >= 2) {
        // Reverse around the maximum so the backward envelope becomes a forward one.
        const double t_mu = post.front().t;
        const double t_end = post.back().t;
        std::vector<CoordNode<D>> rev(post.rbegin(), post.rend());
        for (auto& n : rev) n.t = t_end - n.t;
        rev.front().t = 0.0;
        std::vector<CoordNode<D>> ref = refine_forward(rev, obs, inf, rng, spec, base_dt, top);
        std::vector<CoordNode<D>> back;
        back.reserve(ref.size());
        std::size_t orig = post.size();
        for (auto it = ref.rbegin(); it != ref.rend(); ++it) {
            CoordNode<D> n = *it;
            n.t = t_end - n.t;
            back.push_back(n);
        }
        // Restore exact original times by matching coordinates in order.
        std::vector<char> original(back.size(), 0);
        std::size_t k = 0;
        for (std::size_t j = 0; j < back.size(); ++j) {
            if (k < orig && back[j].x == post[k].x) {
                back[j].t = post[k].t;
                original[j] = 1;
                ++k;
            }
        }
        back.front().t = t_mu;
        // Mapping back can round an inserted node onto or past a grid node's
        // time; such a node is dropped.
        std::size_t next_orig = 0;
        for (std::size_t j = 1; j < back.size(); ++j) {
            if (original[j]) {
                out.push_back(back[j]);
                continue;
            }
            next_orig = std::max(next_orig, j);
            while (!original[next_orig]) ++next_orig;
            if (back[j].t > out.back().t && back[j].t < back[next_orig].t) out.push_back(back[j]);
        }
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (!(out[i].t > out[i - 1].t)) {
            throw NumericalError("refinement produced non-increasing node times");
        }
    }
    return out;
}

} // namespace excision
