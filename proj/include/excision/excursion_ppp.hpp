#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "excision/errors.hpp"
#include "excision/path.hpp"
#include "excision/refine.hpp"
#include "excision/rng.hpp"
#include "excision/transforms.hpp"

namespace excision {

/**
 * Brownian motion run up to its first passage at x, with the excursions
 * below the running maximum thinned by the two-phase rule.
 */
struct ExcisionSummary {
    double x = 0.0;
    double T_x = 0.0;
    double tau_x = 0.0;
    double tau_e = 0.0;
    double half_time = 0.0;  // retained time at which X_path first reaches x/2
    std::vector<ExcursionRecord> records;
    Path X_path{{0.0, 1.0}, {0.0, 1.0}};
};

struct ExcisionOptions {
    RefineSpec refine{};
    // Skip the rest of an excursion once it is known to be excised by drawing
    // its remaining duration from the first-passage law.
    bool fast_forward = true;
    // Keep the full source path in absolute time (only with fast_forward off).
    bool keep_source = false;
    // Grid steps allowed: n_steps * 2^extension_doublings.
    int extension_doublings = 8;
};

namespace detail {

// Online version of the forward excision walk: nodes arrive in time order,
// kept pieces are appended to X as soon as their fate is known.
class OnlineLevelExcision {
public:
    OnlineLevelExcision(double x) : x_{x}, half_{0.5 * x} {}

    double running_max() const noexcept { return m_; }
    bool inside() const noexcept { return inside_; }
    bool doomed() const noexcept { return inside_ && mn_ <= floor_for(m_, half_); }
    bool done() const noexcept { return done_; }
    double hit_local_time() const noexcept { return hit_t_; }

    // Feeds the next node (local time since the last reset).
    void feed(double t, double v)
    {
        if (done_) return;
        if (!inside_) {
            if (v >= m_) {
                rise(prev_t_, prev_v_, t, v);
            } else {
                inside_ = true;
                g_t_ = prev_t_;
                mn_ = v;
                buf_t_.clear();
                buf_v_.clear();
                buf_t_.push_back(t);
                buf_v_.push_back(v);
            }
        } else if (v < m_) {
            mn_ = std::min(mn_, v);
            buf_t_.push_back(t);
            buf_v_.push_back(v);
        } else {
            double c = v == m_ ? t : crossing_time(prev_t_, prev_v_, t, v, m_);
            close(c);
            if (v > m_) rise(c, m_, t, v);
        }
        prev_t_ = t;
        prev_v_ = v;
    }

    // Ends a doomed excursion `extra` time units after the last node and
    // restarts the local clock at the excursion end, where the path is at m.
    void fast_forward(double extra)
    {
        const double end = prev_t_ + extra;
        const double len = end - g_t_;
        push_record(len, true, end);
        tau_e_ += len;
        inside_ = false;
        base_ += end;
        g_t_ = 0.0;
        prev_t_ = 0.0;
        prev_v_ = m_;
    }

    void start()
    {
        m_ = 0.0;
        prev_t_ = 0.0;
        prev_v_ = 0.0;
        xt_.assign(1, 0.0);
        xv_.assign(1, 0.0);
    }

    ExcisionSummary finish()
    {
        ExcisionSummary s;
        s.x = x_;
        s.T_x = base_ + hit_t_;
        s.tau_x = u_;
        s.tau_e = tau_e_;
        s.half_time = half_time_;
        s.records = std::move(records_);
        xv_.back() = x_;
        s.X_path = Path(std::move(xt_), std::move(xv_), PathKind::first_passage, x_);
        return s;
    }

private:
    void push_x(double dt, double v)
    {
        double nu = u_ + dt;
        if (!(nu > xt_.back())) nu = std::nextafter(xt_.back(), std::numeric_limits<double>::infinity());
        u_ = nu;
        xt_.push_back(u_);
        xv_.push_back(v);
    }

    // Kept rising step from (t0, v0 = running max) to (t1, v1 >= v0); inserts
    // the half-level and target crossings as nodes.
    void rise(double t0, double v0, double t1, double v1)
    {
        double ct = t0;
        for (double level : {half_, x_}) {
            if (m_ < level && v1 >= level && v0 < level) {
                double c = v1 == level ? t1 : crossing_time(t0, v0, t1, v1, level);
                if (c > ct) {
                    push_x(c - ct, level);
                    ct = c;
                } else {
                    xv_.back() = level;
                }
                if (level == half_) half_time_ = u_;
                m_ = level;
                if (level == x_) {
                    done_ = true;
                    hit_t_ = ct;
                    return;
                }
            }
        }
        if (t1 > ct) push_x(t1 - ct, v1);
        m_ = std::max(m_, v1);
    }

    void close(double c)
    {
        const bool cut = mn_ <= floor_for(m_, half_);
        push_record(c - g_t_, cut, c);
        if (cut) {
            tau_e_ += c - g_t_;
        } else {
            double last = g_t_;
            for (std::size_t k = 0; k < buf_t_.size(); ++k) {
                push_x(buf_t_[k] - last, buf_v_[k]);
                last = buf_t_[k];
            }
            push_x(c - last, m_);
        }
        inside_ = false;
    }

    void push_record(double length, bool cut, double d_local)
    {
        ExcursionRecord r;
        r.g = base_ + g_t_;
        r.d = base_ + d_local;
        r.level = m_;
        r.length = length;
        r.height = m_ - mn_;
        r.excised = cut;
        r.phase = m_ >= half_ ? Phase::second : Phase::first;
        records_.push_back(r);
    }

    double x_;
    double half_;
    double m_ = 0.0;
    bool inside_ = false;
    bool done_ = false;
    double mn_ = 0.0;
    double g_t_ = 0.0;
    double prev_t_ = 0.0;
    double prev_v_ = 0.0;
    double base_ = 0.0;
    double hit_t_ = 0.0;
    double u_ = 0.0;
    double tau_e_ = 0.0;
    double half_time_ = 0.0;
    std::vector<double> buf_t_;
    std::vector<double> buf_v_;
    std::vector<double> xt_;
    std::vector<double> xv_;
    std::vector<ExcursionRecord> records_;
};

} // namespace detail

/**
 * Samples Brownian motion on steps of length 4x^2/n_steps until it first
 * reaches x and applies the two-phase excision: an excursion at level l is
 * excised when it reaches 0 (l < x/2) or x/2 (l >= x/2).
 *
 * `source` receives the absolute-time source path when requested.
 */
inline ExcisionSummary excise_bm_to_x(double x, std::size_t n_steps, RngStream& rng,
                                      const ExcisionOptions& opt = {},
                                      std::optional<Path>* source = nullptr)
{
    if (!(x > 0.0)) {
        throw std::invalid_argument("excise_bm_to_x: level must be positive");
    }
    if (n_steps < 2) {
        throw std::invalid_argument("excise_bm_to_x: n_steps must be at least 2");
    }
    if (opt.keep_source && opt.fast_forward) {
        throw std::invalid_argument("excise_bm_to_x: keep_source requires fast_forward off");
    }
    const double h = 4.0 * x * x / static_cast<double>(n_steps);
    const double sd = std::sqrt(h);
    const double min_dt = h / std::ldexp(1.0, opt.refine.max_depth) * 1.0000001;
    const std::size_t limit = n_steps << opt.extension_doublings;

    detail::OnlineLevelExcision ex(x);
    ex.start();
    ForwardWatch watch;
    watch.half_level = 0.5 * x;
    watch.target = x;
    watch.observe(0.0);

    std::vector<CoordNode<1>> nodes{CoordNode<1>{0.0, {0.0}}};
    std::vector<double> src_t{0.0};
    std::vector<double> src_v{0.0};
    std::size_t steps = 0;
    while (!ex.done()) {
        if (++steps > limit) {
            throw NotReachedError("excise_bm_to_x: level not reached within the extension limit");
        }
        const CoordNode<1> last = nodes.back();
        CoordNode<1> r{last.t + h, {last.x[0] + sd * rng.normal()}};
        nodes.resize(1);
        nodes[0] = last;
        refine_forward_step(nodes, r, FirstCoordinate{}, watch, rng, opt.refine, min_dt);
        for (std::size_t k = 1; k < nodes.size() && !ex.done(); ++k) {
            ex.feed(nodes[k].t, nodes[k].x[0]);
            if (opt.keep_source) {
                src_t.push_back(nodes[k].t);
                src_v.push_back(nodes[k].x[0]);
            }
        }
        if (!ex.done() && opt.fast_forward && ex.doomed()) {
            const double gap = ex.running_max() - nodes.back().x[0];
            const double z = rng.normal();
            ex.fast_forward((gap / z) * (gap / z));
            nodes.assign(1, CoordNode<1>{0.0, {ex.running_max()}});
            watch.observe(ex.running_max());
        }
    }
    if (source != nullptr && opt.keep_source) {
        *source = Path(std::move(src_t), std::move(src_v));
    }
    return ex.finish();
}

/// Two independent Bessel(3) legs run to x/2, joined into one path.
struct BesselPair {
    double H = 0.0;
    double H_hat = 0.0;
    Path W_path{{0.0, 1.0}, {0.0, 1.0}};
};

namespace detail {

// Bessel(3) path up to its first passage at y; the last node is the crossing.
inline Path bes3_until(double y, double h, std::size_t limit, RngStream& rng, const RefineSpec& spec)
{
    const double sd = std::sqrt(h);
    const double min_dt = h / std::ldexp(1.0, spec.max_depth) * 1.0000001;
    std::vector<double> t{0.0};
    std::vector<double> v{0.0};
    CoordNode<3> last{0.0, {0.0, 0.0, 0.0}};
    std::vector<CoordNode<3>> stack;
    for (std::size_t step = 0; step < limit; ++step) {
        stack.assign(1, CoordNode<3>{last.t + h,
                                     {last.x[0] + sd * rng.normal(), last.x[1] + sd * rng.normal(),
                                      last.x[2] + sd * rng.normal()}});
        while (!stack.empty()) {
            const CoordNode<3> r = stack.back();
            const double vl = euclidean_norm(last.x);
            const double vr = euclidean_norm(r.x);
            const double dt = r.t - last.t;
            if (spec.enabled && dt > min_dt && crossing_probability(vl, vr, y, dt) > spec.epsilon) {
                stack.push_back(bridge_midpoint(last, r, rng));
                continue;
            }
            stack.pop_back();
            if (vr >= y) {
                double c = vr == y ? r.t : crossing_time(last.t, vl, r.t, vr, y);
                t.push_back(c);
                v.push_back(y);
                return Path(std::move(t), std::move(v));
            }
            t.push_back(r.t);
            v.push_back(vr);
            last = r;
        }
    }
    throw NotReachedError("Bessel(3) leg did not reach its level within the extension limit");
}

} // namespace detail

/**
 * W(t) = R(t) on [0, H], x/2 + R'(t - H) on [H, H + H'], where R, R' are
 * independent Bessel(3) processes and H, H' their first passages at x/2.
 * Uses the same step convention as excise_bm_to_x.
 */
inline BesselPair sample_bessel_pair(double x, std::size_t n_steps, RngStream& rng,
                                     const RefineSpec& spec = {}, int extension_doublings = 8)
{
    if (!(x > 0.0)) {
        throw std::invalid_argument("sample_bessel_pair: level must be positive");
    }
    const double h = 4.0 * x * x / static_cast<double>(n_steps);
    const std::size_t limit = n_steps << extension_doublings;
    const double y = 0.5 * x;
    Path a = detail::bes3_until(y, h, limit, rng, spec);
    Path b = detail::bes3_until(y, h, limit, rng, spec);
    std::vector<double> t(a.times().begin(), a.times().end());
    std::vector<double> v(a.values().begin(), a.values().end());
    const double H = a.horizon();
    for (std::size_t i = 1; i < b.size(); ++i) {
        double s = H + b.time(i);
        if (!(s > t.back())) s = std::nextafter(t.back(), std::numeric_limits<double>::infinity());
        t.push_back(s);
        v.push_back(y + b.value(i));
    }
    v.back() = x;
    BesselPair out;
    out.H = H;
    out.H_hat = b.horizon();
    out.W_path = Path(std::move(t), std::move(v), PathKind::first_passage, x);
    return out;
}

/// t_br of the kept path over its own horizon, rescaled onto [0, 1].
inline Path x_bridge_tilde(const ExcisionSummary& s)
{
    return brownian_scale(t_br(s.X_path));
}

} // namespace excision
