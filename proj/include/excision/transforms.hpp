#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "excision/errors.hpp"
#include "excision/path.hpp"

namespace excision {

/// Which side of the phase boundary an excursion belongs to: before/after the
/// argmax for bridges, before/after the half-level time for meander-type paths.
enum class Phase { first, second };

inline const char* to_string(Phase p) noexcept { return p == Phase::first ? "first" : "second"; }

struct ExcursionRecord {
    double g = 0.0;
    double d = 0.0;
    double level = 0.0;
    double length = 0.0;
    double height = 0.0;  // level minus the lowest node value inside
    bool excised = false;
    Phase phase = Phase::first;
};

/**
 * Clock of an excision. `source_times`/`source_values` are the nodes of the
 * source path after crossing nodes were inserted; `u` is the retained time accumulated up
 * to each of them. `alpha[k]` is the source node of output node k, taking the
 * right end of an excised run at a junction (right-continuous inverse).
 */
struct ClockMap {
    std::vector<double> source_times;
    std::vector<double> source_values;
    std::vector<double> u;
    std::vector<std::size_t> alpha;
};

struct TransformOutput {
    Path excised;
    double tau;
    ClockMap clock;
    std::vector<ExcursionRecord> records;
    double argmax_time;

    double excised_length() const noexcept
    {
        double s = 0.0;
        for (const auto& r : records) {
            if (r.excised) s += r.length;
        }
        return s;
    }
};

namespace detail {

// One side of an excursion interval: an existing node, or a crossing to be
// inserted in the step (node, node + 1).
struct Boundary {
    std::size_t node;
    bool inserted;
    double time;
};

struct RawExcursion {
    Boundary left;
    Boundary right;
    double level;
    double min;
    bool excised;
    Phase phase;
};

inline double floor_for(double level, double half_level) noexcept
{
    return level >= half_level ? half_level : 0.0;
}

inline double crossing_time(double t0, double v0, double t1, double v1, double y) noexcept
{
    double w = (y - v0) / (v1 - v0);
    double s = t0 + w * (t1 - t0);
    if (s <= t0) s = std::nextafter(t0, t1);
    if (s >= t1) s = std::nextafter(t1, t0);
    return s;
}

// Excursions below the forward running maximum on nodes [s, e].
inline void walk_forward(std::span<const double> t, std::span<const double> v, std::size_t s,
                         std::size_t e, double half_level, std::optional<Phase> fixed_phase,
                         std::vector<RawExcursion>& out)
{
    double m = v[s];
    bool inside = false;
    std::size_t g = s;
    double mn = 0.0;
    for (std::size_t i = s + 1; i <= e; ++i) {
        if (v[i] < m) {
            if (!inside) {
                inside = true;
                g = i - 1;
                mn = v[i];
            } else {
                mn = std::min(mn, v[i]);
            }
            continue;
        }
        if (inside) {
            Boundary right{i, false, t[i]};
            if (v[i] != m) {
                right = Boundary{i - 1, true, crossing_time(t[i - 1], v[i - 1], t[i], v[i], m)};
            }
            Phase ph = fixed_phase ? *fixed_phase : (m >= half_level ? Phase::second : Phase::first);
            out.push_back(RawExcursion{Boundary{g, false, t[g]}, right, m, mn,
                                       mn <= floor_for(m, half_level), ph});
            inside = false;
        }
        m = v[i];
    }
    if (inside) {
        throw std::invalid_argument("excursion below the maximum does not close before the segment end");
    }
}

// Excursions below the backward running maximum on nodes [s, e], floor 0.
inline void walk_backward(std::span<const double> t, std::span<const double> v, std::size_t s,
                          std::size_t e, Phase phase, std::vector<RawExcursion>& out)
{
    double m = v[e];
    bool inside = false;
    std::size_t g = e;
    double mn = 0.0;
    for (std::size_t i = e; i-- > s;) {
        if (v[i] < m) {
            if (!inside) {
                inside = true;
                g = i + 1;
                mn = v[i];
            } else {
                mn = std::min(mn, v[i]);
            }
            continue;
        }
        if (inside) {
            Boundary left{i, false, t[i]};
            if (v[i] != m) {
                left = Boundary{i, true, crossing_time(t[i], v[i], t[i + 1], v[i + 1], m)};
            }
            out.push_back(RawExcursion{left, Boundary{g, false, t[g]}, m, mn, mn <= 0.0, phase});
            inside = false;
        }
        m = v[i];
    }
    if (inside) {
        throw std::invalid_argument("excursion below the maximum does not close before the segment start");
    }
}

// Inserts the crossing nodes, marks excised steps and concatenates the rest.
inline std::optional<TransformOutput> assemble(const Path& p, std::vector<RawExcursion> raw,
                                               PathKind out_kind, double out_level,
                                               double argmax_time)
{
    auto t = p.times();
    auto v = p.values();
    const std::size_t n = p.size();

    // At most one insertion per step: forward and backward walks cover disjoint steps.
    std::vector<double> ins_time(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> ins_value(n, 0.0);
    for (const auto& r : raw) {
        for (const Boundary* b : {&r.left, &r.right}) {
            if (b->inserted) {
                ins_time[b->node] = b->time;
                ins_value[b->node] = r.level;
            }
        }
    }
    std::vector<double> at;
    std::vector<double> av;
    std::vector<std::size_t> node_pos(n);
    std::vector<std::size_t> ins_pos(n, 0);
    at.reserve(n + raw.size());
    av.reserve(n + raw.size());
    for (std::size_t i = 0; i < n; ++i) {
        node_pos[i] = at.size();
        at.push_back(t[i]);
        av.push_back(v[i]);
        if (!std::isnan(ins_time[i])) {
            ins_pos[i] = at.size();
            at.push_back(ins_time[i]);
            av.push_back(ins_value[i]);
        }
    }
    auto pos = [&](const Boundary& b) { return b.inserted ? ins_pos[b.node] : node_pos[b.node]; };

    const std::size_t steps = at.size() - 1;
    std::vector<char> cut(steps, 0);
    std::sort(raw.begin(), raw.end(),
              [](const RawExcursion& a, const RawExcursion& b) { return a.left.time < b.left.time; });
    std::vector<ExcursionRecord> records;
    records.reserve(raw.size());
    for (const auto& r : raw) {
        std::size_t lo = pos(r.left);
        std::size_t hi = pos(r.right);
        if (r.excised) {
            for (std::size_t j = lo; j < hi; ++j) cut[j] = 1;
        }
        ExcursionRecord rec;
        rec.g = at[lo];
        rec.d = at[hi];
        rec.level = r.level;
        rec.length = rec.d - rec.g;
        rec.height = r.level - r.min;
        rec.excised = r.excised;
        rec.phase = r.phase;
        records.push_back(rec);
    }

    ClockMap clock;
    clock.u.resize(at.size());
    clock.u[0] = 0.0;
    std::vector<double> ot{0.0};
    std::vector<double> ov{av[0]};
    clock.alpha.push_back(0);
    for (std::size_t j = 0; j < steps; ++j) {
        if (cut[j]) {
            clock.u[j + 1] = clock.u[j];
            continue;
        }
        clock.u[j + 1] = clock.u[j] + (at[j + 1] - at[j]);
        if (j > 0 && cut[j - 1]) {
            if (av[j] != ov.back()) {
                throw std::logic_error("excision junction values differ");
            }
            clock.alpha.back() = j;
        }
        ot.push_back(clock.u[j + 1]);
        ov.push_back(av[j + 1]);
        clock.alpha.push_back(j + 1);
    }
    const double tau = clock.u.back();
    clock.source_times = std::move(at);
    clock.source_values = std::move(av);
    if (ot.size() < 2 || !(tau > 0.0)) {
        return std::nullopt;
    }
    return TransformOutput{Path(std::move(ot), std::move(ov), out_kind, out_level), tau,
                           std::move(clock), std::move(records), argmax_time};
}

inline void require_bridge(const Path& p, const char* who)
{
    if (p.front() != 0.0 || p.back() != 0.0) {
        throw std::invalid_argument(std::string(who) + ": input must start and end at 0");
    }
}

inline void require_meander(const Path& p, const char* who)
{
    if (p.front() != 0.0) {
        throw std::invalid_argument(std::string(who) + ": input must start at 0");
    }
    if (!(p.back() > 0.0)) {
        throw std::invalid_argument(std::string(who) + ": terminal value must be positive");
    }
    if (p.max_value() != p.back()) {
        throw std::invalid_argument(std::string(who) + ": maximum must be attained at the end");
    }
}

inline std::optional<TransformOutput> excise_bridge_raw(const Path& p)
{
    require_bridge(p, "excise_bridge");
    ArgMax am = argmax_unique(p);
    std::vector<RawExcursion> raw;
    walk_forward(p.times(), p.values(), 0, am.index, std::numeric_limits<double>::infinity(),
                 Phase::first, raw);
    walk_backward(p.times(), p.values(), am.index, p.n_steps(), Phase::second, raw);
    return assemble(p, std::move(raw), PathKind::bridge, 0.0, am.time);
}

// Path with a node carrying exactly `y` at its first crossing.
inline std::pair<Path, std::size_t> with_crossing_node(const Path& p, double y)
{
    auto c = first_crossing(p, y);
    if (!c) {
        throw NotReachedError("level is never reached");
    }
    return insert_crossing(p, *c, y);
}

inline std::optional<TransformOutput> excise_meander_raw(const Path& p, PathKind out_kind,
                                                         double out_level)
{
    require_meander(p, "excise_meander");
    const double half = 0.5 * p.back();
    auto [q, k] = with_crossing_node(p, half);
    (void)k;
    std::vector<RawExcursion> raw;
    walk_forward(q.times(), q.values(), 0, q.n_steps(), half, std::nullopt, raw);
    return assemble(q, std::move(raw), out_kind, out_level, q.horizon());
}

inline Path zero_function()
{
    return Path({0.0, 1.0}, {0.0, 0.0}, PathKind::bridge);
}

} // namespace detail

/// Brownian scaling onto [0, 1]: t -> t/a, v -> v/sqrt(a), a = horizon.
inline Path brownian_scale(const Path& p)
{
    const double a = p.horizon();
    const double s = std::sqrt(a);
    std::vector<double> t(p.times().begin(), p.times().end());
    std::vector<double> v(p.values().begin(), p.values().end());
    if (a != 1.0) {
        for (double& x : t) x /= a;
        for (double& x : v) x /= s;
        t.back() = 1.0;
        // Division can merge times one ulp apart; spread them back out.
        for (std::size_t i = 1; i + 1 < t.size(); ++i) {
            if (!(t[i] > t[i - 1])) t[i] = std::nextafter(t[i - 1], 2.0);
        }
        for (std::size_t i = t.size() - 1; i > 0 && !(t[i] > t[i - 1]); --i) {
            t[i - 1] = std::nextafter(t[i], -1.0);
        }
    }
    double level = p.kind() == PathKind::first_passage ? v.back() : p.level();
    return Path(std::move(t), std::move(v), p.kind(), level);
}

/// Two-sided running maximum: forward maximum up to the argmax, backward
/// maximum after it. Crossing nodes where the path returns to the envelope
/// are inserted so that the piecewise-linear envelope is exact.
inline Path two_sided_max(const Path& p)
{
    detail::require_bridge(p, "two_sided_max");
    ArgMax am = argmax_unique(p);
    std::vector<detail::RawExcursion> raw;
    detail::walk_forward(p.times(), p.values(), 0, am.index,
                         std::numeric_limits<double>::infinity(), Phase::first, raw);
    detail::walk_backward(p.times(), p.values(), am.index, p.n_steps(), Phase::second, raw);
    auto out = detail::assemble(p, raw, PathKind::bridge, 0.0, am.time);
    const auto& at = out->clock.source_times;
    const auto& av = out->clock.source_values;
    std::vector<double> env(at.size());
    std::size_t mu = 0;
    while (at[mu] != am.time) ++mu;
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= mu; ++i) {
        m = std::max(m, av[i]);
        env[i] = m;
    }
    m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = at.size(); i-- > mu;) {
        m = std::max(m, av[i]);
        env[i] = m;
    }
    return Path(at, std::move(env), PathKind::free);
}

namespace detail {

// Times of the reflected piece t = a + c - s for source nodes s in [c, a],
// listed in increasing t. Uniform inputs whose pivot is a node stay on the grid.
inline void append_reflection(const Path& p, std::size_t pivot, double pivot_time,
                              bool pivot_is_node, std::vector<double>& t, std::vector<double>& v,
                              double offset)
{
    const double a = p.horizon();
    const bool uniform = pivot_is_node && p.is_uniform();
    TimeGrid grid;
    grid.horizon = a;
    grid.n_steps = p.n_steps();
    const std::size_t n = p.n_steps();
    for (std::size_t j = n + 1; j-- > pivot;) {
        if (j == n) continue;  // source a maps onto the pivot itself
        double s = p.time(j);
        double tt;
        if (uniform) {
            tt = grid.node(n + pivot - j);
        } else {
            tt = (a - s) + pivot_time;
        }
        if (j == pivot) tt = a;
        if (tt <= t.back()) continue;
        if (j != pivot && tt >= a) continue;
        t.push_back(tt);
        v.push_back(offset + p.value(j));
    }
}

} // namespace detail

/// t -> w(t) on [0, rho], w(rho) + w(a + rho - t) on [rho, a], rho the argmax.
inline Path t_me(const Path& p)
{
    detail::require_bridge(p, "t_me");
    ArgMax am = argmax_unique(p);
    std::vector<double> t(p.times().begin(), p.times().begin() + static_cast<std::ptrdiff_t>(am.index + 1));
    std::vector<double> v(p.values().begin(), p.values().begin() + static_cast<std::ptrdiff_t>(am.index + 1));
    detail::append_reflection(p, am.index, am.time, true, t, v, am.value);
    return Path(std::move(t), std::move(v), PathKind::meander_type);
}

/// t -> w(t) on [0, g], w(a + g - t) - w(g) on [g, a], g the first time w
/// reaches w(a)/2.
inline Path t_br(const Path& p)
{
    if (p.front() != 0.0) {
        throw std::invalid_argument("t_br: input must start at 0");
    }
    if (!(p.back() > 0.0)) {
        throw std::invalid_argument("t_br: terminal value must be positive");
    }
    const double half = 0.5 * p.back();
    auto c = first_crossing(p, half);
    auto [q, k] = insert_crossing(p, *c, half);
    std::vector<double> t(q.times().begin(), q.times().begin() + static_cast<std::ptrdiff_t>(k + 1));
    std::vector<double> v(q.values().begin(), q.values().begin() + static_cast<std::ptrdiff_t>(k + 1));
    detail::append_reflection(q, k, q.time(k), c->at_node, t, v, -half);
    v.back() = 0.0;
    return Path(std::move(t), std::move(v), PathKind::bridge);
}

/// Excision of the excursions of a bridge below its two-sided maximum that
/// reach 0 (a tie with 0 counts as reaching it).
inline TransformOutput excise_bridge(const Path& p)
{
    auto out = detail::excise_bridge_raw(p);
    if (!out) throw NumericalError("excise_bridge: nothing retained");
    return std::move(*out);
}

/// Excision of a meander-type path: below the half-level time excursions are
/// removed when they reach 0, afterwards when they reach w(a)/2.
inline TransformOutput excise_meander(const Path& p)
{
    auto out = detail::excise_meander_raw(p, PathKind::meander_type, 0.0);
    if (!out) throw NumericalError("excise_meander: nothing retained");
    return std::move(*out);
}

/// Excision up to the first passage at x of a path started at 0.
inline TransformOutput excise_to_level(const Path& p, double x)
{
    if (!(x > 0.0)) {
        throw std::invalid_argument("excise_to_level: level must be positive");
    }
    if (p.front() != 0.0) {
        throw std::invalid_argument("excise_to_level: path must start at 0");
    }
    auto [q, k] = detail::with_crossing_node(p, x);
    Path r = truncate_at_node(q, k);
    auto out = detail::excise_meander_raw(r, PathKind::first_passage, x);
    if (!out) throw NumericalError("excise_to_level: nothing retained");
    return std::move(*out);
}

/// Normalized bridge excision: excise, then rescale onto [0, 1].
inline Path g_br(const Path& p)
{
    auto out = detail::excise_bridge_raw(p);
    if (!out) return detail::zero_function();
    return brownian_scale(out->excised);
}

inline Path g_me(const Path& p)
{
    auto out = detail::excise_meander_raw(p, PathKind::meander_type, 0.0);
    if (!out) return detail::zero_function().with_kind(PathKind::meander_type);
    return brownian_scale(out->excised);
}

struct RegularityViolation {
    enum class Kind { max_tie, zero_local_min };
    Kind kind;
    std::size_t index;
};

/**
 * Grid proxy of path regularity: a node that ties the running maximum of
 * its prefix (or of its suffix), and interior zeros that are local minima.
 */
inline std::vector<RegularityViolation> regularity_check(const Path& p)
{
    std::vector<RegularityViolation> out;
    auto v = p.values();
    const std::size_t n = p.n_steps();
    double m = v[0];
    for (std::size_t i = 1; i <= n; ++i) {
        if (v[i] == m && i < n) out.push_back({RegularityViolation::Kind::max_tie, i});
        m = std::max(m, v[i]);
    }
    m = v[n];
    for (std::size_t i = n; i-- > 0;) {
        if (v[i] == m && i > 0) out.push_back({RegularityViolation::Kind::max_tie, i});
        m = std::max(m, v[i]);
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (v[i] == 0.0 && v[i - 1] >= 0.0 && v[i + 1] >= 0.0) {
            out.push_back({RegularityViolation::Kind::zero_local_min, i});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.index != b.index ? a.index < b.index : a.kind < b.kind;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& a, const auto& b) {
                              return a.index == b.index && a.kind == b.kind;
                          }),
              out.end());
    return out;
}

} // namespace excision
