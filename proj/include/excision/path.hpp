#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "excision/errors.hpp"

namespace excision {

/// Uniform discretization of [0, horizon].
struct TimeGrid {
    double horizon = 1.0;
    std::size_t n_steps = 2;

    TimeGrid() = default;
    TimeGrid(double a, std::size_t n) : horizon{a}, n_steps{n}
    {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
        }
        if (n < 2) {
            throw std::invalid_argument("TimeGrid: n_steps must be at least 2");
        }
    }

    double spacing() const noexcept { return horizon / static_cast<double>(n_steps); }

    /// Node i; the last node is the horizon itself.
    double node(std::size_t i) const noexcept
    {
        if (i >= n_steps) {
            return horizon;
        }
        return horizon * static_cast<double>(i) / static_cast<double>(n_steps);
    }

    std::vector<double> nodes() const
    {
        std::vector<double> t(n_steps + 1);
        for (std::size_t i = 0; i <= n_steps; ++i) {
            t[i] = node(i);
        }
        return t;
    }
};

enum class PathKind { free, bridge, meander_type, excursion, first_passage };

inline const char* to_string(PathKind k) noexcept
{
    switch (k) {
    case PathKind::free: return "free";
    case PathKind::bridge: return "bridge";
    case PathKind::meander_type: return "meander_type";
    case PathKind::excursion: return "excursion";
    case PathKind::first_passage: return "first_passage";
    }
    return "free";
}

inline PathKind path_kind_from_string(const std::string& s)
{
    if (s == "free") return PathKind::free;
    if (s == "bridge") return PathKind::bridge;
    if (s == "meander_type") return PathKind::meander_type;
    if (s == "excursion") return PathKind::excursion;
    if (s == "first_passage") return PathKind::first_passage;
    throw std::invalid_argument("unknown path kind: " + s);
}

/**
 * A continuous function known at finitely many nodes and read off its
 * piecewise-linear interpolant.
 *
 * Samplers produce uniform grids. Transformations that cut at interpolated
 * level crossings (hitting times, excursion endpoints) insert nodes, so node
 * times are stored explicitly. Immutable after construction.
 *
 * `level` is only meaningful for PathKind::first_passage (the target x).
 */
class Path {
public:
    Path(std::vector<double> times, std::vector<double> values, PathKind kind = PathKind::free,
         double level = 0.0)
        : t_{std::move(times)}, v_{std::move(values)}, kind_{kind}, level_{level}
    {
        if (t_.size() != v_.size()) {
            throw std::invalid_argument("Path: times and values differ in length");
        }
        if (t_.size() < 2) {
            throw std::invalid_argument("Path: at least two nodes are required");
        }
        if (t_.front() != 0.0) {
            throw std::invalid_argument("Path: first node must be at time 0");
        }
        for (std::size_t i = 1; i < t_.size(); ++i) {
            if (!(t_[i] > t_[i - 1])) {
                throw std::invalid_argument("Path: node times must be strictly increasing");
            }
        }
        for (double x : v_) {
            if (!std::isfinite(x)) {
                throw NumericalError("Path: non-finite value");
            }
        }
    }

    static Path uniform(const TimeGrid& grid, std::vector<double> values,
                        PathKind kind = PathKind::free, double level = 0.0)
    {
        if (values.size() != grid.n_steps + 1) {
            throw std::invalid_argument("Path::uniform: values must have n_steps + 1 entries");
        }
        return Path(grid.nodes(), std::move(values), kind, level);
    }

    std::span<const double> times() const noexcept { return t_; }
    std::span<const double> values() const noexcept { return v_; }
    PathKind kind() const noexcept { return kind_; }
    double level() const noexcept { return level_; }
    std::size_t size() const noexcept { return v_.size(); }
    std::size_t n_steps() const noexcept { return v_.size() - 1; }
    double horizon() const noexcept { return t_.back(); }
    double front() const noexcept { return v_.front(); }
    double back() const noexcept { return v_.back(); }
    double time(std::size_t i) const { return t_[i]; }
    double value(std::size_t i) const { return v_[i]; }

    double max_value() const noexcept { return *std::max_element(v_.begin(), v_.end()); }
    double min_value() const noexcept { return *std::min_element(v_.begin(), v_.end()); }

    /// Value of the linear interpolant at time s; clamps outside [0, horizon].
    double at(double s) const noexcept
    {
        if (s <= t_.front()) return v_.front();
        if (s >= t_.back()) return v_.back();
        auto it = std::upper_bound(t_.begin(), t_.end(), s);
        std::size_t j = static_cast<std::size_t>(it - t_.begin());
        std::size_t i = j - 1;
        double w = (s - t_[i]) / (t_[j] - t_[i]);
        return v_[i] + w * (v_[j] - v_[i]);
    }

    Path with_kind(PathKind kind, double level = 0.0) const
    {
        return Path(t_, v_, kind, level);
    }

    /// True when the node times coincide with TimeGrid(horizon, n_steps).
    bool is_uniform() const noexcept
    {
        TimeGrid g;
        g.horizon = horizon();
        g.n_steps = n_steps();
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (t_[i] != g.node(i)) return false;
        }
        return true;
    }

private:
    std::vector<double> t_;
    std::vector<double> v_;
    PathKind kind_;
    double level_;
};

/// Description of the first violated kind invariant, if any.
inline std::optional<std::string> kind_violation(const Path& p)
{
    auto v = p.values();
    const std::size_t n = p.n_steps();
    switch (p.kind()) {
    case PathKind::free:
        return std::nullopt;
    case PathKind::bridge:
        if (v[0] != 0.0 || v[n] != 0.0) return "bridge must start and end at 0";
        return std::nullopt;
    case PathKind::meander_type:
        if (v[0] != 0.0) return "meander-type path must start at 0";
        if (p.max_value() != v[n]) return "meander-type path must attain its maximum at the end";
        return std::nullopt;
    case PathKind::excursion:
        if (v[0] != 0.0 || v[n] != 0.0) return "excursion must start and end at 0";
        for (std::size_t i = 1; i < n; ++i) {
            if (!(v[i] > 0.0)) return "excursion must be strictly positive inside";
        }
        return std::nullopt;
    case PathKind::first_passage:
        if (v[0] != 0.0) return "first-passage path must start at 0";
        if (v[n] != p.level()) return "first-passage path must end at its level";
        for (std::size_t i = 0; i < n; ++i) {
            if (!(v[i] < p.level())) return "first-passage path must stay below its level before the end";
        }
        return std::nullopt;
    }
    return std::nullopt;
}

/// Where the interpolant first reaches a level.
struct Crossing {
    std::size_t step;  // crossing lies in [t_step, t_{step+1}]; equals the node index when at_node
    double time;
    bool at_node;
};

/// First crossing of level y by the piecewise-linear interpolant, starting
/// the scan at node `from`. Approaches from whichever side the path starts.
inline std::optional<Crossing> first_crossing(const Path& p, double y, std::size_t from = 0)
{
    auto t = p.times();
    auto v = p.values();
    if (from >= v.size()) return std::nullopt;
    if (v[from] == y) return Crossing{from, t[from], true};
    const bool up = v[from] < y;
    for (std::size_t i = from + 1; i < v.size(); ++i) {
        bool reached = up ? (v[i] >= y) : (v[i] <= y);
        if (!reached) continue;
        if (v[i] == y) return Crossing{i, t[i], true};
        double w = (y - v[i - 1]) / (v[i] - v[i - 1]);
        double s = t[i - 1] + w * (t[i] - t[i - 1]);
        if (s <= t[i - 1]) {
            s = std::nextafter(t[i - 1], t[i]);
        }
        if (s >= t[i]) {
            s = std::nextafter(t[i], t[i - 1]);
        }
        return Crossing{i - 1, s, false};
    }
    return std::nullopt;
}

/// First time the interpolant reaches y; empty when it never does.
inline std::optional<double> hitting_time(const Path& p, double y)
{
    auto c = first_crossing(p, y);
    if (!c) return std::nullopt;
    return c->time;
}

struct ArgMax {
    std::size_t index;
    double time;
    double value;
};

/// Index of the strictly largest value. Throws TieError when the maximum is
/// attained at two or more nodes.
inline ArgMax argmax_unique(const Path& p)
{
    auto v = p.values();
    std::size_t best = 0;
    bool tie = false;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) {
            best = i;
            tie = false;
        } else if (v[i] == v[best]) {
            tie = true;
        }
    }
    if (tie) {
        throw TieError("argmax_unique: maximum attained at several nodes");
    }
    return ArgMax{best, p.time(best), v[best]};
}

/// Copy of `p` with a node inserted at an interior crossing, with the value
/// set exactly to `y`. Returns the index of the node carrying `y`.
inline std::pair<Path, std::size_t> insert_crossing(const Path& p, const Crossing& c, double y)
{
    if (c.at_node) {
        return {p, c.step};
    }
    std::vector<double> t(p.times().begin(), p.times().end());
    std::vector<double> v(p.values().begin(), p.values().end());
    t.insert(t.begin() + static_cast<std::ptrdiff_t>(c.step + 1), c.time);
    v.insert(v.begin() + static_cast<std::ptrdiff_t>(c.step + 1), y);
    return {Path(std::move(t), std::move(v), p.kind(), p.level()), c.step + 1};
}

/// Prefix of `p` up to and including node `last`.
inline Path truncate_at_node(const Path& p, std::size_t last, PathKind kind = PathKind::free,
                             double level = 0.0)
{
    std::vector<double> t(p.times().begin(), p.times().begin() + static_cast<std::ptrdiff_t>(last + 1));
    std::vector<double> v(p.values().begin(), p.values().begin() + static_cast<std::ptrdiff_t>(last + 1));
    return Path(std::move(t), std::move(v), kind, level);
}

/// Trapezoidal integral of the interpolant (exact for piecewise-linear paths).
inline double integral(const Path& p) noexcept
{
    auto t = p.times();
    auto v = p.values();
    double s = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        s += 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);
    }
    return s;
}

/// Supremum distance between the interpolants of two paths on a common
/// horizon; evaluated at the union of both node sets.
inline double sup_distance(const Path& a, const Path& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a.value(i) - b.at(a.time(i))));
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        d = std::max(d, std::abs(b.value(i) - a.at(b.time(i))));
    }
    return d;
}

} // namespace excision
