#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "excision/errors.hpp"
#include "excision/path.hpp"
#include "excision/refine.hpp"
#include "excision/rng.hpp"
#include "excision/transforms.hpp"

namespace excision {

inline constexpr int kResampleLimit = 1000;

namespace detail {

inline void require_unit_horizon(const TimeGrid& grid, const char* who)
{
    if (grid.horizon != 1.0) {
        throw std::invalid_argument(std::string(who) + ": horizon must be 1");
    }
}

inline std::vector<double> bm_values(const TimeGrid& grid, RngStream& rng)
{
    std::vector<double> v(grid.n_steps + 1);
    v[0] = 0.0;
    const double sd = std::sqrt(grid.spacing());
    for (std::size_t i = 1; i <= grid.n_steps; ++i) {
        v[i] = v[i - 1] + sd * rng.normal();
    }
    return v;
}

inline std::vector<double> bridge_values(const TimeGrid& grid, RngStream& rng)
{
    std::vector<double> v = bm_values(grid, rng);
    const double end = v.back();
    for (std::size_t i = 1; i < grid.n_steps; ++i) {
        v[i] -= grid.node(i) / grid.horizon * end;
    }
    v.back() = 0.0;
    return v;
}

} // namespace detail

/// Standard Brownian motion on the grid.
inline Path sample_bm(const TimeGrid& grid, RngStream& rng)
{
    return Path::uniform(grid, detail::bm_values(grid, rng), PathKind::free);
}

/// Brownian bridge B(t) - t B(1) on [0, 1].
inline Path sample_bridge(const TimeGrid& grid, RngStream& rng)
{
    detail::require_unit_horizon(grid, "sample_bridge");
    return Path::uniform(grid, detail::bridge_values(grid, rng), PathKind::bridge);
}

/// Time-space reversed meander, built as t_me of a sampled bridge.
inline Path sample_meander_reversed(const TimeGrid& grid, RngStream& rng)
{
    return t_me(sample_bridge(grid, rng));
}

/// Bessel(3) process: Euclidean norm of three independent Brownian motions.
inline Path sample_bes3(const TimeGrid& grid, RngStream& rng)
{
    std::array<std::vector<double>, 3> c;
    for (auto& x : c) x = detail::bm_values(grid, rng);
    std::vector<double> v(grid.n_steps + 1);
    for (std::size_t i = 0; i <= grid.n_steps; ++i) {
        v[i] = std::sqrt(c[0][i] * c[0][i] + c[1][i] * c[1][i] + c[2][i] * c[2][i]);
    }
    return Path::uniform(grid, std::move(v), PathKind::free);
}

/// Normalized excursion as a Bessel(3) bridge: norm of three Brownian bridges.
inline Path sample_excursion(const TimeGrid& grid, RngStream& rng)
{
    detail::require_unit_horizon(grid, "sample_excursion");
    for (int attempt = 0; attempt < kResampleLimit; ++attempt) {
        std::array<std::vector<double>, 3> c;
        for (auto& x : c) x = detail::bridge_values(grid, rng);
        std::vector<double> v(grid.n_steps + 1);
        bool ok = true;
        for (std::size_t i = 0; i <= grid.n_steps; ++i) {
            v[i] = std::sqrt(c[0][i] * c[0][i] + c[1][i] * c[1][i] + c[2][i] * c[2][i]);
            if (i > 0 && i < grid.n_steps && !(v[i] > 0.0)) ok = false;
        }
        if (ok) return Path::uniform(grid, std::move(v), PathKind::excursion);
    }
    throw NumericalError("sample_excursion: resample limit exceeded");
}

/**
 * Brownian motion conditioned to first reach x at time 1, as x minus the
 * time reversal of a Bessel(3) bridge from 0 to x.
 */
inline Path sample_first_passage_bridge(double x, const TimeGrid& grid, RngStream& rng)
{
    if (!(x > 0.0)) {
        throw std::invalid_argument("sample_first_passage_bridge: level must be positive");
    }
    detail::require_unit_horizon(grid, "sample_first_passage_bridge");
    const std::size_t n = grid.n_steps;
    for (int attempt = 0; attempt < kResampleLimit; ++attempt) {
        std::array<std::vector<double>, 3> c;
        for (auto& b : c) b = detail::bridge_values(grid, rng);
        std::vector<double> r(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            double a = grid.node(i) * x + c[0][i];
            r[i] = std::sqrt(a * a + c[1][i] * c[1][i] + c[2][i] * c[2][i]);
        }
        std::vector<double> v(n + 1);
        bool ok = true;
        for (std::size_t i = 0; i <= n; ++i) {
            v[i] = x - r[n - i];
            if (i < n && !(v[i] < x)) ok = false;
        }
        v[0] = 0.0;
        v[n] = x;
        if (ok) return Path::uniform(grid, std::move(v), PathKind::first_passage, x);
    }
    throw NumericalError("sample_first_passage_bridge: resample limit exceeded");
}

// Refined samplers. Each draws the uniform grid first, then refines it with
// exact conditional midpoints where the downstream functional needs it.

namespace detail {

template <std::size_t D>
std::vector<CoordNode<D>> bridge_coords(const TimeGrid& grid, RngStream& rng,
                                        const std::array<double, D>& start)
{
    std::array<std::vector<double>, D> c;
    for (auto& x : c) x = bridge_values(grid, rng);
    std::vector<CoordNode<D>> nodes(grid.n_steps + 1);
    for (std::size_t i = 0; i <= grid.n_steps; ++i) {
        nodes[i].t = grid.node(i);
        const double w = 1.0 - grid.node(i);
        for (std::size_t k = 0; k < D; ++k) {
            nodes[i].x[k] = (i == grid.n_steps ? 0.0 : w * start[k]) + c[k][i];
        }
    }
    return nodes;
}

} // namespace detail

/// Bridge refined around its maximum and around every dip of an excursion
/// below the two-sided maximum towards 0.
inline Path sample_bridge_refined(const TimeGrid& grid, RngStream& rng, const RefineSpec& spec)
{
    detail::require_unit_horizon(grid, "sample_bridge_refined");
    auto nodes = detail::bridge_coords<1>(grid, rng, {0.0});
    nodes = refine_for_bridge_excision(nodes, FirstCoordinate{}, rng, spec);
    nodes.front().x[0] = 0.0;
    nodes.back().x[0] = 0.0;
    return to_path(nodes, FirstCoordinate{}, PathKind::bridge);
}

/// Excursion refined around its maximum.
inline Path sample_excursion_refined(const TimeGrid& grid, RngStream& rng, const RefineSpec& spec)
{
    detail::require_unit_horizon(grid, "sample_excursion_refined");
    for (int attempt = 0; attempt < kResampleLimit; ++attempt) {
        auto nodes = detail::bridge_coords<3>(grid, rng, {0.0, 0.0, 0.0});
        nodes = refine_global_max(nodes, Norm3{}, rng, spec);
        Path p = to_path(nodes, Norm3{});
        bool ok = true;
        for (std::size_t i = 1; i + 1 < p.size(); ++i) {
            if (!(p.value(i) > 0.0)) ok = false;
        }
        if (ok) return p.with_kind(PathKind::excursion);
    }
    throw NumericalError("sample_excursion_refined: resample limit exceeded");
}

/// First-passage bridge refined for meander-type excision (dips towards 0
/// before the half-level time, towards x/2 after it).
inline Path sample_first_passage_bridge_refined(double x, const TimeGrid& grid, RngStream& rng,
                                                const RefineSpec& spec)
{
    if (!(x > 0.0)) {
        throw std::invalid_argument("sample_first_passage_bridge: level must be positive");
    }
    detail::require_unit_horizon(grid, "sample_first_passage_bridge_refined");
    const LevelMinusNorm3 obs{x};
    for (int attempt = 0; attempt < kResampleLimit; ++attempt) {
        // Coordinates of the Bessel(3) bridge run backwards: start at (x,0,0), end at 0.
        auto nodes = detail::bridge_coords<3>(grid, rng, {x, 0.0, 0.0});
        nodes.front().x = {x, 0.0, 0.0};
        nodes = refine_forward(nodes, obs, 0.5 * x, rng, spec, grid.spacing());
        std::vector<double> t(nodes.size());
        std::vector<double> v(nodes.size());
        bool ok = true;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            t[i] = nodes[i].t;
            v[i] = obs(nodes[i].x);
            if (i + 1 < nodes.size() && !(v[i] < x)) ok = false;
        }
        v.front() = 0.0;
        v.back() = x;
        if (ok) return Path(std::move(t), std::move(v), PathKind::first_passage, x);
    }
    throw NumericalError("sample_first_passage_bridge_refined: resample limit exceeded");
}

} // namespace excision
