#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "excision/refine.hpp"
#include "excision/samplers.hpp"
#include "excision/stats.hpp"

using namespace excision;

namespace {
constexpr double kKs1pct = 1.63;  // sqrt(n) * one-sample KS critical value at 1%
}

TEST(Crossing, ProbabilityFormula)
{
    EXPECT_EQ(crossing_probability(0.0, 1.0, 0.5, 1.0), 1.0);
    EXPECT_EQ(crossing_probability(0.0, 0.0, 0.0, 1.0), 1.0);
    EXPECT_NEAR(crossing_probability(0.0, 0.0, 1.0, 1.0), std::exp(-2.0), 1e-15);
    EXPECT_NEAR(crossing_probability(0.2, 0.1, -0.3, 0.5), std::exp(-2.0 * 0.5 * 0.4 / 0.5), 1e-15);
}

TEST(Crossing, ExceedsAgreesWithProbability)
{
    RngStream r(1, 0);
    for (int i = 0; i < 10000; ++i) {
        const double a = r.normal();
        const double b = r.normal();
        const double l = r.normal();
        const double dt = r.uniform();
        const double lp = std::log(r.uniform());
        const double p = crossing_probability(a, b, l, dt);
        if (std::abs(std::log(p) - lp) < 1e-9) continue;
        ASSERT_EQ(crossing_exceeds(a, b, l, dt, lp), p > std::exp(lp));
    }
}

TEST(BridgeMax, InverseMatchesExactLaw)
{
    const double a = 0.3, b = -0.2, dt = 0.7;
    RngStream r(2, 0);
    std::vector<double> y(20000);
    for (auto& v : y) v = sample_bridge_max(a, b, dt, r.uniform());
    for (double v : y) ASSERT_GE(v, a);
    const double d = ks_distance_to(std::span<const double>(y), [&](double s) {
        return s <= a ? 0.0 : 1.0 - std::exp(-2.0 * (s - a) * (s - b) / dt);
    });
    EXPECT_LT(d, kKs1pct / std::sqrt(20000.0));
}

// The argmax fraction given the maximum has density proportional to
// f_A(u) f_B(1-u), f_c(u) = u^{-3/2} exp(-c/2u). CDF by a fine midpoint rule.
TEST(ArgmaxFraction, MatchesConditionalDensity)
{
    struct Case {
        double a, b, y, dt;
    };
    for (Case c : {Case{0.0, 0.0, 0.5, 1.0}, Case{0.0, 0.4, 0.45, 0.3}, Case{-1.0, 0.2, 0.3, 0.01}}) {
        const double A = (c.y - c.a) * (c.y - c.a) / c.dt;
        const double B = (c.y - c.b) * (c.y - c.b) / c.dt;
        auto dens = [&](double u) {
            if (u <= 0.0 || u >= 1.0) return 0.0;
            return std::pow(u, -1.5) * std::exp(-A / (2.0 * u)) * std::pow(1.0 - u, -1.5) * std::exp(-B / (2.0 * (1.0 - u)));
        };
        constexpr int kCells = 1 << 20;
        std::vector<double> cdf(kCells + 1, 0.0);
        for (int i = 0; i < kCells; ++i) cdf[i + 1] = cdf[i] + dens((i + 0.5) / kCells);
        for (double& v : cdf) v /= cdf.back();
        auto F = [&](double u) {
            const double pos = std::clamp(u, 0.0, 1.0) * kCells;
            const auto i = std::min<std::size_t>(kCells - 1, static_cast<std::size_t>(pos));
            return cdf[i] + (pos - i) * (cdf[i + 1] - cdf[i]);
        };
        RngStream r(3, 0);
        std::vector<double> x(20000);
        for (auto& v : x) v = sample_argmax_fraction(c.a, c.b, c.y, c.dt, r);
        EXPECT_LT(ks_distance_to(std::span<const double>(x), F), kKs1pct / std::sqrt(20000.0))
            << "case a=" << c.a << " b=" << c.b;
    }
}

TEST(ArgmaxFraction, DegenerateEnds)
{
    RngStream r(4, 0);
    EXPECT_EQ(sample_argmax_fraction(1.0, 0.0, 1.0, 1.0, r), 0.0);
    EXPECT_EQ(sample_argmax_fraction(0.0, 1.0, 1.0, 1.0, r), 1.0);
}

TEST(Midpoint, ConditionalMomentsOfBridgeMidpoint)
{
    RngStream r(5, 0);
    CoordNode<1> l{0.0, {0.2}};
    CoordNode<1> rr{0.5, {1.0}};
    std::vector<double> m(40000);
    for (auto& v : m) v = bridge_midpoint(l, rr, r).x[0];
    auto s = summarize(m);
    EXPECT_LT(std::abs(s.mean - 0.6), 4.0 * s.std_error);
    auto var = variance_estimate(m);
    EXPECT_LT(std::abs(var.variance - 0.125), 4.0 * var.std_error);
}

// On a grid of 16 steps a plain bridge maximum is far too low; the refined
// sampler must recover E[max] = sqrt(pi/8).
TEST(RefinedBridge, MaximumIsExactInLawOnCoarseGrid)
{
    const TimeGrid grid(1.0, 16);
    std::vector<double> plain(20000);
    std::vector<double> refined(20000);
    for (std::uint64_t i = 0; i < plain.size(); ++i) {
        RngStream a(9, i);
        plain[i] = sample_bridge(grid, a).max_value();
        RngStream b(10, i);
        refined[i] = sample_bridge_refined(grid, b, RefineSpec{}).max_value();
    }
    const double target = std::sqrt(std::numbers::pi / 8.0);
    auto sp = summarize(plain);
    auto sr = summarize(refined);
    EXPECT_GT(std::abs(sp.mean - target), 10.0 * sp.std_error);
    EXPECT_LT(std::abs(sr.mean - target), 4.0 * sr.std_error);
    // Law of the bridge maximum: P(max <= m) = 1 - exp(-2 m^2).
    EXPECT_LT(ks_distance_to(std::span<const double>(refined), [](double m) { return 1.0 - std::exp(-2.0 * m * m); }),
              kKs1pct / std::sqrt(20000.0));
}

TEST(RefinedBridge, StructureOfRefinedPath)
{
    const TimeGrid grid(1.0, 64);
    RngStream rng(11, 0);
    Path p = sample_bridge_refined(grid, rng, RefineSpec{});
    EXPECT_EQ(p.front(), 0.0);
    EXPECT_EQ(p.back(), 0.0);
    EXPECT_EQ(p.horizon(), 1.0);
    EXPECT_GT(p.size(), grid.n_steps + 1);
    // Every grid node is still present.
    std::size_t j = 0;
    for (double t : grid.nodes()) {
        while (j < p.size() && p.time(j) < t) ++j;
        ASSERT_LT(j, p.size());
        EXPECT_EQ(p.time(j), t);
    }
    RngStream r2(11, 0);
    Path q = sample_bridge_refined(grid, r2, RefineSpec::off());
    EXPECT_EQ(q.size(), grid.n_steps + 1);
}
