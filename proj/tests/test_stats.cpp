#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "excision/errors.hpp"
#include "excision/stats.hpp"

using namespace excision;

TEST(Stats, MeanAndStandardError)
{
    const std::vector<double> x{1.0, 2.0, 3.0};
    const auto s = summarize(x, 42, 8);
    EXPECT_DOUBLE_EQ(s.mean, 2.0);
    EXPECT_NEAR(s.std_error, 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_EQ(s.n, 3u);
    EXPECT_EQ(s.grid, 8u);
}

TEST(Stats, PairwiseSumIsAccurate)
{
    std::vector<double> x(1 << 20, 0.1);
    EXPECT_NEAR(pairwise_sum(x), 0.1 * (1 << 20), 1e-7);
}

TEST(Stats, VarianceEstimate)
{
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    EXPECT_NEAR(variance_estimate(x).variance, 5.0 / 3.0, 1e-14);
}

TEST(Stats, Correlation)
{
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> b{2.0, 4.0, 6.0, 8.0, 10.0};
    const std::vector<double> c{5.0, 4.0, 3.0, 2.0, 1.0};
    EXPECT_NEAR(correlation(a, b).r, 1.0, 1e-14);
    EXPECT_NEAR(correlation(a, c).r, -1.0, 1e-14);
}

TEST(Stats, MedianOfMeansResistsOutlierBlock)
{
    std::vector<double> x(320, 1.0);
    for (int i = 0; i < 10; ++i) x[i] = 1e6;
    EXPECT_DOUBLE_EQ(median_of_means(x, 32), 1.0);
}

TEST(Stats, KolmogorovSmirnov)
{
    const std::vector<double> a{0.1, 0.2, 0.3};
    const std::vector<double> b{1.1, 1.2};
    EXPECT_EQ(ks_distance(a, a), 0.0);
    EXPECT_EQ(ks_distance(a, b), 1.0);
    EXPECT_NEAR(ks_distance(std::vector<double>{0.0, 1.0}, std::vector<double>{0.5}), 0.5, 1e-15);
    const std::vector<double> u{0.25, 0.5, 0.75};
    EXPECT_NEAR(ks_distance_to(std::span<const double>(u), [](double t) { return t; }), 0.25, 1e-15);
}

TEST(Stats, ZScore)
{
    EXPECT_NEAR(z_score(1.0, 0.3, 1.5, 0.4), 1.0, 1e-15);
    EXPECT_EQ(z_score(2.0, 0.0, 2.0, 0.0), 0.0);
    EXPECT_THROW(z_score(2.0, 0.0, 3.0, 0.0), NumericalError);
}
