#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "excision/errors.hpp"

namespace excision {

/// Pairwise (cascade) sum; the result depends only on the order of `x`.
inline double pairwise_sum(std::span<const double> x) noexcept
{
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t h = x.size() / 2;
    return pairwise_sum(x.first(h)) + pairwise_sum(x.subspan(h));
}

struct EstimatorSummary {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::uint64_t master_seed = 0;
    std::size_t grid = 0;
};

/// Sample mean and standard error sd/sqrt(n), both via pairwise sums.
inline EstimatorSummary summarize(std::span<const double> x, std::uint64_t seed = 0, std::size_t grid = 0)
{
    if (x.size() < 2) {
        throw std::invalid_argument("summarize: at least two samples are required");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw NumericalError("non-finite functional value at replicate " + std::to_string(i));
        }
    }
    const double n = static_cast<double>(x.size());
    const double mean = pairwise_sum(x) / n;
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = (x[i] - mean) * (x[i] - mean);
    const double var = pairwise_sum(d) / (n - 1.0);
    return EstimatorSummary{mean, std::sqrt(var / n), x.size(), seed, grid};
}

/// Sample variance with a standard error from the fourth central moment.
struct VarianceEstimate {
    double variance = 0.0;
    double std_error = 0.0;
};

inline VarianceEstimate variance_estimate(std::span<const double> x)
{
    if (x.size() < 4) {
        throw std::invalid_argument("variance_estimate: at least four samples are required");
    }
    const double n = static_cast<double>(x.size());
    const double mean = pairwise_sum(x) / n;
    std::vector<double> d2(x.size());
    std::vector<double> d4(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - mean;
        d2[i] = d * d;
        d4[i] = d2[i] * d2[i];
    }
    const double m2 = pairwise_sum(d2) / n;
    const double m4 = pairwise_sum(d4) / n;
    VarianceEstimate v;
    v.variance = m2 * n / (n - 1.0);
    v.std_error = std::sqrt(std::max(0.0, (m4 - m2 * m2) / n));
    return v;
}

/// Mean and standard error of the sample correlation (delta-method free:
/// SE from the products of standardized values).
struct CorrelationEstimate {
    double r = 0.0;
    double std_error = 0.0;
};

inline CorrelationEstimate correlation(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size() || a.size() < 4) {
        throw std::invalid_argument("correlation: samples must match and hold at least four values");
    }
    const double n = static_cast<double>(a.size());
    const double ma = pairwise_sum(a) / n;
    const double mb = pairwise_sum(b) / n;
    std::vector<double> da(a.size()), db(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        da[i] = (a[i] - ma) * (a[i] - ma);
        db[i] = (b[i] - mb) * (b[i] - mb);
    }
    const double sa = std::sqrt(pairwise_sum(da) / n);
    const double sb = std::sqrt(pairwise_sum(db) / n);
    std::vector<double> p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = (a[i] - ma) / sa * ((b[i] - mb) / sb);
    const EstimatorSummary s = summarize(p);
    return CorrelationEstimate{s.mean, s.std_error};
}

/// Median of block means over `blocks` contiguous blocks.
inline double median_of_means(std::span<const double> x, std::size_t blocks = 32)
{
    if (x.empty() || blocks == 0) {
        throw std::invalid_argument("median_of_means: empty input");
    }
    blocks = std::min(blocks, x.size());
    std::vector<double> means(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = b * x.size() / blocks;
        const std::size_t hi = (b + 1) * x.size() / blocks;
        means[b] = pairwise_sum(x.subspan(lo, hi - lo)) / static_cast<double>(hi - lo);
    }
    std::sort(means.begin(), means.end());
    return blocks % 2 == 1 ? means[blocks / 2] : 0.5 * (means[blocks / 2 - 1] + means[blocks / 2]);
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_distance(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_distance: samples must be non-empty");
    }
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double na = static_cast<double>(x.size());
    const double nb = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// One-sample KS statistic against a continuous CDF.
template <class Cdf>
double ks_distance_to(std::span<const double> a, Cdf cdf)
{
    std::vector<double> x(a.begin(), a.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
    }
    return d;
}

/// |a - b| / sqrt(se_a^2 + se_b^2); 0 when both are exact and equal.
inline double z_score(double a, double se_a, double b, double se_b)
{
    const double se = std::sqrt(se_a * se_a + se_b * se_b);
    if (se == 0.0) {
        if (a == b) return 0.0;
        throw NumericalError("z_score: zero standard error with differing estimates");
    }
    return std::abs(a - b) / se;
}

} // namespace excision
