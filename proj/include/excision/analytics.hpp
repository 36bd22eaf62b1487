#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <string>
#include <stdexcept>
#include <vector>

#include "excision/quadrature.hpp"

namespace excision {

namespace detail {

inline void require_level(double x, const char* who)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument(std::string(who) + ": level must be positive and finite");
    }
}

inline void require_rate(double lambda, const char* who)
{
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument(std::string(who) + ": rate must be nonnegative");
    }
}

inline QuadratureSpec inner_spec()
{
    QuadratureSpec q;
    q.abs_tol = 1e-13;
    q.rel_tol = 1e-11;
    q.max_subdiv = 200;
    return q;
}

} // namespace detail

/// g_x(s) = (1 - exp(-x^2/2s)) / (x sqrt(2 pi s)) for s > 0, else 0.
inline double g_density(double x, double s)
{
    detail::require_level(x, "g_density");
    if (!(s > 0.0)) return 0.0;
    return -std::expm1(-x * x / (2.0 * s)) / (x * std::sqrt(2.0 * std::numbers::pi * s));
}

/**
 * Self-convolution of g_x at t: the density of the excised time up to the
 * first passage at x. Folded at t/2 by symmetry; s = u^2 removes the 1/sqrt
 * singularity of the factor that starts at 0.
 */
inline double tau_e_density(double x, double t, const QuadratureSpec& spec = detail::inner_spec())
{
    detail::require_level(x, "tau_e_density");
    if (!(t > 0.0)) return 0.0;
    const double c = 1.0 / (x * std::sqrt(2.0 * std::numbers::pi));
    // 2u * g_x(u^2) written without the cancelling u.
    auto f = [&](double u) {
        const double s = u * u;
        const double lead = u > 0.0 ? -std::expm1(-x * x / (2.0 * s)) * c : 0.0;
        return 2.0 * 2.0 * lead * g_density(x, t - s);
    };
    QuadratureSpec q = spec;
    q.substitution = Substitution::none;
    return integrate(f, 0.0, std::sqrt(0.5 * t), q).value;
}

/// Same convolution over the whole support, substitution at both endpoints.
inline double tau_e_density_direct(double x, double t, const QuadratureSpec& spec = detail::inner_spec())
{
    detail::require_level(x, "tau_e_density_direct");
    if (!(t > 0.0)) return 0.0;
    QuadratureSpec q = spec;
    q.substitution = Substitution::sqrt_endpoint;
    return integrate([&](double s) { return g_density(x, s) * g_density(x, t - s); }, 0.0, t, q).value;
}

/// phi_x(t) = 2 f(1 - (x/2t)^2) for t > x/2, else 0.
inline double phi(double x, double t, const QuadratureSpec& spec = detail::inner_spec())
{
    detail::require_level(x, "phi");
    if (!(t > 0.5 * x)) return 0.0;
    const double r = x / (2.0 * t);
    return 2.0 * tau_e_density(x, 1.0 - r * r, spec);
}

inline double phi_direct(double x, double t, const QuadratureSpec& spec = detail::inner_spec())
{
    detail::require_level(x, "phi_direct");
    if (!(t > 0.5 * x)) return 0.0;
    const double r = x / (2.0 * t);
    return 2.0 * tau_e_density_direct(x, 1.0 - r * r, spec);
}

/**
 * Phi(t) = integral over x > 0 of phi_x(t); the integrand vanishes for
 * x >= 2t and jumps there from 1/x^2, so the upper end gets the sqrt
 * substitution.
 */
inline double phi_integral_over_x(double t, const QuadratureSpec& spec = {})
{
    if (!(t > 0.0)) return 0.0;
    QuadratureSpec q = spec;
    q.substitution = Substitution::sqrt_endpoint;
    q.max_subdiv = std::max(q.max_subdiv, 100);
    return integrate([&](double x) { return x > 0.0 ? phi(x, t) : 0.0; }, 0.0, 2.0 * t, q).value;
}

/// E[exp(-lambda H_y)] for the Bessel(3) first passage at y.
inline double laplace_hitting(double y, double lambda)
{
    detail::require_level(y, "laplace_hitting");
    detail::require_rate(lambda, "laplace_hitting");
    const double z = y * std::sqrt(2.0 * lambda);
    if (z < 1e-8) return 1.0 - z * z / 6.0;
    if (z > 30.0) return 2.0 * z * std::exp(-z) / (-std::expm1(-2.0 * z));
    return z / std::sinh(z);
}

/// E[exp(-lambda tau_x)] = ((x sqrt(lambda)/sqrt 2) / sinh(x sqrt(lambda)/sqrt 2))^2.
inline double laplace_tau(double x, double lambda)
{
    detail::require_level(x, "laplace_tau");
    detail::require_rate(lambda, "laplace_tau");
    const double z = x * std::sqrt(lambda) / std::numbers::sqrt2;
    double r;
    if (z < 1e-8) {
        r = 1.0 - z * z / 6.0;
    } else if (z > 30.0) {
        r = 2.0 * z * std::exp(-z) / (-std::expm1(-2.0 * z));
    } else {
        r = z / std::sinh(z);
    }
    return r * r;
}

/// E[exp(-lambda tau_x^e)] = ((1 - exp(-x sqrt(2 lambda))) / (x sqrt(2 lambda)))^2.
inline double laplace_tau_e(double x, double lambda)
{
    detail::require_level(x, "laplace_tau_e");
    detail::require_rate(lambda, "laplace_tau_e");
    const double z = x * std::sqrt(2.0 * lambda);
    if (z < 1e-8) return 1.0 - z;
    const double r = -std::expm1(-z) / z;
    return r * r;
}

/// E[exp(-lambda T_x)] = exp(-x sqrt(2 lambda)).
inline double laplace_T(double x, double lambda)
{
    detail::require_level(x, "laplace_T");
    detail::require_rate(lambda, "laplace_T");
    return std::exp(-x * std::sqrt(2.0 * lambda));
}

/// Density of the first passage time T_x of Brownian motion.
inline double T_density(double x, double t)
{
    detail::require_level(x, "T_density");
    if (!(t > 0.0)) return 0.0;
    return x / (std::sqrt(2.0 * std::numbers::pi) * t * std::sqrt(t)) * std::exp(-x * x / (2.0 * t));
}

inline double rayleigh_density(double m)
{
    if (!(m > 0.0)) return 0.0;
    return m * std::exp(-0.5 * m * m);
}

inline double rayleigh_cdf(double m)
{
    if (!(m > 0.0)) return 0.0;
    return -std::expm1(-0.5 * m * m);
}

/**
 * Phi on a natural cubic spline over [lo, hi]; direct quadrature outside.
 * Built once, immutable, safe to share between threads.
 */
class PhiTable {
public:
    // Knots extend kPad intervals past both served ends: the natural end
    // condition is wrong for Phi, and its error decays over a few intervals.
    static constexpr std::size_t kPad = 24;

    explicit PhiTable(double lo = 0.25, double hi = 6.0, std::size_t n = 600)
        : lo_{lo}, hi_{hi}, h_{(hi - lo) / static_cast<double>(n)}
    {
        if (!(lo - static_cast<double>(kPad) * h_ > 0.0) || !(hi > lo) || n < 2) {
            throw std::invalid_argument("PhiTable: need 0 < lo - pad and lo < hi");
        }
        base_ = lo_ - static_cast<double>(kPad) * h_;
        const std::size_t m = n + 2 * kPad;
        y_.resize(m + 1);
        m_.assign(m + 1, 0.0);
        for (std::size_t i = 0; i <= m; ++i) {
            y_[i] = phi_integral_over_x(base_ + h_ * static_cast<double>(i));
        }
        // Natural spline second derivatives (Thomas algorithm on the uniform grid).
        std::vector<double> c(m + 1, 0.0);
        std::vector<double> d(m + 1, 0.0);
        for (std::size_t i = 1; i < m; ++i) {
            const double rhs = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (h_ * h_);
            const double denom = 4.0 - c[i - 1];
            c[i] = 1.0 / denom;
            d[i] = (rhs - d[i - 1]) / denom;
        }
        for (std::size_t i = m - 1; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
        }
    }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

    double operator()(double t) const
    {
        if (t < lo_ || t > hi_) return phi_integral_over_x(t);
        const std::size_t n = y_.size() - 1;
        std::size_t i = static_cast<std::size_t>((t - base_) / h_);
        if (i >= n) i = n - 1;
        const double a = base_ + h_ * static_cast<double>(i);
        const double s = (t - a) / h_;
        const double r = 1.0 - s;
        return r * y_[i] + s * y_[i + 1] +
               h_ * h_ / 6.0 * ((r * r * r - r) * m_[i] + (s * s * s - s) * m_[i + 1]);
    }

    /// Process-wide table with the default layout.
    static const PhiTable& shared()
    {
        static const PhiTable table;
        return table;
    }

private:
    double lo_;
    double hi_;
    double h_;
    double base_ = 0.0;
    std::vector<double> y_;
    std::vector<double> m_;
};

} // namespace excision
