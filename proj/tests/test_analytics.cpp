#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "excision/analytics.hpp"
#include "excision/quadrature.hpp"

using namespace excision;

// Reference values below were computed independently with 30-digit mpmath
// quadrature of the closed forms.
constexpr double kLaplaceTau_1_half = 0.920673594207792;
constexpr double kLaplaceTauE_1_half = 0.399576400893728;
constexpr double kG_1_1 = 0.156971555882289;
constexpr double kTauEDensity_1_075 = 0.262247588678973;
constexpr double kPhi_1_1 = 0.524495177357947;
constexpr double kPhiInt_05 = 0.545169645550585;
constexpr double kPhiInt_1 = 0.739245501816178;
constexpr double kPhiInt_2 = 0.892200138783587;

TEST(Analytics, GDensityPointAndNormalization)
{
    EXPECT_NEAR(g_density(1.0, 1.0), kG_1_1, 1e-13);
    EXPECT_EQ(g_density(1.0, 0.0), 0.0);
    EXPECT_EQ(g_density(1.0, -1.0), 0.0);
    QuadratureSpec s;
    s.substitution = Substitution::sqrt_endpoint;
    s.abs_tol = 1e-12;
    s.rel_tol = 1e-12;
    auto r = integrate_to_infinity([](double t) { return g_density(1.0, t); }, 0.0, s);
    EXPECT_NEAR(r.value, 1.0, 1e-8);
}

TEST(Analytics, GDensityScaling)
{
    for (double x : {0.3, 1.7, 4.0}) {
        for (double s : {0.01, 0.4, 3.0}) {
            EXPECT_NEAR(g_density(x, s), g_density(1.0, s / (x * x)) / (x * x), 1e-12 * g_density(x, s) + 1e-300);
        }
    }
}

TEST(Analytics, LaplaceTauHighPrecision)
{
    EXPECT_NEAR(laplace_tau(1.0, 0.5), kLaplaceTau_1_half, 1e-12);
    EXPECT_EQ(laplace_tau(1.0, 0.0), 1.0);
    const double h = laplace_hitting(0.5, 0.5);
    EXPECT_NEAR(laplace_tau(1.0, 0.5), h * h, 1e-14);
}

TEST(Analytics, LaplaceTauE)
{
    EXPECT_NEAR(laplace_tau_e(1.0, 0.5), kLaplaceTauE_1_half, 1e-12);
    EXPECT_NEAR(laplace_tau_e(1.0, 1e-14), 1.0, 1e-6);
}

TEST(Analytics, ProductIdentityOnGrid)
{
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double x = 0.2 + 0.4 * i;
            const double l = 0.05 + 0.35 * j;
            EXPECT_NEAR(laplace_tau(x, l) * laplace_tau_e(x, l), std::exp(-x * std::sqrt(2.0 * l)), 1e-12);
            EXPECT_NEAR(laplace_T(x, l), std::exp(-x * std::sqrt(2.0 * l)), 1e-15);
        }
    }
}

TEST(Analytics, TauEDensityPointAndLaplace)
{
    EXPECT_NEAR(tau_e_density(1.0, 0.75), kTauEDensity_1_075, 1e-9);
    EXPECT_NEAR(tau_e_density_direct(1.0, 0.75), kTauEDensity_1_075, 1e-9);
    QuadratureSpec s;
    s.abs_tol = 1e-11;
    s.rel_tol = 1e-10;
    for (double l : {0.25, 0.5, 1.0, 2.0}) {
        auto r = integrate_to_infinity([&](double t) { return std::exp(-l * t) * tau_e_density(1.0, t); }, 0.0, s);
        EXPECT_NEAR(r.value, laplace_tau_e(1.0, l), 1e-6) << "lambda " << l;
    }
}

TEST(Analytics, PhiKernel)
{
    EXPECT_NEAR(phi(1.0, 1.0), kPhi_1_1, 1e-9);
    EXPECT_NEAR(phi_direct(1.0, 1.0), kPhi_1_1, 1e-9);
    EXPECT_NEAR(phi(1.0, 1.0), 2.0 * tau_e_density(1.0, 0.75), 1e-12);
    // Vanishes once x >= 2t.
    EXPECT_EQ(phi(2.0, 1.0), 0.0);
    EXPECT_EQ(phi(3.0, 1.0), 0.0);
}

TEST(Analytics, PhiIntegralOverX)
{
    EXPECT_NEAR(phi_integral_over_x(0.5), kPhiInt_05, 1e-8);
    EXPECT_NEAR(phi_integral_over_x(1.0), kPhiInt_1, 1e-8);
    EXPECT_NEAR(phi_integral_over_x(2.0), kPhiInt_2, 1e-8);
}

TEST(Analytics, PhiTableMatchesDirectEvaluation)
{
    const PhiTable& t = PhiTable::shared();
    for (double m = 0.06; m < 5.95; m += 0.0731) {
        EXPECT_NEAR(t(m), phi_integral_over_x(m), 1e-9) << "m " << m;
    }
    EXPECT_NEAR(t(0.01), phi_integral_over_x(0.01), 1e-15);
    EXPECT_NEAR(t(7.0), phi_integral_over_x(7.0), 1e-15);
}

TEST(Analytics, HittingAndRayleigh)
{
    EXPECT_NEAR(T_density(1.0, 1.0), std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi), 1e-15);
    EXPECT_EQ(T_density(1.0, 0.0), 0.0);
    QuadratureSpec s;
    s.abs_tol = 1e-12;
    s.rel_tol = 1e-12;
    auto r = integrate_to_infinity([](double t) { return T_density(1.0, t); }, 0.0, s);
    EXPECT_NEAR(r.value, 1.0, 1e-8);
    EXPECT_NEAR(rayleigh_density(1.0), std::exp(-0.5), 1e-15);
    EXPECT_EQ(rayleigh_density(-1.0), 0.0);
    auto q = integrate_to_infinity([](double m) { return rayleigh_density(m); }, 0.0, s);
    EXPECT_NEAR(q.value, 1.0, 1e-10);
    EXPECT_NEAR(rayleigh_cdf(1.0), 1.0 - std::exp(-0.5), 1e-15);
}

TEST(Analytics, RejectsBadArguments)
{
    EXPECT_THROW(g_density(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(laplace_tau(-1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(laplace_tau(1.0, -1.0), std::invalid_argument);
}

// E[Phi(max of the excursion)] and E[max * Phi(max)] by quadrature against the
// Kolmogorov law of the excursion maximum: P(max <= m) = sum (1 - 4k^2 m^2) e^{-2 k^2 m^2}.
TEST(Analytics, ExcursionMaxMomentsOfPhi)
{
    auto density = [](double m) {
        double s = 0.0;
        for (int k = 1; k < 60; ++k) {
            const double a = 2.0 * k * k * m * m;
            s += (-4.0 * k * k * m * (3.0 - 4.0 * k * k * m * m) * std::exp(-a));
        }
        return 2.0 * s;
    };
    QuadratureSpec s;
    s.abs_tol = 1e-11;
    s.rel_tol = 1e-10;
    const PhiTable& t = PhiTable::shared();
    auto one = integrate([&](double m) { return density(m); }, 0.2, 6.0, s);
    EXPECT_NEAR(one.value, 1.0, 1e-6);
    auto e = integrate([&](double m) { return m * t(m) * density(m); }, 0.2, 6.0, s);
    EXPECT_NEAR(e.value, 1.0, 1e-6);
    auto c = integrate([&](double m) { return t(m) * density(m); }, 0.2, 6.0, s);
    EXPECT_NEAR(c.value, 0.787082622, 1e-6);
}
