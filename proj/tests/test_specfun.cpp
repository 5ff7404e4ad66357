#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qlm/specfun.hpp"

using namespace qlm;

TEST_CASE("regularized incomplete gamma") {
    CHECK(regularized_upper_gamma(0.25, 0.0) == 1.0);
    CHECK(regularized_upper_gamma(0.75, 0.0) == 1.0);
    CHECK(regularized_lower_gamma(0.25, 0.0) == 0.0);
    CHECK_THROWS_AS(regularized_upper_gamma(0.25, -1.0), std::domain_error);
    CHECK_THROWS_AS(regularized_upper_gamma(0.0, 1.0), std::domain_error);
    // complementary pair across both the series and continued-fraction regimes
    for (double a : {0.25, 0.5, 0.75, 1.0}) {
        double prev = 1.1;
        for (double x : {0.01, 0.1, 0.5, 1.0, 1.2, 2.0, 5.0, 10.0, 30.0}) {
            double q = regularized_upper_gamma(a, x);
            double p = regularized_lower_gamma(a, x);
            CHECK(std::fabs(p + q - 1.0) <= 1e-12);
            CHECK(q >= 0.0);
            CHECK(q <= 1.0);
            CHECK(q < prev);  // strictly decreasing in x
            prev = q;
        }
    }
    // Q(1, x) = exp(-x) exactly
    for (double x : {0.3, 1.0, 4.0})
        CHECK(std::fabs(regularized_upper_gamma(1.0, x) - std::exp(-x)) <= 1e-14);
}

TEST_CASE("kernel parameters") {
    KernelParams kp = KernelParams::from_parity(1);
    CHECK(kp.a == 0.0);
    CHECK(kp.c == 0.25);
    KernelParams km = KernelParams::from_parity(-1);
    CHECK(km.a == 1.0);
    CHECK(km.c == 0.75);
    CHECK_THROWS_AS(KernelParams::from_parity(0), std::domain_error);
}

TEST_CASE("V kernel closed form vs Mellin oracle") {
    CHECK(V_kernel(1, 0.0) == 1.0);
    CHECK(V_kernel(-1, 0.0) == 1.0);
    CHECK(V_kernel(1, 3.0) < 1e-12);  // Q(1/4, 9*pi) ~ 1.2e-14
    for (int j : {1, -1})
        for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0}) {
            INFO("j=" << j << " x=" << x);
            REQUIRE(std::fabs(V_kernel(j, x) - V_mellin_oracle(j, x)) <= 1e-10);
        }
    // monotone decreasing, values in (0, 1]
    for (int j : {1, -1}) {
        double prev = 1.0 + 1e-15;
        for (double x = 0.0; x <= 3.0; x += 0.05) {
            double v = V_kernel(j, x);
            REQUIRE(v > 0.0);
            REQUIRE(v <= 1.0);
            REQUIRE(v < prev);
            prev = v;
        }
    }
    // rigorous Gaussian-decay envelope for x >= 1
    for (int j : {1, -1})
        for (double x = 1.0; x <= 4.0; x += 0.25)
            REQUIRE(V_kernel(j, x) <= V_kernel_bound(j, x));
    CHECK_THROWS_AS(V_kernel(1, -0.5), std::domain_error);
    CHECK_THROWS_AS(V_mellin_oracle(1, 0.0), std::domain_error);
}

TEST_CASE("gamma factors and their derivative at 0") {
    CHECK(std::fabs(gamma_factor(1, 0.0) - 1.0) <= 1e-14);
    CHECK(std::fabs(gamma_factor(-1, 0.0) - 1.0) <= 1e-14);
    // (psi(1/4) - log pi)/2 with psi(1/4) = -gamma0 - 3 ln 2 - pi/2
    double psi14 = -0.57721566490153286 - 3.0 * std::log(2.0) - kPi / 2.0;
    CHECK(std::fabs(gamma_factor_dlog0(1) - (psi14 - std::log(kPi)) / 2.0) <= 1e-12);
    CHECK(gamma_factor_dlog0(1) == Catch::Approx(-2.6860917096128323).epsilon(1e-12));
    CHECK(gamma_factor_dlog0(-1) == Catch::Approx(-1.1152953828179362).epsilon(1e-12));
    // central finite differences at step 1e-5 (gamma_j(0) = 1, so the log
    // derivative coincides with the plain derivative there)
    const double h = 1e-5;
    for (int j : {1, -1}) {
        double fd = (gamma_factor(j, h) - gamma_factor(j, -h)) / (2.0 * h);
        REQUIRE(std::fabs(fd - gamma_factor_dlog0(j)) <= 1e-6);
    }
    CHECK_THROWS_AS(gamma_factor(1, -0.5), std::domain_error);
    CHECK_THROWS_AS(gamma_factor(-1, -1.5), std::domain_error);
}

TEST_CASE("digamma sanity") {
    CHECK(std::fabs(digamma(1.0) + 0.57721566490153286) <= 1e-12);
    // recurrence psi(x+1) = psi(x) + 1/x
    for (double x : {0.25, 0.7, 1.3, 5.5})
        CHECK(std::fabs(digamma(x + 1.0) - digamma(x) - 1.0 / x) <= 1e-12);
    CHECK_THROWS_AS(digamma(0.0), std::domain_error);
}

TEST_CASE("hurwitz zeta") {
    // classical value zeta(1/2) = zeta(1/2, 1)
    CHECK(hurwitz_zeta(0.5, 1.0) == Catch::Approx(-1.4603545088095868).epsilon(1e-10));
    // self-consistency at two different Euler-Maclaurin offsets
    for (double a : {0.1, 0.5, 0.9, 1.0})
        CHECK(std::fabs(hurwitz_zeta(0.5, a, 36) - hurwitz_zeta(0.5, a, 72)) <= 1e-12);
    // defining recurrence zeta(s, a) - zeta(s, a+1) = a^{-s}
    for (double a : {0.2, 0.5, 0.75, 1.0})
        CHECK(std::fabs(hurwitz_zeta(0.5, a) - hurwitz_zeta(0.5, a + 1.0) -
                        std::pow(a, -0.5)) <= 1e-11);
    // duplication identity sum_{r<=m} zeta(s, r/m) = m^s zeta(s)
    double z = hurwitz_zeta(0.5, 1.0);
    for (int m : {2, 3, 5}) {
        double s = 0.0;
        for (int r = 1; r <= m; ++r) s += hurwitz_zeta(0.5, double(r) / m);
        REQUIRE(std::fabs(s - std::sqrt(double(m)) * z) <= 1e-9);
    }
    // zeta(2, 1) = pi^2/6
    CHECK(std::fabs(hurwitz_zeta(2.0, 1.0) - kPi * kPi / 6.0) <= 1e-12);
    CHECK_THROWS_AS(hurwitz_zeta(1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(hurwitz_zeta_half(0.0), std::domain_error);
    CHECK_THROWS_AS(hurwitz_zeta_half(1.5), std::domain_error);
}

TEST_CASE("fundamental discriminant recognizer") {
    CHECK(is_fundamental_discriminant(5));
    CHECK(is_fundamental_discriminant(-4));
    CHECK(is_fundamental_discriminant(8));
    CHECK(is_fundamental_discriminant(-3));
    CHECK_FALSE(is_fundamental_discriminant(1));
    CHECK_FALSE(is_fundamental_discriminant(25));
    CHECK_FALSE(is_fundamental_discriminant(4));
    CHECK_FALSE(is_fundamental_discriminant(-6));
}

TEST_CASE("real Dirichlet L-values at s = 1, 2") {
    const double gold = 0.5 * (1.0 + std::sqrt(5.0));
    CHECK(dirichlet_L_real(1, -4) == Catch::Approx(kPi / 4.0).epsilon(1e-12));
    CHECK(dirichlet_L_real(1, 5) ==
          Catch::Approx(2.0 * std::log(gold) / std::sqrt(5.0)).epsilon(1e-12));
    // class number formula, |D| in {3, 4, 5, 8}:
    CHECK(dirichlet_L_real(1, -3) == Catch::Approx(kPi / (3.0 * std::sqrt(3.0))).epsilon(1e-7));
    CHECK(dirichlet_L_real(1, 8) ==
          Catch::Approx(std::log(1.0 + std::sqrt(2.0)) / std::sqrt(2.0)).epsilon(1e-7));
    // Euler-product bracketing at s = 2
    double z2 = kPi * kPi / 6.0;
    for (int64_t D : {5, 13, -3, -4, 8, -8}) {
        double L2 = dirichlet_L_real(2, D);
        CHECK(L2 > 1.0 / z2);
        CHECK(L2 < z2);
    }
    // L(2, chi_{-4}) = Catalan's constant
    CHECK(dirichlet_L_real(2, -4) == Catch::Approx(0.91596559417721901).epsilon(1e-10));
    CHECK_THROWS_AS(dirichlet_L_real(1, 20), std::domain_error);  // 20 = 4*5, 5 = 1 mod 4
    CHECK_THROWS_AS(dirichlet_L_real(3, 5), std::domain_error);
}

TEST_CASE("Gauss-Legendre quadrature") {
    // exactness on polynomials of degree < 2n
    double I = gl_integrate([](double x) { return x * x; }, 0.0, 1.0, 8);
    CHECK(std::fabs(I - 1.0 / 3.0) <= 1e-15);
    double J = gl_integrate_adaptive([](double x) { return std::sin(10.0 * x); },
                                     0.0, kPi, 16, 1e-13);
    CHECK(std::fabs(J - (1.0 - std::cos(10.0 * kPi)) / 10.0) <= 1e-12);
    CHECK_THROWS_AS(gauss_legendre(1), std::domain_error);
}

TEST_CASE("weight and its Mellin transform") {
    WeightSpec w;
    CHECK(w(0.5) == 0.0);
    CHECK(w(1.0) == 0.0);
    CHECK(w(0.25) == 0.0);
    CHECK(w(0.75) == Catch::Approx(std::exp(-16.0)).epsilon(1e-14));
    double w1 = mellin_weight(w, 1.0);
    CHECK(w1 > 0.0);
    CHECK(mellin_weight_d1(w) < 0.0);  // support inside (1/2, 1), log x < 0
    // finite for any real s (compact support away from 0)
    for (double s : {-2.0, 0.0, 3.5}) CHECK(std::isfinite(mellin_weight(w, s)));
    // w~'(1) by central differences of w~(s) at s = 1
    const double h = 1e-4;
    double fd = (mellin_weight(w, 1.0 + h) - mellin_weight(w, 1.0 - h)) / (2.0 * h);
    CHECK(std::fabs(fd - mellin_weight_d1(w)) <= 1e-12);
}

TEST_CASE("complex log-gamma matches the real one on the real axis") {
    for (double x : {0.5, 1.0, 2.5, 7.25}) {
        std::complex<double> lg = lgamma_complex({x, 0.0});
        CHECK(std::fabs(lg.real() - std::lgamma(x)) <= 1e-12 * std::max(1.0, std::fabs(std::lgamma(x))));
        CHECK(std::fabs(lg.imag()) <= 1e-12);
    }
    CHECK_THROWS_AS(lgamma_complex({0.25, 0.0}), std::domain_error);
}
