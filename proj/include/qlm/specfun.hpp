// Special-function kernel: regularized incomplete gamma, the approximate
// functional equation kernels V_{+-1} (closed form + independent Mellin
// quadrature oracle), gamma factors and their log-derivatives at 0, Hurwitz
// zeta by Euler-Maclaurin, real Dirichlet L-values at s = 1 and 2, and
// Mellin transforms of the smooth weight.
#ifndef QLM_SPECFUN_HPP
#define QLM_SPECFUN_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qlm/arith.hpp"

namespace qlm {

struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Digamma, by argument-raising recurrence plus the asymptotic series.
// ---------------------------------------------------------------------------
inline double digamma(double x) {
    if (x <= 0.0) throw std::domain_error("digamma: x must be positive");
    double r = 0.0;
    while (x < 12.0) { r -= 1.0 / x; x += 1.0; }
    // psi(x) ~ ln x - 1/(2x) - sum B_{2k} / (2k x^{2k})
    double inv2 = 1.0 / (x * x);
    double series = inv2 * (1.0 / 12.0 -
                    inv2 * (1.0 / 120.0 -
                    inv2 * (1.0 / 252.0 -
                    inv2 * (1.0 / 240.0 -
                    inv2 * (1.0 / 132.0 -
                    inv2 * (691.0 / 32760.0))))));
    return r + std::log(x) - 0.5 / x - series;
}

// ---------------------------------------------------------------------------
// Regularized incomplete gamma: lower P(a,x) by power series, upper Q(a,x)
// by Lentz continued fraction, switched at x = a + 1.
// ---------------------------------------------------------------------------
namespace detail {

inline double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-17)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw accuracy_error("gamma_p_series: no convergence");
}

inline double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-17)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw accuracy_error("gamma_q_contfrac: no convergence");
}

}  // namespace detail

inline double regularized_lower_gamma(double a, double x) {
    if (x < 0.0) throw std::domain_error("regularized_lower_gamma: x must be >= 0");
    if (a <= 0.0) throw std::domain_error("regularized_lower_gamma: a must be > 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_contfrac(a, x);
}

inline double regularized_upper_gamma(double a, double x) {
    if (x < 0.0) throw std::domain_error("regularized_upper_gamma: x must be >= 0");
    if (a <= 0.0) throw std::domain_error("regularized_upper_gamma: a must be > 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_contfrac(a, x);
}

// ---------------------------------------------------------------------------
// AFE kernel parameters: parity j in {+1,-1}, a_j = (1-j)/2, c_j = (1/2+a_j)/2.
// ---------------------------------------------------------------------------
struct KernelParams {
    int parity = 1;
    double a = 0.0;
    double c = 0.25;

    static KernelParams from_parity(int j) {
        if (j != 1 && j != -1) throw std::domain_error("parity must be +1 or -1");
        KernelParams k;
        k.parity = j;
        k.a = (1.0 - j) / 2.0;
        k.c = (0.5 + k.a) / 2.0;
        return k;
    }
};

// V_j(x) = Q(c_j, pi x^2): the inverse Mellin transform of gamma_j(s)/s
// under the shift w = (s + 1/2 + a_j)/2, which turns the contour integral
// into the Mellin-Barnes representation of the upper incomplete gamma.
inline double V_kernel(int j, double x) {
    if (x < 0.0) throw std::domain_error("V_kernel: x must be >= 0");
    KernelParams k = KernelParams::from_parity(j);
    return regularized_upper_gamma(k.c, kPi * x * x);
}

// Rigorous upper bound for V_j(x) when pi x^2 >= 1, from
// Gamma(a,y) <= y^{a-1} e^{-y} valid for a <= 1.
inline double V_kernel_bound(int j, double x) {
    KernelParams k = KernelParams::from_parity(j);
    double y = kPi * x * x;
    if (y < 1.0) return 1.0;
    return std::pow(y, k.c - 1.0) * std::exp(-y) / std::tgamma(k.c);
}

// ---------------------------------------------------------------------------
// Gamma factors gamma_j(s) = pi^{-s/2} Gamma((1/2+a_j+s)/2) / Gamma(c_j),
// real s only, and the derivative at 0.
// ---------------------------------------------------------------------------
inline double gamma_factor(int j, double s) {
    KernelParams k = KernelParams::from_parity(j);
    double arg = (0.5 + k.a + s) / 2.0;
    if (arg <= 0.0)
        throw std::domain_error("gamma_factor: s at or beyond the first pole");
    return std::pow(kPi, -s / 2.0) *
           std::exp(std::lgamma(arg) - std::lgamma(k.c));
}

// gamma_j'(0) = (psi(c_j) - log pi) / 2   (gamma_j(0) = 1).
inline double gamma_factor_dlog0(int j) {
    KernelParams k = KernelParams::from_parity(j);
    return (digamma(k.c) - std::log(kPi)) / 2.0;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes/weights on [-1,1], generated by Newton iteration.
// ---------------------------------------------------------------------------
struct GaussLegendre {
    std::vector<double> x, w;
};

inline const GaussLegendre& gauss_legendre(int n) {
    static thread_local std::vector<GaussLegendre> cache(4097);
    if (n < 2 || n > 4096) throw std::domain_error("gauss_legendre: bad order");
    GaussLegendre& gl = cache[size_t(n)];
    if (!gl.x.empty()) return gl;
    gl.x.resize(size_t(n));
    gl.w.resize(size_t(n));
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p0 / pp;
            if (std::fabs(z - z1) < 1e-16) break;
        }
        gl.x[size_t(i)] = -z;
        gl.x[size_t(n - 1 - i)] = z;
        gl.w[size_t(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
        gl.w[size_t(n - 1 - i)] = gl.w[size_t(i)];
    }
    return gl;
}

// Integrate f over [a,b] with an n-point Gauss-Legendre rule.
template <typename F>
inline double gl_integrate(F&& f, double a, double b, int n) {
    const GaussLegendre& gl = gauss_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += gl.w[size_t(i)] * f(mid + half * gl.x[size_t(i)]);
    return s * half;
}

// Node-doubling until two refinements agree to abs_tol.
template <typename F>
inline double gl_integrate_adaptive(F&& f, double a, double b, int n0, double abs_tol) {
    double prev = gl_integrate(f, a, b, n0);
    for (int n = 2 * n0; n <= 4096; n *= 2) {
        double cur = gl_integrate(f, a, b, n);
        if (std::fabs(cur - prev) <= abs_tol) return cur;
        prev = cur;
    }
    throw accuracy_error("gl_integrate_adaptive: quadrature did not converge");
}

// ---------------------------------------------------------------------------
// Complex log-gamma (Lanczos, g = 7), used only by the Mellin oracle.
// ---------------------------------------------------------------------------
inline std::complex<double> lgamma_complex(std::complex<double> z) {
    static const double g[9] = {
        0.99999999999980993,  676.5203681218851,    -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,  12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5)
        throw std::domain_error("lgamma_complex: Re z >= 0.5 required");
    z -= 1.0;
    std::complex<double> a(g[0], 0.0);
    std::complex<double> t = z + 7.5;
    for (int i = 1; i < 9; ++i) a += g[i] / (z + double(i));
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

// Direct numerical evaluation of V_j(x) as the vertical-line integral
// (1/2 pi i) int_{(2)} gamma_j(s) x^{-s} ds / s, by composite Gauss-Legendre
// panels on t = Im s.  Independent of the incomplete-gamma closed form.
inline double V_mellin_oracle(int j, double x, double abs_tol = 1e-12) {
    if (x <= 0.0) throw std::domain_error("V_mellin_oracle: x must be > 0");
    KernelParams k = KernelParams::from_parity(j);
    double lgc = std::lgamma(k.c);
    auto integrand = [&](double t) {
        std::complex<double> s(2.0, t);
        std::complex<double> g =
            std::exp(-s / 2.0 * std::log(kPi) + lgamma_complex((0.5 + k.a + s) / 2.0) - lgc);
        std::complex<double> xs = std::exp(-s * std::log(x));
        return (g * xs / s).real();
    };
    const int nodes = 16;
    const double panel = 1.0;
    double total = 0.0;
    int quiet = 0;
    double t0 = 0.0;
    for (int i = 0; i < 400; ++i) {
        double piece = gl_integrate(integrand, t0, t0 + panel, nodes);
        total += piece;
        t0 += panel;
        if (std::fabs(piece) < abs_tol * 1e-3) {
            if (++quiet >= 3) return total / kPi;
        } else {
            quiet = 0;
        }
    }
    throw accuracy_error("V_mellin_oracle: tail did not fall below tolerance");
}

// ---------------------------------------------------------------------------
// Hurwitz zeta by Euler-Maclaurin with Bernoulli correction through B_10.
// Real s != 1, a > 0.
// ---------------------------------------------------------------------------
inline double hurwitz_zeta(double s, double a, int offset_terms = 36) {
    if (a <= 0.0) throw std::domain_error("hurwitz_zeta: a must be > 0");
    if (s == 1.0) throw std::domain_error("hurwitz_zeta: pole at s = 1");
    static const double B[5] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
                                5.0 / 66.0};
    const int N = offset_terms;
    double sum = 0.0;
    for (int n = 0; n < N; ++n) sum += std::pow(n + a, -s);
    double Na = N + a;
    sum += std::pow(Na, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(Na, -s);
    // sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * (N+a)^{-s-2j+1}
    double fact = 1.0;   // (2j)!
    double poch = 1.0;   // s (s+1) ... (s+2j-2)
    for (int jj = 1; jj <= 5; ++jj) {
        fact *= (2.0 * jj - 1.0) * (2.0 * jj);
        poch *= (jj == 1) ? s : (s + 2.0 * jj - 3.0) * (s + 2.0 * jj - 2.0);
        sum += B[jj - 1] / fact * poch * std::pow(Na, -s - 2.0 * jj + 1.0);
    }
    return sum;
}

inline double hurwitz_zeta_half(double a) {
    if (a <= 0.0 || a > 1.0)
        throw std::domain_error("hurwitz_zeta_half: a must be in (0, 1]");
    return hurwitz_zeta(0.5, a);
}

// ---------------------------------------------------------------------------
// L(s, chi_D) for fundamental discriminant D, at s = 1 (digamma formula) and
// s = 2 (Hurwitz formula); both exact finite character sums.
// ---------------------------------------------------------------------------
inline bool is_fundamental_discriminant(int64_t D) {
    if (D == 1 || D == 0) return false;
    int64_t r = ((D % 4) + 4) % 4;
    if (r == 1) return is_squarefree_small(D);
    if (r != 0) return false;
    int64_t m = D / 4;
    int64_t mr = ((m % 4) + 4) % 4;
    return (mr == 2 || mr == 3) && is_squarefree_small(m);
}

inline double dirichlet_L_real(int s, int64_t D) {
    if (!is_fundamental_discriminant(D))
        throw std::domain_error("dirichlet_L_real: D must be a fundamental discriminant");
    uint64_t q = uint64_t(D < 0 ? -D : D);
    if (q > 10000) throw std::length_error("dirichlet_L_real: |D| too large");
    if (s == 1) {
        // L(1, chi) = -(1/q) sum_a chi(a) psi(a/q)
        double sum = 0.0;
        for (uint64_t a = 1; a < q; ++a) {
            int c = kronecker(D, a);
            if (c != 0) sum += c * digamma(double(a) / double(q));
        }
        return -sum / double(q);
    }
    if (s == 2) {
        double sum = 0.0;
        for (uint64_t a = 1; a < q; ++a) {
            int c = kronecker(D, a);
            if (c != 0) sum += c * hurwitz_zeta(2.0, double(a) / double(q));
        }
        return sum / (double(q) * double(q));
    }
    throw std::domain_error("dirichlet_L_real: only s = 1 and s = 2 are supported");
}

// ---------------------------------------------------------------------------
// The smooth compactly supported weight and its Mellin transform.  Default:
// bump(x) = exp(-1/((x - 1/2)(1 - x))) on (1/2, 1), zero elsewhere.
// ---------------------------------------------------------------------------
struct WeightSpec {
    double x_lo = 0.5;
    double x_hi = 1.0;
    int quad_nodes = 64;

    double operator()(double x) const {
        if (x <= x_lo || x >= x_hi) return 0.0;
        return std::exp(-1.0 / ((x - x_lo) * (x_hi - x)));
    }
};

inline double mellin_weight(const WeightSpec& w, double s) {
    return gl_integrate_adaptive(
        [&](double x) { return w(x) * std::pow(x, s - 1.0); }, w.x_lo, w.x_hi,
        w.quad_nodes, 1e-13);
}

// w~'(1) = int w(x) log x dx.
inline double mellin_weight_d1(const WeightSpec& w) {
    return gl_integrate_adaptive([&](double x) { return w(x) * std::log(x); },
                                 w.x_lo, w.x_hi, w.quad_nodes, 1e-13);
}

}  // namespace qlm

#endif  // QLM_SPECFUN_HPP
