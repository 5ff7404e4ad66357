// Family enumeration over S(K), the empirical weighted first moment, the
// predicted main term Q * P_K(log Q), a brute-force triple-sum oracle for
// the +1-parity main term, and comparison / non-vanishing reports.
#ifndef QLM_MOMENT_HPP
#define QLM_MOMENT_HPP

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qlm/arith.hpp"
#include "qlm/lcentral.hpp"
#include "qlm/quadfield.hpp"
#include "qlm/specfun.hpp"

namespace qlm {

inline constexpr double kEulerGamma = 0.57721566490153286;

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// S(K) up to X: odd squarefree q > 1 all of whose prime factors split.
// ---------------------------------------------------------------------------
struct FamilyEntry {
    uint64_t q = 0;
    int omega = 0;
};

struct FamilySlice {
    int64_t field_d = 0;
    uint64_t bound = 0;
    std::vector<FamilyEntry> members;
};

inline bool in_family(const QuadraticField& K, uint64_t q, const FactorTable& table,
                      int* omega_out = nullptr) {
    if (q <= 1 || q % 2 == 0) return false;
    FactorSummary f = summarize(q, table);
    if (!f.is_squarefree) return false;
    for (const auto& [p, e] : f.factors)
        if (splitting_type(K, p) != SplittingType::Split) return false;
    if (omega_out) *omega_out = f.omega;
    return true;
}

inline FamilySlice enumerate_family(const QuadraticField& K, uint64_t X,
                                    const FactorTable& table) {
    if (X > table.limit)
        throw std::out_of_range("enumerate_family: X beyond table limit");
    FamilySlice slice;
    slice.field_d = K.d;
    slice.bound = X;
    for (uint64_t q = 3; q <= X; q += 2) {
        int om = 0;
        if (in_family(K, q, table, &om)) slice.members.push_back({q, om});
    }
    return slice;
}

// ---------------------------------------------------------------------------
// Splitting-aware Euler factor helpers.  For p | 2 D_K the prime ideals above
// p are: one of norm p (ramified), two of norm p (split 2), one of norm p^2
// (inert 2).
// ---------------------------------------------------------------------------
namespace detail {

enum class PClass { Split, Inert, Ramified };

inline PClass classify_prime(const QuadraticField& K, uint64_t p) {
    int64_t r = K.D % int64_t(p);
    if (r < 0) r += int64_t(p);
    if (r == 0) return PClass::Ramified;
    if (p == 2) return (((K.D % 8) + 8) % 8 == 1) ? PClass::Split : PClass::Inert;
    return jacobi(r, p) == 1 ? PClass::Split : PClass::Inert;
}

// prod_{P | p} f(N(P))
template <typename F>
inline double prod_over_primes_above(PClass c, uint64_t p, F&& f) {
    double pd = double(p);
    switch (c) {
        case PClass::Split: return f(pd) * f(pd);
        case PClass::Inert: return f(pd * pd);
        case PClass::Ramified: return f(pd);
    }
    return 1.0;
}

inline std::vector<uint64_t> primes_up_to(uint64_t n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<uint64_t> ps;
    for (uint64_t i = 2; i <= n; ++i) {
        if (!comp[i]) {
            ps.push_back(i);
            for (uint64_t j = i * i; j <= n; j += i) comp[j] = true;
        }
    }
    return ps;
}

// Rational primes dividing 2 D_K, each exactly once.
inline std::vector<uint64_t> primes_of_2D(const QuadraticField& K) {
    uint64_t n = 2 * uint64_t(K.D < 0 ? -K.D : K.D);
    std::vector<uint64_t> out;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// h_p: the local weight attached to any p^k || m with p coprime to 2 D_K:
//   prod_{P|p}(1 + N(P)^{-1})^{-1} * (1 - p^{-2} prod_{P|p}(1 + N(P)^{-1})^{-1})^{-1}
inline double local_weight(const QuadraticField& K, uint64_t p) {
    PClass c = classify_prime(K, p);
    double A = prod_over_primes_above(c, p, [](double np) { return 1.0 / (1.0 + 1.0 / np); });
    double B = 1.0 / (1.0 - A / (double(p) * double(p)));
    return A * B;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Predictor constants.
// ---------------------------------------------------------------------------
struct PredictorConstants {
    double C_K1 = 0.0;       // residue of zeta_K at 1 = L(1, chi_D)
    double C_K2 = 0.0;       // sieve Euler-product constant
    double zetaK2 = 0.0;     // zeta_K(2)
    double C_K_at_1 = 0.0;
    double C_K_deriv_1 = 0.0;
    double w_mellin_1 = 0.0;
    double w_mellin_d1 = 0.0;
    double gamma0 = kEulerGamma;
    double gamma_d0_plus = 0.0;
    double gamma_d0_minus = 0.0;
    uint64_t prime_cutoff = 0;
    int exponent_cutoff = 0;
    double ck2_tail_bound = 0.0;  // sum_{p > P} 2 p^{-2} estimate
};

// Truncated Euler product for C_K(s); the local factor is the finite
// geometric sum over k <= k_max with weight h_p, times (1 - p^{-s}).
inline double euler_CK(const QuadraticField& K,
                       const std::vector<uint64_t>& primes, double s, int k_max) {
    double prod = 1.0;
    for (uint64_t p : primes) {
        if ((2 * (K.D < 0 ? -K.D : K.D)) % int64_t(p) == 0) continue;
        double h = detail::local_weight(K, p);
        double ps = std::pow(double(p), -s);
        double geo = 0.0, term = ps;
        for (int k = 1; k <= k_max; ++k) {
            geo += term;
            term *= ps;
            if (term < 1e-18 * (geo + 1e-300)) break;
        }
        prod *= (1.0 - ps) * (1.0 + h * geo);
    }
    return prod;
}

inline PredictorConstants compute_constants(const QuadraticField& K, const WeightSpec& w,
                                            uint64_t prime_cutoff, int k_max) {
    if (prime_cutoff < 1000)
        throw std::domain_error("compute_constants: prime_cutoff must be >= 1000");
    PredictorConstants c;
    c.prime_cutoff = prime_cutoff;
    c.exponent_cutoff = k_max;
    c.C_K1 = dirichlet_L_real(1, K.D);
    c.zetaK2 = (kPi * kPi / 6.0) * dirichlet_L_real(2, K.D);

    auto primes = detail::primes_up_to(prime_cutoff);
    uint64_t absD = uint64_t(K.D < 0 ? -K.D : K.D);

    // C_{K,2} = prod_{P | 2 D_K}(1 + N(P)^{-1})^{-1}
    //           * prod_{p coprime to 2 D_K}(1 - p^{-2} prod_{P|p}(1+N(P)^{-1})^{-1})
    double ck2 = 1.0;
    for (uint64_t p : detail::primes_of_2D(K))
        ck2 *= detail::prod_over_primes_above(detail::classify_prime(K, p), p,
                                              [](double np) { return 1.0 / (1.0 + 1.0 / np); });
    for (uint64_t p : primes) {
        if ((2 * absD) % p == 0) continue;
        detail::PClass cls = detail::classify_prime(K, p);
        double A = detail::prod_over_primes_above(
            cls, p, [](double np) { return 1.0 / (1.0 + 1.0 / np); });
        ck2 *= 1.0 - A / (double(p) * double(p));
    }
    c.C_K2 = ck2;
    c.ck2_tail_bound = 2.0 / double(prime_cutoff);

    c.C_K_at_1 = euler_CK(K, primes, 1.0, k_max);
    const double h = 1e-5;
    c.C_K_deriv_1 =
        (euler_CK(K, primes, 1.0 + h, k_max) - euler_CK(K, primes, 1.0 - h, k_max)) /
        (2.0 * h);

    c.w_mellin_1 = mellin_weight(w, 1.0);
    c.w_mellin_d1 = mellin_weight_d1(w);
    c.gamma_d0_plus = gamma_factor_dlog0(1);
    c.gamma_d0_minus = gamma_factor_dlog0(-1);

    if (c.C_K1 <= 0.0 || c.C_K2 <= 0.0 || c.zetaK2 <= 0.0 || c.C_K_at_1 <= 0.0)
        throw accuracy_error("compute_constants: non-positive constant");
    return c;
}

// ---------------------------------------------------------------------------
// Main-term polynomial.  P_K = P+_K + P-_K; each parity contributes the
// residue at s = 0 of Q^{s/2} C_K(1+s) zeta(1+s) w~(1+s/2) gamma_j(s)/s,
// which with s zeta(1+s) = 1 + gamma_0 s + O(s^2) equals F'(0) + gamma_0 F(0)
// for F(s) = Q^{s/2} C_K(1+s) w~(1+s/2) gamma_j(s).
// ---------------------------------------------------------------------------
struct MainTermPolynomial {
    double slope_plus = 0.0, intercept_plus = 0.0;
    double slope_minus = 0.0, intercept_minus = 0.0;

    double slope() const { return slope_plus + slope_minus; }
    double intercept() const { return intercept_plus + intercept_minus; }
    double eval(double x) const { return slope() * x + intercept(); }
    double eval_plus(double x) const { return slope_plus * x + intercept_plus; }
    double eval_minus(double x) const { return slope_minus * x + intercept_minus; }
};

inline MainTermPolynomial main_term_polynomial(const PredictorConstants& c) {
    double C = c.C_K1 * c.C_K2 / c.zetaK2;
    double base = c.C_K_at_1 * c.w_mellin_1;
    double slope = C * 0.5 * base;
    auto intercept = [&](double gd0) {
        return C * (c.C_K_deriv_1 * c.w_mellin_1 + 0.5 * c.C_K_at_1 * c.w_mellin_d1 +
                    base * (gd0 + c.gamma0));
    };
    MainTermPolynomial p;
    p.slope_plus = slope;
    p.slope_minus = slope;
    p.intercept_plus = intercept(c.gamma_d0_plus);
    p.intercept_minus = intercept(c.gamma_d0_minus);
    return p;
}

// The paper's printed grouping of the same coefficients, kept verbatim for a
// side-by-side audit; the residue-derived polynomial above is authoritative.
inline MainTermPolynomial printed_term_polynomial(const PredictorConstants& c) {
    double C = c.C_K1 * c.C_K2 / c.zetaK2;
    double slope = C * 0.5 * c.C_K_at_1 * c.w_mellin_1;
    auto intercept = [&](double gd0) {
        return C * (c.C_K_deriv_1 + 0.5 * c.w_mellin_d1 + gd0 +
                    c.gamma0 * (c.C_K_at_1 + c.w_mellin_1));
    };
    MainTermPolynomial p;
    p.slope_plus = slope;
    p.slope_minus = slope;
    p.intercept_plus = intercept(c.gamma_d0_plus);
    p.intercept_minus = intercept(c.gamma_d0_minus);
    return p;
}

struct PredictedMain {
    double value = 0.0;        // Q * P_K(log Q), both parities
    double value_plus = 0.0;   // Q * P+_K(log Q)
    double value_minus = 0.0;  // Q * P-_K(log Q)
    MainTermPolynomial poly;
};

inline PredictedMain predicted_main(double Q, const PredictorConstants& c) {
    PredictedMain out;
    out.poly = main_term_polynomial(c);
    double x = std::log(Q);
    out.value_plus = Q * out.poly.eval_plus(x);
    out.value_minus = Q * out.poly.eval_minus(x);
    out.value = out.value_plus + out.value_minus;
    return out;
}

// ---------------------------------------------------------------------------
// Empirical moment: sum over q in S(K) with w(q/Q) != 0 of
// 2^omega(q) L(1/2, chi_q) w(q/Q).  Deterministic chunked reduction: per-q
// values are computed in parallel, combined in index order.
// ---------------------------------------------------------------------------
enum class Engine { AFE, Oracle };

inline const char* engine_name(Engine e) { return e == Engine::AFE ? "afe" : "oracle"; }

template <typename F>
inline void parallel_for_indexed(size_t n, unsigned workers, F&& body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers == 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= n || failed.load()) return;
                    body(i);
                }
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline double kahan_sum_ordered(const std::vector<double>& v) {
    double sum = 0.0, comp = 0.0;
    for (double term : v) {
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

inline double empirical_moment(const QuadraticField& K, double Q, const WeightSpec& w,
                               Engine engine, const AFEConfig& cfg,
                               const FactorTable& table, unsigned workers = 0,
                               LValueCache* cache = nullptr) {
    uint64_t qhi = uint64_t(std::ceil(w.x_hi * Q));
    if (qhi > table.limit)
        throw std::out_of_range("empirical_moment: weight support beyond table limit");
    uint64_t qlo = uint64_t(std::floor(w.x_lo * Q));
    std::vector<FamilyEntry> qs;
    for (uint64_t q = qlo | 1; q <= qhi; q += 2) {
        int om = 0;
        if (w(double(q) / Q) != 0.0 && in_family(K, q, table, &om))
            qs.push_back({q, om});
    }
    std::vector<double> terms(qs.size(), 0.0);
    parallel_for_indexed(qs.size(), workers, [&](size_t i) {
        const FamilyEntry& e = qs[i];
        CharQ chi{e.q, e.q % 4 == 1 ? 1 : -1};
        double L;
        const char* tag = engine_name(engine);
        if (cache) {
            auto hit = cache->lookup(e.q);
            if (hit && hit->engine == tag) {
                L = hit->value;
            } else {
                L = engine == Engine::AFE ? l_half_afe(chi, cfg) : l_half_oracle(chi);
            }
        } else {
            L = engine == Engine::AFE ? l_half_afe(chi, cfg) : l_half_oracle(chi);
        }
        terms[i] = std::ldexp(1.0, e.omega) * L * w(double(e.q) / Q);
    });
    if (cache) {
        for (size_t i = 0; i < qs.size(); ++i) {
            if (!cache->lookup(qs[i].q)) {
                CharQ chi{qs[i].q, qs[i].q % 4 == 1 ? 1 : -1};
                double wt = w(double(qs[i].q) / Q);
                if (wt != 0.0)
                    cache->store(qs[i].q, {terms[i] / (std::ldexp(1.0, qs[i].omega) * wt),
                                           cfg.eps_tail, engine_name(engine)});
                (void)chi;
            }
        }
    }
    return kahan_sum_ordered(terms);
}

// ---------------------------------------------------------------------------
// Brute-force oracle for the +1-parity main term: direct evaluation of the
// truncated triple sum
//   M0 = sum_d mu(d) sum_l mu_K(l) sum_{m=k^2, (k, d rad(l)) = 1}
//        (Q / (d^2 N(l)^2)) (1/k) f~(1; m) Res_{s=1} L(s, psi)
// with Res = C_{K,1} prod_{P | 2 d m D_K}(1 - N(P)^{-1}) and
// f~(1; m) = int V_{+1}(m / sqrt(Q x)) w(x) dx.
// ---------------------------------------------------------------------------
struct BruteForceCutoffs {
    uint64_t d_max = 1000;
    uint64_t l_norm_max = 1000;
    uint64_t m_max = 10000;
};

namespace detail {

struct PrimeMask {
    std::array<uint64_t, 16> bits{};

    void set(size_t i) { bits[i / 64] |= uint64_t(1) << (i % 64); }
    bool intersects(const PrimeMask& o) const {
        for (size_t w = 0; w < bits.size(); ++w)
            if (bits[w] & o.bits[w]) return true;
        return false;
    }
    PrimeMask operator|(const PrimeMask& o) const {
        PrimeMask r;
        for (size_t w = 0; w < bits.size(); ++w) r.bits[w] = bits[w] | o.bits[w];
        return r;
    }
};

struct SqfIdeal {
    double inv_norm_sq = 0.0;
    int mu = 1;
    PrimeMask mask;
};

}  // namespace detail

inline double predict_bruteforce_M0(const QuadraticField& K, double Q,
                                    const WeightSpec& w, const BruteForceCutoffs& cut,
                                    const FactorTable& table) {
    uint64_t absD = uint64_t(K.D < 0 ? -K.D : K.D);
    uint64_t k_max = uint64_t(std::sqrt(double(cut.m_max)));
    while ((k_max + 1) * (k_max + 1) <= cut.m_max) ++k_max;
    while (k_max * k_max > cut.m_max) --k_max;
    uint64_t pmax = std::max({cut.d_max, cut.l_norm_max, k_max});
    if (std::max(cut.d_max, k_max) > table.limit)
        throw std::out_of_range("predict_bruteforce_M0: cutoffs beyond table limit");
    auto primes = detail::primes_up_to(pmax);
    if (primes.size() > 1024)
        throw std::length_error("predict_bruteforce_M0: cutoffs too large for prime masks");
    std::vector<size_t> prime_index(pmax + 1, size_t(-1));
    for (size_t i = 0; i < primes.size(); ++i) prime_index[primes[i]] = i;

    // r_p = prod_{P | p}(1 - N(P)^{-1})
    std::vector<double> rp(primes.size(), 1.0);
    for (size_t i = 0; i < primes.size(); ++i)
        rp[i] = detail::prod_over_primes_above(detail::classify_prime(K, primes[i]),
                                               primes[i],
                                               [](double np) { return 1.0 - 1.0 / np; });
    double res_base = dirichlet_L_real(1, K.D);  // C_{K,1}
    for (uint64_t p : detail::primes_of_2D(K))
        res_base *= detail::prod_over_primes_above(
            detail::classify_prime(K, p), p, [](double np) { return 1.0 - 1.0 / np; });

    auto mask_and_rprod = [&](uint64_t n, detail::PrimeMask& mask, double& rprod) {
        rprod = 1.0;
        uint64_t m = n;
        while (m > 1) {
            uint64_t p = table.spf[m];
            while (m % p == 0) m /= p;
            mask.set(prime_index[p]);
            if ((2 * absD) % p != 0) rprod *= rp[prime_index[p]];
        }
    };

    // d-list: squarefree, coprime to 2 D_K.
    struct DEntry {
        double weight;  // mu(d) * Q / d^2 * rprod(d)
        detail::PrimeMask mask;
    };
    std::vector<DEntry> ds;
    for (uint64_t d = 1; d <= cut.d_max; ++d) {
        if (std::gcd(d, 2 * absD) != 1) continue;
        FactorSummary f = summarize(d, table);
        if (f.mu == 0) continue;
        DEntry e;
        double rprod = 1.0;
        mask_and_rprod(d, e.mask, rprod);
        e.weight = f.mu * (Q / (double(d) * double(d))) * rprod;
        ds.push_back(e);
    }

    // k-list with f~(1; k^2) per k.
    struct KEntry {
        double weight;  // (1/k) * f~(1; k^2) * rprod(k, primes coprime to 2 D_K)
        detail::PrimeMask mask;
    };
    std::vector<KEntry> ks;
    double sqQ = std::sqrt(Q);
    for (uint64_t k = 1; k <= k_max; ++k) {
        double m = double(k) * double(k);
        double f1 = gl_integrate_adaptive(
            [&](double x) { return V_kernel(1, m / (sqQ * std::sqrt(x))) * w(x); },
            w.x_lo, w.x_hi, w.quad_nodes, 1e-15);
        if (f1 < 1e-18) continue;
        KEntry e;
        double rprod = 1.0;
        mask_and_rprod(k, e.mask, rprod);
        e.weight = f1 * rprod / double(k);
        ks.push_back(e);
    }

    // Squarefree ideals l with norm <= l_norm_max, coprime to 2 D_K.
    struct PItem {
        uint64_t norm;
        size_t pidx;
    };
    std::vector<PItem> items;
    for (size_t i = 0; i < primes.size(); ++i) {
        uint64_t p = primes[i];
        if ((2 * absD) % p == 0) continue;
        detail::PClass c = detail::classify_prime(K, p);
        if (c == detail::PClass::Split) {
            if (p <= cut.l_norm_max) {
                items.push_back({p, i});
                items.push_back({p, i});  // the two conjugate prime ideals
            }
        } else if (c == detail::PClass::Inert) {
            if (p * p <= cut.l_norm_max) items.push_back({p * p, i});
        }
    }
    std::vector<detail::SqfIdeal> ls;
    ls.push_back(detail::SqfIdeal{1.0, 1, {}});
    // DFS over distinct prime-ideal items (conjugates are distinct items).
    std::vector<size_t> stack;
    auto dfs = [&](auto&& self, size_t start, uint64_t norm, int mu,
                   detail::PrimeMask mask) -> void {
        for (size_t i = start; i < items.size(); ++i) {
            if (norm > cut.l_norm_max / items[i].norm) continue;
            uint64_t nn = norm * items[i].norm;
            detail::PrimeMask nm = mask;
            nm.set(items[i].pidx);
            ls.push_back(detail::SqfIdeal{1.0 / (double(nn) * double(nn)), -mu, nm});
            self(self, i + 1, nn, -mu, nm);
        }
    };
    dfs(dfs, 0, 1, 1, detail::PrimeMask{});

    double total = 0.0, comp = 0.0;
    for (const auto& d : ds) {
        for (const auto& k : ks) {
            if (d.mask.intersects(k.mask)) continue;  // gcd(k, d) > 1
            detail::PrimeMask dk = d.mask | k.mask;
            double inner = 0.0;
            for (const auto& l : ls)
                if (!l.mask.intersects(dk)) inner += l.mu * l.inv_norm_sq;
            double term = d.weight * k.weight * inner * res_base;
            double y = term - comp;
            double t = total + y;
            comp = (t - total) - y;
            total = t;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Comparison report and non-vanishing scan.
// ---------------------------------------------------------------------------
struct MomentRow {
    double Q = 0.0;
    double m_emp = 0.0;
    double m_pred = 0.0;
    double ratio = 0.0;
    double residual = 0.0;
    double residual_norm = 0.0;  // residual / Q^{3/4}
};

struct MomentReport {
    std::vector<MomentRow> rows;

    std::string to_csv() const {
        std::ostringstream os;
        os << "Q,M_emp,M_pred,ratio,residual,residual_norm\n";
        for (const auto& r : rows) {
            os << fmt_double(r.Q) << "," << fmt_double(r.m_emp) << ","
               << fmt_double(r.m_pred) << "," << fmt_double(r.ratio) << ","
               << fmt_double(r.residual) << "," << fmt_double(r.residual_norm) << "\n";
        }
        return os.str();
    }
};

inline MomentReport compare(const QuadraticField& K, const std::vector<double>& Q_list,
                            const WeightSpec& w, Engine engine, const AFEConfig& cfg,
                            const PredictorConstants& consts, const FactorTable& table,
                            unsigned workers = 0, LValueCache* cache = nullptr) {
    MomentReport rep;
    for (double Q : Q_list) {
        MomentRow row;
        row.Q = Q;
        row.m_emp = empirical_moment(K, Q, w, engine, cfg, table, workers, cache);
        PredictedMain pm = predicted_main(Q, consts);
        row.m_pred = pm.value;
        if (row.m_pred == 0.0) throw accuracy_error("compare: predicted main term is zero");
        row.ratio = row.m_emp / row.m_pred;
        row.residual = row.m_emp - row.m_pred;
        row.residual_norm = row.residual / std::pow(Q, 0.75);
        rep.rows.push_back(row);
    }
    return rep;
}

struct ScanReport {
    uint64_t family_size = 0;
    uint64_t nonzero_count = 0;
    double min_abs_value = 0.0;
    double threshold = 0.0;
    std::vector<uint64_t> witnesses;  // q with |L| <= threshold
};

inline ScanReport nonvanishing_scan(const QuadraticField& K, uint64_t X, Engine engine,
                                    const AFEConfig& cfg, const FactorTable& table,
                                    double threshold = 1e-6, unsigned workers = 0) {
    FamilySlice fam = enumerate_family(K, X, table);
    std::vector<double> vals(fam.members.size(), 0.0);
    parallel_for_indexed(fam.members.size(), workers, [&](size_t i) {
        CharQ chi{fam.members[i].q, fam.members[i].q % 4 == 1 ? 1 : -1};
        vals[i] = engine == Engine::AFE ? l_half_afe(chi, cfg) : l_half_oracle(chi);
    });
    ScanReport rep;
    rep.threshold = threshold;
    rep.family_size = fam.members.size();
    rep.min_abs_value = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < vals.size(); ++i) {
        double a = std::fabs(vals[i]);
        if (a > threshold)
            ++rep.nonzero_count;
        else
            rep.witnesses.push_back(fam.members[i].q);
        rep.min_abs_value = std::min(rep.min_abs_value, a);
    }
    if (fam.members.empty()) rep.min_abs_value = 0.0;
    return rep;
}

}  // namespace qlm

#endif  // QLM_MOMENT_HPP
