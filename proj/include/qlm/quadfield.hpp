// Quadratic field K = Q(sqrt(d)): prime splitting, explicit prime ideals
// above split primes, the quadratic residue symbol in K, and exhaustive
// verification that the symbol on rational integers collapses to the
// Jacobi symbol of the ideal norm.
#ifndef QLM_QUADFIELD_HPP
#define QLM_QUADFIELD_HPP

#include <array>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlm/arith.hpp"

namespace qlm {

// ---------------------------------------------------------------------------
// The field.  minpoly holds {c0, c1, 1} for x^2 + c1 x + c0, the minimal
// polynomial of the ring generator: (1+sqrt(d))/2 when D = d is odd,
// sqrt(d) when D = 4d.
// ---------------------------------------------------------------------------
struct QuadraticField {
    int64_t d = 0;
    int64_t D = 0;
    std::array<int64_t, 3> minpoly{};  // c0 + c1*x + x^2

    explicit QuadraticField(int64_t d_) : d(d_), D(fundamental_discriminant(d_)) {
        if (D == d) {
            minpoly = {-(D - 1) / 4, -1, 1};  // x^2 - x - (D-1)/4
        } else {
            minpoly = {-d, 0, 1};  // x^2 - d
        }
    }
};

enum class SplittingType { Split, Inert, Ramified };

inline SplittingType splitting_type(const QuadraticField& K, uint64_t p) {
    if (p == 2 || p < 2)
        throw std::domain_error("splitting_type: only odd primes are supported");
    int64_t r = K.D % int64_t(p);
    if (r < 0) r += int64_t(p);
    if (r == 0) return SplittingType::Ramified;
    int j = jacobi(r, p);
    return j == 1 ? SplittingType::Split : SplittingType::Inert;
}

// ---------------------------------------------------------------------------
// Square roots mod an odd prime: direct search for small p, Tonelli-Shanks
// above.  Requires (a/p) = 1.
// ---------------------------------------------------------------------------
inline uint64_t sqrt_mod(uint64_t a, uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    if (p < 10000) {
        for (uint64_t t = 1; t <= p / 2; ++t)
            if (mulmod(t, t, p) == a) return t;
        throw std::domain_error("sqrt_mod: no square root exists");
    }
    if (powmod(a, (p - 1) / 2, p) != 1)
        throw std::domain_error("sqrt_mod: no square root exists");
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    uint64_t q = p - 1, s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    uint64_t z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    uint64_t m = s;
    uint64_t c = powmod(z, q, p);
    uint64_t t = powmod(a, q, p);
    uint64_t r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        uint64_t i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        uint64_t b = c;
        for (uint64_t k = 0; k + i + 1 < m; ++k) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

// ---------------------------------------------------------------------------
// A prime ideal (p, w0 - root) of norm p above a split odd prime.
// ---------------------------------------------------------------------------
struct PrimeIdealRep {
    uint64_t p = 0;
    uint64_t root = 0;

    friend bool operator==(const PrimeIdealRep&, const PrimeIdealRep&) = default;
};

inline std::pair<PrimeIdealRep, PrimeIdealRep> primes_above(const QuadraticField& K,
                                                            uint64_t p) {
    if (splitting_type(K, p) != SplittingType::Split)
        throw std::domain_error("primes_above: p does not split in K");
    // Roots of x^2 + c1 x + c0 mod p: (-c1 +- sqrt(D)) / 2.
    int64_t Dm = K.D % int64_t(p);
    if (Dm < 0) Dm += int64_t(p);
    uint64_t s = sqrt_mod(uint64_t(Dm), p);
    uint64_t negc1 = uint64_t(((-K.minpoly[1]) % int64_t(p) + int64_t(p)) % int64_t(p));
    uint64_t inv2 = (p + 1) / 2;
    uint64_t r1 = mulmod((negc1 + s) % p, inv2, p);
    uint64_t r2 = mulmod((negc1 + p - s) % p, inv2, p);
    if (r1 > r2) std::swap(r1, r2);
    return {PrimeIdealRep{p, r1}, PrimeIdealRep{p, r2}};
}

// Quadratic residue symbol (a/P)_K for a = u + v*w0, via reduction w0 -> root
// mod p (valid since N(P) = p for split P).
inline int residue_symbol(const QuadraticField& K, int64_t u, int64_t v,
                          const PrimeIdealRep& P) {
    (void)K;
    uint64_t p = P.p;
    if (p == 2) throw std::domain_error("residue_symbol: p must be odd");
    int64_t img = (u % int64_t(p) + int64_t(p)) % int64_t(p);
    int64_t vv = (v % int64_t(p) + int64_t(p)) % int64_t(p);
    uint64_t abar = (uint64_t(img) + mulmod(uint64_t(vv), P.root, p)) % p;
    if (abar == 0) return 0;
    uint64_t e = powmod(abar, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Products of prime ideals above split primes, represented by factorization.
// ---------------------------------------------------------------------------
struct IdealFactorization {
    std::vector<std::pair<PrimeIdealRep, int>> entries;
    uint64_t norm = 1;
};

inline int residue_symbol_ideal(const QuadraticField& K, int64_t m,
                                const IdealFactorization& A) {
    int s = 1;
    for (const auto& [P, e] : A.entries) {
        int sp = residue_symbol(K, m, 0, P);
        if (sp == 0) return 0;
        if (e % 2 != 0 && sp == -1) s = -s;
    }
    return s;
}

// All squarefree ideals coprime to 2 D_K, with no rational prime divisor, of
// norm q.  Nonempty only when q is odd, squarefree and all prime factors
// split, in which case there are exactly 2^omega(q) of them.
inline std::vector<IdealFactorization> enumerate_family_ideals(
    const QuadraticField& K, uint64_t q, const FactorTable& table) {
    if (q % 2 == 0 || q > table.limit)
        throw std::domain_error("enumerate_family_ideals: q must be odd and within table");
    FactorSummary f = summarize(q, table);
    if (!f.is_squarefree) return {};
    for (const auto& [p, e] : f.factors)
        if (splitting_type(K, p) != SplittingType::Split) return {};
    std::vector<IdealFactorization> out;
    out.push_back(IdealFactorization{});
    for (const auto& [p, e] : f.factors) {
        auto [P1, P2] = primes_above(K, p);
        std::vector<IdealFactorization> next;
        next.reserve(out.size() * 2);
        for (const auto& A : out) {
            for (const auto& P : {P1, P2}) {
                IdealFactorization B = A;
                B.entries.emplace_back(P, 1);
                B.norm *= p;
                next.push_back(std::move(B));
            }
        }
        out = std::move(next);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exhaustive check of the norm identity: for every family ideal A of norm
// q <= q_max and every m <= m_max coprime to 2 D_K, the residue symbol in K
// equals the Jacobi symbol (m / N(A)).
// ---------------------------------------------------------------------------
struct VerificationReport {
    uint64_t checks_run = 0;
    uint64_t failures = 0;
    std::string first_witness;

    std::string to_json() const {
        std::ostringstream os;
        os << "{\"checks_run\":" << checks_run << ",\"failures\":" << failures
           << ",\"first_witness\":\"" << first_witness << "\"}";
        return os.str();
    }
};

inline VerificationReport verify_symbol_identity(const QuadraticField& K,
                                                 int64_t m_max, uint64_t q_max,
                                                 const FactorTable& table) {
    if (q_max > table.limit)
        throw std::out_of_range("verify_symbol_identity: q_max beyond table limit");
    VerificationReport rep;
    uint64_t twoD = 2 * uint64_t(K.D < 0 ? -K.D : K.D);
    for (uint64_t q = 3; q <= q_max; q += 2) {
        auto ideals = enumerate_family_ideals(K, q, table);
        for (const auto& A : ideals) {
            for (int64_t m = 1; m <= m_max; ++m) {
                if (std::gcd(uint64_t(m), twoD) != 1) continue;
                int lhs = residue_symbol_ideal(K, m, A);
                int rhs = jacobi(m, A.norm);
                ++rep.checks_run;
                if (lhs != rhs) {
                    ++rep.failures;
                    if (rep.first_witness.empty()) {
                        std::ostringstream os;
                        os << "m=" << m << " q=" << q;
                        rep.first_witness = os.str();
                    }
                }
            }
        }
    }
    return rep;
}

}  // namespace qlm

#endif  // QLM_QUADFIELD_HPP
