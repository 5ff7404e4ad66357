// Multiplicative number theory base layer: smallest-prime-factor sieve,
// factorization summaries (mu, omega, tau), Jacobi/Kronecker symbols and
// fundamental discriminants.
#ifndef QLM_ARITH_HPP
#define QLM_ARITH_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qlm {

using std::int64_t;
using std::uint64_t;

// ---------------------------------------------------------------------------
// Smallest-prime-factor table.  spf[n] is the least prime dividing n, with
// spf[1] = 1.  Immutable after construction; safe to share across threads.
// ---------------------------------------------------------------------------
struct FactorTable {
    uint64_t limit = 0;
    std::vector<uint32_t> spf;

    bool is_prime(uint64_t n) const { return n >= 2 && spf[n] == n; }
};

inline constexpr uint64_t kFactorTableCeiling = uint64_t(1) << 28;

inline FactorTable build_factor_table(uint64_t limit) {
    if (limit < 2) throw std::domain_error("build_factor_table: limit must be >= 2");
    if (limit > kFactorTableCeiling)
        throw std::length_error("build_factor_table: limit exceeds memory ceiling");
    FactorTable t;
    t.limit = limit;
    t.spf.assign(limit + 1, 0);
    t.spf[1] = 1;
    for (uint64_t i = 2; i <= limit; ++i) {
        if (t.spf[i] == 0) {
            for (uint64_t j = i; j <= limit; j += i)
                if (t.spf[j] == 0) t.spf[j] = static_cast<uint32_t>(i);
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Factorization summary of a single integer.
// ---------------------------------------------------------------------------
struct FactorSummary {
    uint64_t n = 1;
    std::vector<std::pair<uint64_t, int>> factors;  // (prime, exponent)
    int omega = 0;
    int mu = 1;
    uint64_t tau = 1;
    bool is_squarefree = true;
};

inline FactorSummary summarize(uint64_t n, const FactorTable& table) {
    if (n < 1 || n > table.limit)
        throw std::out_of_range("summarize: n out of table range");
    FactorSummary s;
    s.n = n;
    uint64_t m = n;
    while (m > 1) {
        uint64_t p = table.spf[m];
        int e = 0;
        while (m % p == 0) { m /= p; ++e; }
        s.factors.emplace_back(p, e);
        s.tau *= uint64_t(e + 1);
        if (e > 1) s.is_squarefree = false;
    }
    s.omega = static_cast<int>(s.factors.size());
    s.mu = s.is_squarefree ? (s.omega % 2 == 0 ? 1 : -1) : 0;
    return s;
}

// ---------------------------------------------------------------------------
// Jacobi symbol (m/n) for odd n >= 1, by iterative binary reciprocity.
// No factorization of either argument is needed.
// ---------------------------------------------------------------------------
inline int jacobi(int64_t m, uint64_t n) {
    if (n == 0 || n % 2 == 0)
        throw std::domain_error("jacobi: modulus must be positive and odd");
    uint64_t a;
    int sign = 1;
    if (m < 0) {
        // (-1/n) = (-1)^((n-1)/2)
        if (n % 4 == 3) sign = -sign;
        uint64_t r = uint64_t(-(m + 1)) + 1;  // |m| without overflow at INT64_MIN
        a = r % n;
    } else {
        a = uint64_t(m) % n;
    }
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            uint64_t r = n % 8;
            if (r == 3 || r == 5) sign = -sign;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) sign = -sign;
        a %= n;
    }
    return n == 1 ? sign : 0;
}

// Kronecker symbol (a/n) for n >= 1; extends Jacobi to even moduli.
inline int kronecker(int64_t a, uint64_t n) {
    if (n == 0) throw std::domain_error("kronecker: modulus must be positive");
    int sign = 1;
    while (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        // (a/2) = (-1)^((a^2-1)/8)
        int64_t r = a % 8;
        if (r < 0) r += 8;
        if (r == 3 || r == 5) sign = -sign;
        n /= 2;
    }
    return sign * jacobi(a, n);
}

// ---------------------------------------------------------------------------
// Fundamental discriminant of Q(sqrt(d)) for squarefree d != 0, 1.
// ---------------------------------------------------------------------------
inline bool is_squarefree_small(int64_t d) {
    if (d == 0) return false;
    uint64_t m = d < 0 ? uint64_t(-d) : uint64_t(d);
    for (uint64_t p = 2; p * p <= m; ++p) {
        if (m % (p * p) == 0) return false;
        while (m % p == 0) m /= p;
    }
    return true;
}

inline int64_t fundamental_discriminant(int64_t d) {
    if (d == 0 || d == 1)
        throw std::domain_error("fundamental_discriminant: d must not be 0 or 1");
    if (!is_squarefree_small(d))
        throw std::domain_error("fundamental_discriminant: d must be squarefree");
    int64_t r = d % 4;
    if (r < 0) r += 4;
    return r == 1 ? d : 4 * d;
}

// ---------------------------------------------------------------------------
// Modular helpers (64-bit safe via 128-bit intermediates).
// ---------------------------------------------------------------------------
inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

}  // namespace qlm

#endif  // QLM_ARITH_HPP
