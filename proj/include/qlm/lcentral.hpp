// Central-value engine: L(1/2, chi_q) through the approximate functional
// equation with a rigorous Gaussian-decay truncation, an independent
// Hurwitz-zeta oracle, and a disk-backed value cache.
#ifndef QLM_LCENTRAL_HPP
#define QLM_LCENTRAL_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qlm/arith.hpp"
#include "qlm/specfun.hpp"

namespace qlm {

// The primitive quadratic character mod odd squarefree q > 1, i.e. the
// Jacobi symbol (./q).  parity = chi(-1) = (-1)^((q-1)/2).
struct CharQ {
    uint64_t q = 0;
    int parity = 1;
};

inline CharQ make_char(uint64_t q, const FactorTable& table) {
    if (q <= 1 || q % 2 == 0)
        throw std::domain_error("make_char: q must be odd and > 1");
    if (!summarize(q, table).is_squarefree)
        throw std::domain_error("make_char: q is not squarefree");
    return CharQ{q, q % 4 == 1 ? 1 : -1};
}

struct AFEConfig {
    double eps_tail = 1e-10;
};

// Upper bound on the omitted AFE tail 2 sum_{m>M} m^{-1/2} V(m / sqrt(q)),
// by direct summation of the rigorous per-term kernel bound (worst parity).
inline double afe_tail_bound(uint64_t M, uint64_t q) {
    double sq = std::sqrt(double(q));
    double bound = 0.0;
    for (uint64_t m = M + 1;; ++m) {
        double x = double(m) / sq;
        double v = std::max(V_kernel_bound(1, x), V_kernel_bound(-1, x));
        double t = 2.0 * v / std::sqrt(double(m));
        bound += t;
        if (kPi * x * x >= 1.0 && t < 1e-20 * (bound + 1e-300)) break;
        if (m > M + 200000)
            break;  // Gaussian decay makes this unreachable for sane inputs
    }
    return bound;
}

// Smallest M whose analytic tail bound is below eps_tail; M = O(sqrt(q log(1/eps))).
inline uint64_t truncation_length(uint64_t q, double eps_tail) {
    if (!(eps_tail > 1e-14 && eps_tail < 1e-2))
        throw std::domain_error("truncation_length: eps_tail out of range");
    uint64_t lo = 1;
    uint64_t hi = uint64_t(20.0 * std::sqrt(double(q))) + 64;
    while (afe_tail_bound(hi, q) >= eps_tail) hi *= 2;
    while (lo < hi) {
        uint64_t mid = lo + (hi - lo) / 2;
        if (afe_tail_bound(mid, q) < eps_tail)
            hi = mid;
        else
            lo = mid + 1;
    }
    return std::max<uint64_t>(lo, 1);
}

// L(1/2, chi_q) = 2 sum_{m<=M} (m/q) m^{-1/2} V_parity(m/sqrt(q)); fixed
// ascending order with compensated accumulation for reproducibility.
inline double l_half_afe(const CharQ& chi, const AFEConfig& cfg) {
    uint64_t M = truncation_length(chi.q, cfg.eps_tail);
    double sq = std::sqrt(double(chi.q));
    double sum = 0.0, comp = 0.0;
    for (uint64_t m = 1; m <= M; ++m) {
        int c = jacobi(int64_t(m), chi.q);
        if (c == 0) continue;
        double term = 2.0 * c * V_kernel(chi.parity, double(m) / sq) / std::sqrt(double(m));
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

inline constexpr uint64_t kOracleCeiling = 10000;

// Independent engine: L(1/2, chi) = q^{-1/2} sum_{a<q} chi(a) zeta(1/2, a/q).
inline double l_half_oracle(const CharQ& chi, uint64_t ceiling = kOracleCeiling) {
    if (chi.q > ceiling)
        throw std::length_error("l_half_oracle: q above oracle ceiling");
    double sum = 0.0, comp = 0.0;
    for (uint64_t a = 1; a < chi.q; ++a) {
        int c = jacobi(int64_t(a), chi.q);
        if (c == 0) continue;
        double term = c * hurwitz_zeta_half(double(a) / double(chi.q));
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / std::sqrt(double(chi.q));
}

// ---------------------------------------------------------------------------
// Persistent cache of central values.  File format:
//   lcache v1 <field-d> <epsilon>
//   q,value,tolerance,engine
// Flush writes a temp file and renames it into place.
// ---------------------------------------------------------------------------
struct LCacheEntry {
    double value = 0.0;
    double tolerance = 0.0;
    std::string engine;
};

class LValueCache {
public:
    LValueCache(int64_t field_d, double epsilon) : field_d_(field_d), epsilon_(epsilon) {}

    std::optional<LCacheEntry> lookup(uint64_t q) const {
        auto it = entries_.find(q);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    void store(uint64_t q, const LCacheEntry& e) { entries_[q] = e; }
    size_t size() const { return entries_.size(); }
    int64_t field_d() const { return field_d_; }
    double epsilon() const { return epsilon_; }

    std::string serialize() const {
        std::ostringstream os;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", epsilon_);
        os << "lcache v1 " << field_d_ << " " << buf << "\n";
        for (const auto& [q, e] : entries_) {
            char v[64], tol[64];
            std::snprintf(v, sizeof v, "%.17g", e.value);
            std::snprintf(tol, sizeof tol, "%.17g", e.tolerance);
            os << q << "," << v << "," << tol << "," << e.engine << "\n";
        }
        return os.str();
    }

    void flush(const std::string& path) const {
        std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("LValueCache: cannot open " + tmp);
            out << serialize();
        }
        std::filesystem::rename(tmp, path);
    }

    static LValueCache load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("LValueCache: cannot open " + path);
        std::string header;
        std::getline(in, header);
        std::istringstream hs(header);
        std::string magic, version;
        int64_t d = 0;
        double eps = 0.0;
        hs >> magic >> version >> d >> eps;
        if (magic != "lcache" || version != "v1")
            throw std::runtime_error("LValueCache: bad header in " + path);
        LValueCache cache(d, eps);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string qs, vs, ts, es;
            std::getline(ls, qs, ',');
            std::getline(ls, vs, ',');
            std::getline(ls, ts, ',');
            std::getline(ls, es);
            LCacheEntry e;
            e.value = std::stod(vs);
            e.tolerance = std::stod(ts);
            e.engine = es;
            cache.store(std::stoull(qs), e);
        }
        return cache;
    }

private:
    int64_t field_d_;
    double epsilon_;
    std::map<uint64_t, LCacheEntry> entries_;
};

}  // namespace qlm

#endif  // QLM_LCENTRAL_HPP
