// Command-line front end: declarative run configuration with a stable hash,
// run manifests, CSV/JSON report emission and plot-data export.
#ifndef QLM_CLI_HPP
#define QLM_CLI_HPP

#include <chrono>
#include <cstdint>
#include <ctime>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlm/arith.hpp"
#include "qlm/lcentral.hpp"
#include "qlm/moment.hpp"
#include "qlm/quadfield.hpp"
#include "qlm/specfun.hpp"

namespace qlm {

struct RunConfig {
    int64_t field_d = 5;
    std::vector<double> Q_ladder = {1e3, 1e4, 1e5};
    std::string weight_kind = "bump";
    double weight_x_lo = 0.5;
    double weight_x_hi = 1.0;
    int weight_quad_nodes = 64;
    std::string engine = "afe";
    double eps_tail = 1e-10;
    uint64_t prime_cutoff = 100000;
    int k_max = 40;
    uint64_t d_max = 1000;
    uint64_t l_norm_max = 1000;
    uint64_t m_max = 10000;
    uint64_t scan_bound = 100000;
    double nonvanishing_threshold = 1e-6;
    uint64_t family_bound = 100;
    uint64_t lvalue_q = 5;
    std::string cache_path;
    std::string output_path = "report";
    unsigned workers = 0;

    void validate() const {
        if (!is_squarefree_small(field_d) || field_d == 0 || field_d == 1)
            throw std::domain_error("config: field_d must be squarefree and not 0 or 1");
        if (Q_ladder.empty()) throw std::domain_error("config: Q_ladder is empty");
        for (double Q : Q_ladder)
            if (Q <= 0.0) throw std::domain_error("config: Q values must be positive");
        if (engine != "afe" && engine != "oracle")
            throw std::domain_error("config: engine must be 'afe' or 'oracle'");
        if (!(eps_tail > 1e-14 && eps_tail < 1e-2))
            throw std::domain_error("config: eps_tail out of range (1e-14, 1e-2)");
        if (weight_kind != "bump") throw std::domain_error("config: unknown weight kind");
        if (!(weight_x_lo > 0.0 && weight_x_hi > weight_x_lo))
            throw std::domain_error("config: weight support must satisfy 0 < x_lo < x_hi");
    }

    WeightSpec weight() const { return WeightSpec{weight_x_lo, weight_x_hi, weight_quad_nodes}; }
    Engine engine_enum() const { return engine == "afe" ? Engine::AFE : Engine::Oracle; }
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{{"field_d", c.field_d},
                       {"Q_ladder", c.Q_ladder},
                       {"weight", {{"kind", c.weight_kind},
                                   {"x_lo", c.weight_x_lo},
                                   {"x_hi", c.weight_x_hi},
                                   {"quad_nodes", c.weight_quad_nodes}}},
                       {"engine", c.engine},
                       {"eps_tail", c.eps_tail},
                       {"prime_cutoff", c.prime_cutoff},
                       {"k_max", c.k_max},
                       {"d_max", c.d_max},
                       {"l_norm_max", c.l_norm_max},
                       {"m_max", c.m_max},
                       {"scan_bound", c.scan_bound},
                       {"nonvanishing_threshold", c.nonvanishing_threshold},
                       {"family_bound", c.family_bound},
                       {"lvalue_q", c.lvalue_q},
                       {"cache_path", c.cache_path},
                       {"output_path", c.output_path},
                       {"workers", c.workers}};
}

inline void from_json(const nlohmann::json& j, RunConfig& c) {
    RunConfig def;
    c.field_d = j.value("field_d", def.field_d);
    c.Q_ladder = j.value("Q_ladder", def.Q_ladder);
    if (j.contains("weight")) {
        const auto& w = j.at("weight");
        c.weight_kind = w.value("kind", def.weight_kind);
        c.weight_x_lo = w.value("x_lo", def.weight_x_lo);
        c.weight_x_hi = w.value("x_hi", def.weight_x_hi);
        c.weight_quad_nodes = w.value("quad_nodes", def.weight_quad_nodes);
    }
    c.engine = j.value("engine", def.engine);
    c.eps_tail = j.value("eps_tail", def.eps_tail);
    c.prime_cutoff = j.value("prime_cutoff", def.prime_cutoff);
    c.k_max = j.value("k_max", def.k_max);
    c.d_max = j.value("d_max", def.d_max);
    c.l_norm_max = j.value("l_norm_max", def.l_norm_max);
    c.m_max = j.value("m_max", def.m_max);
    c.scan_bound = j.value("scan_bound", def.scan_bound);
    c.nonvanishing_threshold = j.value("nonvanishing_threshold", def.nonvanishing_threshold);
    c.family_bound = j.value("family_bound", def.family_bound);
    c.lvalue_q = j.value("lvalue_q", def.lvalue_q);
    c.cache_path = j.value("cache_path", def.cache_path);
    c.output_path = j.value("output_path", def.output_path);
    c.workers = j.value("workers", def.workers);
}

// Stable 64-bit FNV-1a hash of the canonical (sorted-key) JSON serialization.
inline std::string config_hash(const RunConfig& c) {
    nlohmann::json j = c;
    std::string s = j.dump();
    uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline constexpr const char* kArtifactVersion = "1.0.0";

struct RunManifest {
    std::string config_hash;
    std::string version = kArtifactVersion;
    std::string started_at;
    std::vector<std::pair<std::string, double>> timings_s;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const {
        nlohmann::json t = nlohmann::json::object();
        for (const auto& [k, v] : timings_s) t[k] = v;
        return nlohmann::json{{"config_hash", config_hash},
                              {"artifact_version", version},
                              {"started_at", started_at},
                              {"timings_s", t},
                              {"warnings", warnings}};
    }
};

inline std::string timestamp_utc() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

inline void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

// Two-column plot exports: (log Q, ratio) and (log Q, residual_norm).
inline std::string plotdata_ratio_csv(const MomentReport& rep) {
    std::ostringstream os;
    os << "log_Q,ratio\n";
    for (const auto& r : rep.rows)
        os << fmt_double(std::log(r.Q)) << "," << fmt_double(r.ratio) << "\n";
    return os.str();
}

inline std::string plotdata_residual_csv(const MomentReport& rep) {
    std::ostringstream os;
    os << "log_Q,residual_norm\n";
    for (const auto& r : rep.rows)
        os << fmt_double(std::log(r.Q)) << "," << fmt_double(r.residual_norm) << "\n";
    return os.str();
}

inline nlohmann::json constants_json(const PredictorConstants& c) {
    return nlohmann::json{{"C_K1", c.C_K1},
                          {"C_K2", c.C_K2},
                          {"zetaK2", c.zetaK2},
                          {"C_K_at_1", c.C_K_at_1},
                          {"C_K_deriv_1", c.C_K_deriv_1},
                          {"w_mellin_1", c.w_mellin_1},
                          {"w_mellin_d1", c.w_mellin_d1},
                          {"gamma0", c.gamma0},
                          {"gamma_d0_plus", c.gamma_d0_plus},
                          {"gamma_d0_minus", c.gamma_d0_minus},
                          {"prime_cutoff", c.prime_cutoff},
                          {"exponent_cutoff", c.exponent_cutoff},
                          {"ck2_tail_bound", c.ck2_tail_bound}};
}

inline nlohmann::json report_json(const MomentReport& rep, const PredictorConstants& c,
                                  const RunManifest& manifest) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"Q", r.Q},
                        {"M_emp", r.m_emp},
                        {"M_pred", r.m_pred},
                        {"ratio", r.ratio},
                        {"residual", r.residual},
                        {"residual_norm", r.residual_norm}});
    return nlohmann::json{
        {"rows", rows}, {"constants", constants_json(c)}, {"manifest", manifest.to_json()}};
}

// ---------------------------------------------------------------------------
// Subcommand drivers.  Exit codes: 0 success, 1 verification failure,
// 2 invalid configuration or usage.
// ---------------------------------------------------------------------------
namespace cli {

inline std::string resolve_cache_path(const RunConfig& cfg) {
    if (cfg.cache_path.empty()) return {};
    const char* dir = std::getenv("QLM_CACHE_DIR");
    if (dir && *dir && !std::filesystem::path(cfg.cache_path).is_absolute())
        return (std::filesystem::path(dir) / cfg.cache_path).string();
    return cfg.cache_path;
}

inline uint64_t table_limit_for(const RunConfig& cfg) {
    double maxQ = 0.0;
    for (double Q : cfg.Q_ladder) maxQ = std::max(maxQ, Q);
    uint64_t need = uint64_t(std::ceil(cfg.weight_x_hi * maxQ)) + 2;
    need = std::max(need, cfg.scan_bound + 2);
    need = std::max(need, cfg.family_bound + 2);
    need = std::max(need, cfg.lvalue_q + 2);
    need = std::max(need, std::max(cfg.d_max, uint64_t(std::sqrt(double(cfg.m_max)))) + 2);
    return need;
}

inline int cmd_family(const RunConfig& cfg, std::ostream& out) {
    FactorTable table = build_factor_table(std::max<uint64_t>(cfg.family_bound, 2) + 1);
    QuadraticField K(cfg.field_d);
    FamilySlice fam = enumerate_family(K, cfg.family_bound, table);
    out << "q,omega\n";
    for (const auto& e : fam.members) out << e.q << "," << e.omega << "\n";
    return 0;
}

inline int cmd_lvalue(const RunConfig& cfg, std::ostream& out) {
    FactorTable table = build_factor_table(cfg.lvalue_q + 1);
    CharQ chi = make_char(cfg.lvalue_q, table);
    AFEConfig afe{cfg.eps_tail};
    double a = l_half_afe(chi, afe);
    out << "q=" << chi.q << " parity=" << chi.parity << "\n";
    out << "afe    " << fmt_double(a) << "\n";
    if (chi.q <= kOracleCeiling) {
        double o = l_half_oracle(chi);
        out << "oracle " << fmt_double(o) << "\n";
        out << "diff   " << fmt_double(a - o) << "\n";
    } else {
        out << "oracle skipped (q above oracle ceiling " << kOracleCeiling << ")\n";
    }
    return 0;
}

inline int cmd_moment(const RunConfig& cfg, std::ostream& out) {
    FactorTable table = build_factor_table(table_limit_for(cfg));
    QuadraticField K(cfg.field_d);
    AFEConfig afe{cfg.eps_tail};
    WeightSpec w = cfg.weight();
    for (double Q : cfg.Q_ladder) {
        double m = empirical_moment(K, Q, w, cfg.engine_enum(), afe, table, cfg.workers);
        out << "Q=" << fmt_double(Q) << " M_emp=" << fmt_double(m) << "\n";
    }
    return 0;
}

inline int cmd_predict(const RunConfig& cfg, std::ostream& out) {
    QuadraticField K(cfg.field_d);
    WeightSpec w = cfg.weight();
    PredictorConstants c = compute_constants(K, w, cfg.prime_cutoff, cfg.k_max);
    out << constants_json(c).dump(2) << "\n";
    MainTermPolynomial residue = main_term_polynomial(c);
    MainTermPolynomial printed = printed_term_polynomial(c);
    out << "P_K slope=" << fmt_double(residue.slope())
        << " intercept=" << fmt_double(residue.intercept()) << "\n";
    out << "printed-display audit: d_slope="
        << fmt_double(printed.slope() - residue.slope())
        << " d_intercept=" << fmt_double(printed.intercept() - residue.intercept()) << "\n";
    for (double Q : cfg.Q_ladder) {
        PredictedMain pm = predicted_main(Q, c);
        out << "Q=" << fmt_double(Q) << " M_pred=" << fmt_double(pm.value) << "\n";
    }
    return 0;
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& out) {
    RunManifest manifest;
    manifest.config_hash = config_hash(cfg);
    manifest.started_at = timestamp_utc();
    auto clock = [] { return std::chrono::steady_clock::now(); };
    auto t0 = clock();

    FactorTable table = build_factor_table(table_limit_for(cfg));
    QuadraticField K(cfg.field_d);
    WeightSpec w = cfg.weight();
    AFEConfig afe{cfg.eps_tail};
    PredictorConstants consts = compute_constants(K, w, cfg.prime_cutoff, cfg.k_max);
    manifest.timings_s.emplace_back(
        "constants", std::chrono::duration<double>(clock() - t0).count());
    if (consts.ck2_tail_bound > 1e-4)
        manifest.warnings.push_back("C_K2 tail bound above 1e-4; raise prime_cutoff");

    LValueCache cache(cfg.field_d, cfg.eps_tail);
    std::string cache_path = resolve_cache_path(cfg);
    if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
        LValueCache loaded = LValueCache::load(cache_path);
        // Invalidate on (field_d, engine-implied epsilon) mismatch.
        if (loaded.field_d() == cfg.field_d && loaded.epsilon() == cfg.eps_tail)
            cache = std::move(loaded);
    }

    auto t1 = clock();
    MomentReport rep = compare(K, cfg.Q_ladder, w, cfg.engine_enum(), afe, consts, table,
                               cfg.workers, &cache);
    manifest.timings_s.emplace_back(
        "moment_ladder", std::chrono::duration<double>(clock() - t1).count());
    if (!cache_path.empty()) cache.flush(cache_path);

    std::string csv = "# config_hash=" + manifest.config_hash + "\n" + rep.to_csv();
    write_file_atomic(cfg.output_path + ".csv", csv);
    write_file_atomic(cfg.output_path + ".json",
                      report_json(rep, consts, manifest).dump(2) + "\n");
    write_file_atomic(cfg.output_path + "_ratio.csv", plotdata_ratio_csv(rep));
    write_file_atomic(cfg.output_path + "_residual.csv", plotdata_residual_csv(rep));
    if (rep.rows.empty())
        std::cerr << "warning: empty report, no rows written\n";
    out << csv;
    return 0;
}

inline int cmd_scan(const RunConfig& cfg, std::ostream& out) {
    FactorTable table = build_factor_table(cfg.scan_bound + 1);
    QuadraticField K(cfg.field_d);
    AFEConfig afe{cfg.eps_tail};
    ScanReport rep = nonvanishing_scan(K, cfg.scan_bound, cfg.engine_enum(), afe, table,
                                       cfg.nonvanishing_threshold, cfg.workers);
    nlohmann::json j{{"family_size", rep.family_size},
                     {"nonzero_count", rep.nonzero_count},
                     {"min_abs_value", rep.min_abs_value},
                     {"threshold", rep.threshold},
                     {"witnesses", rep.witnesses},
                     {"config_hash", config_hash(cfg)}};
    std::string body = j.dump(2) + "\n";
    write_file_atomic(cfg.output_path + "_scan.json", body);
    out << body;
    return 0;
}

inline int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        out << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };
    FactorTable table = build_factor_table(10000);
    QuadraticField K(cfg.field_d);

    // Jacobi multiplicativity on a small box.
    bool jac = true;
    for (int64_t m1 = 1; m1 <= 30 && jac; ++m1)
        for (int64_t m2 = 1; m2 <= 30 && jac; ++m2)
            for (uint64_t n = 1; n <= 61; n += 2)
                if (jacobi(m1 * m2, n) != jacobi(m1, n) * jacobi(m2, n)) { jac = false; break; }
    check("jacobi multiplicativity", jac);

    VerificationReport vr = verify_symbol_identity(K, 50, 300, table);
    check("symbol identity (m<=50, q<=300)", vr.failures == 0 && vr.checks_run > 0);

    bool counting = true;
    for (uint64_t q = 3; q <= 2000; q += 2) {
        FactorSummary f = summarize(q, table);
        bool eligible = f.is_squarefree;
        for (const auto& [p, e] : f.factors)
            if (eligible && splitting_type(K, p) != SplittingType::Split) eligible = false;
        size_t expect = eligible ? (size_t(1) << f.omega) : 0;
        if (enumerate_family_ideals(K, q, table).size() != expect) { counting = false; break; }
    }
    check("family ideal counting (q<=2000)", counting);

    bool kernel = true;
    for (int j : {1, -1})
        for (double x : {0.1, 0.5, 1.0, 2.0})
            if (std::fabs(V_kernel(j, x) - V_mellin_oracle(j, x)) > 1e-10) kernel = false;
    check("V closed form vs Mellin oracle", kernel);

    bool engines = true;
    AFEConfig afe{cfg.eps_tail};
    for (uint64_t q = 3; q <= 200; q += 2) {
        if (!summarize(q, table).is_squarefree) continue;
        CharQ chi = make_char(q, table);
        if (std::fabs(l_half_afe(chi, afe) - l_half_oracle(chi)) > 1e-8) engines = false;
    }
    check("AFE vs Hurwitz oracle (q<=200)", engines);

    bool dup = true;
    double z_half = hurwitz_zeta(0.5, 1.0);
    for (int m : {2, 3, 5}) {
        double s = 0.0;
        for (int r = 1; r <= m; ++r) s += hurwitz_zeta(0.5, double(r) / m);
        if (std::fabs(s - std::sqrt(double(m)) * z_half) > 1e-9) dup = false;
    }
    check("hurwitz duplication identity", dup);

    out << (failures == 0 ? "selftest: all checks passed\n"
                          : "selftest: FAILURES detected\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace cli

}  // namespace qlm

#endif  // QLM_CLI_HPP
