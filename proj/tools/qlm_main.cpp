// qlm: verification laboratory for weighted first moments of quadratic
// Dirichlet L-functions with conductors supported on split primes.
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlm/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "Weighted first moments of quadratic Dirichlet L-functions over split-prime "
        "conductor families: empirical moment vs predicted main term"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("-c,--config", config_path, "JSON configuration file");

    qlm::RunConfig cfg;
    // Flag overrides, applied on top of the config file.
    int64_t field_d = 0;
    std::vector<double> q_ladder;
    std::string engine, cache_path, output_path;
    double eps_tail = -1.0, threshold = -1.0;
    uint64_t scan_bound = 0, family_bound = 0, lvalue_q = 0;
    int workers = -1;
    app.add_option("-d,--field-d", field_d, "squarefree d defining K = Q(sqrt(d))");
    app.add_option("-Q,--q-ladder", q_ladder, "ladder of Q values");
    app.add_option("--engine", engine, "central-value engine: afe|oracle");
    app.add_option("--eps-tail", eps_tail, "AFE tail tolerance");
    app.add_option("--cache", cache_path, "L-value cache file");
    app.add_option("-o,--output", output_path, "output path stem for reports");
    app.add_option("--workers", workers, "worker threads (0 = hardware)");
    app.add_option("--threshold", threshold, "non-vanishing threshold");

    auto* family = app.add_subcommand("family", "list S(K) up to a bound");
    family->add_option("-X,--bound", family_bound, "family bound X");
    auto* lvalue = app.add_subcommand("lvalue", "print L(1/2, chi_q) by both engines");
    lvalue->add_option("-q", lvalue_q, "odd squarefree conductor q")->required();
    auto* moment = app.add_subcommand("moment", "print the empirical moment M_emp");
    auto* predict = app.add_subcommand("predict", "print constants and Q*P_K(log Q)");
    auto* compare = app.add_subcommand("compare", "write the moment comparison report");
    auto* scan = app.add_subcommand("scan", "non-vanishing scan over the family");
    scan->add_option("-X,--bound", scan_bound, "scan bound X");
    auto* selftest = app.add_subcommand("selftest", "run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot open config file " << config_path << "\n";
                return 2;
            }
            nlohmann::json j;
            in >> j;
            cfg = j.get<qlm::RunConfig>();
        }
        if (field_d != 0) cfg.field_d = field_d;
        if (!q_ladder.empty()) cfg.Q_ladder = q_ladder;
        if (!engine.empty()) cfg.engine = engine;
        if (eps_tail > 0.0) cfg.eps_tail = eps_tail;
        if (!cache_path.empty()) cfg.cache_path = cache_path;
        if (!output_path.empty()) cfg.output_path = output_path;
        if (workers >= 0) cfg.workers = unsigned(workers);
        if (threshold > 0.0) cfg.nonvanishing_threshold = threshold;
        if (scan_bound > 0) cfg.scan_bound = scan_bound;
        if (family_bound > 0) cfg.family_bound = family_bound;
        if (lvalue_q > 0) cfg.lvalue_q = lvalue_q;
        cfg.validate();

        if (family->parsed()) return qlm::cli::cmd_family(cfg, std::cout);
        if (lvalue->parsed()) return qlm::cli::cmd_lvalue(cfg, std::cout);
        if (moment->parsed()) return qlm::cli::cmd_moment(cfg, std::cout);
        if (predict->parsed()) return qlm::cli::cmd_predict(cfg, std::cout);
        if (compare->parsed()) return qlm::cli::cmd_compare(cfg, std::cout);
        if (scan->parsed()) return qlm::cli::cmd_scan(cfg, std::cout);
        if (selftest->parsed()) return qlm::cli::cmd_selftest(cfg, std::cout);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
