#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qlm/cli.hpp"

using namespace qlm;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("config validation") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    RunConfig bad = cfg;
    bad.field_d = 12;  // not squarefree
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.engine = "magic";
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.eps_tail = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.Q_ladder = {};
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.Q_ladder = {-5.0};
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.weight_x_lo = 2.0;  // x_lo >= x_hi
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("config JSON round trip and hash stability") {
    RunConfig cfg;
    cfg.field_d = 13;
    cfg.Q_ladder = {100.0, 250.0};
    cfg.engine = "oracle";
    cfg.workers = 3;
    nlohmann::json j = cfg;
    RunConfig back = j.get<RunConfig>();
    nlohmann::json j2 = back;
    CHECK(j.dump() == j2.dump());  // parse -> serialize -> parse is identity
    CHECK(config_hash(cfg) == config_hash(back));
    RunConfig other = cfg;
    other.eps_tail = 1e-9;
    CHECK(config_hash(other) != config_hash(cfg));
    CHECK(config_hash(cfg).size() == 16);  // 64-bit hex
}

TEST_CASE("plot-data export") {
    MomentReport rep;
    rep.rows.push_back({1e3, 2.0, 1.0, 2.0, 1.0, 1.0 / std::pow(1e3, 0.75)});
    rep.rows.push_back({1e4, 3.0, 2.0, 1.5, 1.0, 1.0 / std::pow(1e4, 0.75)});
    rep.rows.push_back({1e5, 4.0, 4.0, 1.0, 0.0, 0.0});
    std::string ratio = plotdata_ratio_csv(rep);
    std::string resid = plotdata_residual_csv(rep);
    CHECK(std::count(ratio.begin(), ratio.end(), '\n') == 4);  // header + 3 rows
    CHECK(std::count(resid.begin(), resid.end(), '\n') == 4);
    CHECK(ratio.rfind("log_Q,ratio\n", 0) == 0);
    CHECK(resid.rfind("log_Q,residual_norm\n", 0) == 0);
    // columns parse back and are ordered by Q
    std::istringstream in(ratio);
    std::string line;
    std::getline(in, line);
    double prev = -1e300;
    while (std::getline(in, line)) {
        double lq = std::stod(line.substr(0, line.find(',')));
        double r = std::stod(line.substr(line.find(',') + 1));
        CHECK(std::isfinite(r));
        CHECK(lq > prev);
        prev = lq;
    }
}

TEST_CASE("atomic file write") {
    auto dir = std::filesystem::temp_directory_path() / "qlm_cli_test";
    std::filesystem::create_directories(dir);
    std::string path = (dir / "x.txt").string();
    write_file_atomic(path, "hello\n");
    CHECK(slurp(path) == "hello\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("family subcommand output") {
    RunConfig cfg;
    cfg.family_bound = 100;
    std::ostringstream out;
    CHECK(cli::cmd_family(cfg, out) == 0);
    CHECK(out.str() ==
          "q,omega\n11,1\n19,1\n29,1\n31,1\n41,1\n59,1\n61,1\n71,1\n79,1\n89,1\n");
}

TEST_CASE("lvalue subcommand") {
    RunConfig cfg;
    cfg.lvalue_q = 5;
    std::ostringstream out;
    CHECK(cli::cmd_lvalue(cfg, out) == 0);
    std::string s = out.str();
    CHECK(s.find("q=5 parity=1") != std::string::npos);
    CHECK(s.find("afe    0.2317509475") != std::string::npos);
    CHECK(s.find("oracle 0.2317509475") != std::string::npos);
    // invalid conductor surfaces as domain_error (mapped to exit code 2 in main)
    RunConfig bad;
    bad.lvalue_q = 9;
    std::ostringstream sink;
    CHECK_THROWS_AS(cli::cmd_lvalue(bad, sink), std::domain_error);
}

TEST_CASE("predict subcommand") {
    RunConfig cfg;
    cfg.Q_ladder = {1000.0};
    cfg.prime_cutoff = 2000;
    std::ostringstream out;
    CHECK(cli::cmd_predict(cfg, out) == 0);
    std::string s = out.str();
    CHECK(s.find("\"C_K1\"") != std::string::npos);
    CHECK(s.find("P_K slope=") != std::string::npos);
    CHECK(s.find("printed-display audit") != std::string::npos);
    CHECK(s.find("M_pred=") != std::string::npos);
}

TEST_CASE("compare subcommand is reproducible") {
    auto dir = std::filesystem::temp_directory_path() / "qlm_compare_test";
    std::filesystem::create_directories(dir);
    RunConfig cfg;
    cfg.Q_ladder = {200.0, 400.0};
    cfg.prime_cutoff = 2000;
    cfg.output_path = (dir / "rep").string();
    cfg.cache_path = (dir / "cache.csv").string();
    std::ostringstream out1, out2;
    CHECK(cli::cmd_compare(cfg, out1) == 0);
    std::string csv1 = slurp(dir / "rep.csv");
    CHECK(cli::cmd_compare(cfg, out2) == 0);  // second run hits the cache
    std::string csv2 = slurp(dir / "rep.csv");
    CHECK(csv1 == csv2);  // bit-identical
    CHECK(csv1.rfind("# config_hash=" + config_hash(cfg), 0) == 0);
    CHECK(std::filesystem::exists(dir / "rep.json"));
    CHECK(std::filesystem::exists(dir / "rep_ratio.csv"));
    CHECK(std::filesystem::exists(dir / "rep_residual.csv"));
    CHECK(std::filesystem::exists(dir / "cache.csv"));
    // the JSON report embeds the config hash and the constants block
    nlohmann::json j = nlohmann::json::parse(slurp(dir / "rep.json"));
    CHECK(j["manifest"]["config_hash"] == config_hash(cfg));
    CHECK(j["constants"].contains("C_K1"));
    CHECK(j["rows"].size() == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("scan subcommand") {
    auto dir = std::filesystem::temp_directory_path() / "qlm_scan_test";
    std::filesystem::create_directories(dir);
    RunConfig cfg;
    cfg.scan_bound = 300;
    cfg.output_path = (dir / "rep").string();
    std::ostringstream out;
    CHECK(cli::cmd_scan(cfg, out) == 0);
    nlohmann::json j = nlohmann::json::parse(slurp(dir / "rep_scan.json"));
    CHECK(j["family_size"].get<uint64_t>() > 10);
    CHECK(j["nonzero_count"] == j["family_size"]);
    CHECK(j["min_abs_value"].get<double>() > 0.0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cache directory env override") {
    RunConfig cfg;
    cfg.cache_path = "relative.csv";
    setenv("QLM_CACHE_DIR", "/tmp/qlm_env_test", 1);
    std::string resolved = cli::resolve_cache_path(cfg);
    CHECK(resolved == std::string("/tmp/qlm_env_test/relative.csv"));
    unsetenv("QLM_CACHE_DIR");
    CHECK(cli::resolve_cache_path(cfg) == "relative.csv");
    cfg.cache_path = "/abs/path.csv";
    setenv("QLM_CACHE_DIR", "/tmp/qlm_env_test", 1);
    CHECK(cli::resolve_cache_path(cfg) == "/abs/path.csv");
    unsetenv("QLM_CACHE_DIR");
}
