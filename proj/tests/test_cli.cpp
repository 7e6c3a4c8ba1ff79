#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "movavg/cli.hpp"
#include "movavg/errors.hpp"

using namespace movavg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("movavg_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("config parsing") {
    Config cfg = Config::from_text("# comment\nfamily = linear:r=2\nK = 12\nflag = true\n");
    CHECK(cfg.require("family") == "linear:r=2");
    CHECK(cfg.get_int("K", 0) == 12);
    CHECK(cfg.get_bool("flag", false));
    CHECK(cfg.get("missing", "x") == "x");
    CHECK_THROWS_AS(cfg.require("missing"), ConfigError);

    try {
        Config::from_text("a = 1\nbroken line\n", "test.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("test.cfg:2") != std::string::npos);
    }
}

TEST_CASE("verdict command writes the documented verdict") {
    fs::path dir = fresh_dir("verdict");
    Config cfg;
    cfg.set("family", "linear:r=2");
    cfg.set("K", "2000");
    cfg.set("axis", "1");
    cfg.set("out", dir.string());
    CHECK(run_command("verdict", cfg) == 0);
    auto j = nlohmann::json::parse(slurp(dir / "verdict_report.json"));
    CHECK(j["result"]["verdict"] == "Holds");
    CHECK(j["version"] == kVersion);
    CHECK(j["config"]["family"] == "linear:r=2");
}

TEST_CASE("reports are byte-identical for identical config and seed") {
    fs::path dir = fresh_dir("determinism");
    Config cfg;
    cfg.set("family", "linear:r=1");
    cfg.set("K", "500");
    cfg.set("samples", "20");
    cfg.set("seed", "99");
    cfg.set("out", dir.string());
    CHECK(run_command("converge", cfg) == 0);
    std::string first = slurp(dir / "converge_report.json");
    std::string first_csv = slurp(dir / "converge.csv");
    CHECK(run_command("converge", cfg) == 0);
    CHECK(slurp(dir / "converge_report.json") == first);
    CHECK(slurp(dir / "converge.csv") == first_csv);
}

TEST_CASE("tower command reproduces the sqrt(2)-1 coverage") {
    fs::path dir = fresh_dir("tower");
    Config cfg;
    cfg.set("theta", "sqrt2m1");
    cfg.set("N", "3");
    cfg.set("delta", "1/2");
    cfg.set("out", dir.string());
    CHECK(run_command("tower", cfg) == 0);
    auto j = nlohmann::json::parse(slurp(dir / "tower_report.json"));
    CHECK(j["coverage"]["exact"] == "9-6*sqrt(2)");
    CHECK(double(j["coverage"]["approx"]) == doctest::Approx(0.51472).epsilon(1e-4));
    CHECK(j["disjoint"] == true);
}

TEST_CASE("sweepout command certifies the ratio") {
    fs::path dir = fresh_dir("sweepout");
    Config cfg;
    cfg.set("family", "squares_unit");
    cfg.set("K", "100");
    cfg.set("p", "3");
    cfg.set("theta", "golden");
    cfg.set("ratio_samples", "2000");
    cfg.set("samples", "200");
    cfg.set("scan_K", "40");
    cfg.set("out", dir.string());
    CHECK(run_command("sweepout", cfg) == 0);
    auto j = nlohmann::json::parse(slurp(dir / "sweepout_report.json"));
    CHECK(j["ratio"]["ratio_ok"] == true);
    CHECK(double(j["ratio"]["ratio"]["approx"]) >= 3.0);
    CHECK(j["sets"]["measure_identity_ok"] == true);
}

TEST_CASE("cones command emits the CSV table") {
    fs::path dir = fresh_dir("cones");
    Config cfg;
    cfg.set("family", "linear:r=2");
    cfg.set("K", "200");
    cfg.set("alpha_grid", "1");
    cfg.set("lambda_grid", "10,20,40");
    cfg.set("out", dir.string());
    CHECK(run_command("cones", cfg) == 0);
    std::string csv = slurp(dir / "cones.csv");
    CHECK(csv.find("alpha,lambda,size,ratio") == 0);
    CHECK(csv.find("1,10,17,1.7") != std::string::npos);
}

TEST_CASE("error paths map to exit codes") {
    Config cfg;
    cfg.set("family", "unknown_generator");
    CHECK(run_command("verdict", cfg) == 3);
    CHECK(run_command("nonsense", Config()) == 3);

    // insufficient prefix: lambda grid beyond the coverage bound
    Config small;
    small.set("family", "linear:r=2");
    small.set("K", "5");
    CHECK(run_command("verdict", small) == 3);
}
