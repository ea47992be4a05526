#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "qutrit-rabi");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = qrabi::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    const char* env = std::getenv("QRABI_TEST_TMP");
    fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "qrabi_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"spectrum", "--levels", "three"}).code == 2);
}

TEST_CASE("spectrum of the level-crossing example") {
    const auto r = run({"spectrum", "--preset", "level-crossing", "--omega", "1", "--gamma", "0.7", "--lambda", "0.6",
                        "--sector", "m=-1", "--levels", "2"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "index,energy,residual");
    CHECK(first.rfind("0,-2.06,", 0) == 0);
}

TEST_CASE("spectrum configuration errors") {
    CHECK(run({"spectrum"}).code == 2);
    CHECK(run({"spectrum", "--preset", "level-crossing", "--omega", "1"}).code == 2);
    CHECK(run({"spectrum", "--preset", "nope", "--omega", "1", "--gamma", "1", "--lambda", "1"}).code == 2);
    CHECK(run({"spectrum", "--preset", "level-crossing", "--omega", "1", "--gamma", "1", "--lambda", "1", "--sector",
               "m=9"})
              .code == 2);
    const auto bad = scratch() / "bad.json";
    std::ofstream(bad) << R"({"omega1": 1})";
    CHECK(run({"spectrum", "--params", bad.string()}).code == 2);
    CHECK(run({"spectrum", "--params", bad.string(), "--preset", "qpt"}).code == 2);
}

TEST_CASE("spectrum from a parameter file writes a CSV") {
    const auto dir = scratch();
    const auto params = dir / "lc.json";
    std::ofstream(params) << R"({"omega1": 1, "omega2": 1, "gamma_x": 0.7, "gamma_y": 0.7, "gamma_z": 0,
                                 "omega_mode": 1, "lambda1": 0.6, "lambda2": 0.6, "n_max": 30})";
    const auto out = dir / "levels.csv";
    const auto r = run({"spectrum", "--params", params.string(), "--sector", "K=-1", "--levels", "4", "-o", out.string()});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(out);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("anisotropic parameters refuse m sectors") {
    const auto params = scratch() / "aniso.json";
    std::ofstream(params) << R"({"omega1": 1, "omega2": 1, "gamma_x": 0.7, "gamma_y": 0.2, "gamma_z": 0,
                                 "omega_mode": 1, "lambda1": 0.6, "lambda2": 0.6, "n_max": 10})";
    CHECK(run({"spectrum", "--params", params.string(), "--sector", "m=0"}).code == 2);
    CHECK(run({"spectrum", "--params", params.string(), "--sector", "K=+1"}).code == 0);
}

TEST_CASE("phase-diagram writes CSV and sidecar") {
    const auto out = scratch() / "pd.csv";
    fs::remove(out);
    fs::remove(scratch() / "pd.json");
    const auto r = run({"phase-diagram", "--grid", "omega:-1:1:3,x:0.05:0.4:3", "--n-max", "16", "--workers", "2", "-o",
                        out.string()});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(out);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
    const auto doc = nlohmann::json::parse(slurp(scratch() / "pd.json"));
    CHECK(doc["command"] == "phase-diagram");
    CHECK(doc["failed"] == 0);
}

TEST_CASE("phase-diagram rejects malformed grids without writing output") {
    const auto out = scratch() / "never.csv";
    fs::remove(out);
    CHECK(run({"phase-diagram", "--grid", "omega:-1:1:3", "-o", out.string()}).code == 2);
    CHECK(run({"phase-diagram", "--grid", "x:0:1:3,omega:-1:1:3", "-o", out.string()}).code == 2);
    CHECK(run({"phase-diagram", "--grid", "omega:1:-1:3,x:0:1:3", "-o", out.string()}).code == 2);
    CHECK(run({"phase-diagram", "--workers", "0", "-o", out.string()}).code == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("qpt-scan reports the critical point") {
    const auto r = run({"qpt-scan", "--g", "0.5:1.5:11", "--omega-over-gamma", "0.01"});
    REQUIRE(r.code == 0);
    CHECK(r.err.find("g_star") != std::string::npos);
    CHECK(r.out.rfind("g,omega_over_gamma,", 0) == 0);
    CHECK(run({"qpt-scan", "--convention", "sideways"}).code == 2);
}

TEST_CASE("qpt-scan exits 3 when too many points fail") {
    const auto r = run({"qpt-scan", "--g", "1.5:2.0:3", "--omega-over-gamma", "0.001", "--n-floor", "16", "--n-cap", "32"});
    CHECK(r.code == 3);
}

TEST_CASE("crossing-lines output") {
    const auto r = run({"crossing-lines", "--samples", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("family_a,family_b,omega_over_gamma,x\n", 0) == 0);
    CHECK(r.err.find("triple point") != std::string::npos);
}

TEST_CASE("validate subset") {
    const auto r = run({"validate", "--only", "2,3", "--workers", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS   2") != std::string::npos);
    CHECK(r.out.find("2/2 criteria passed") != std::string::npos);
    CHECK(run({"validate", "--only", "12"}).code == 2);
}
