#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "balloon/cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = balloon::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("balloon_cli_test_" + name);
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += (c == '\n');
    return n;
}

}  // namespace

TEST_CASE("mylar csv: row count contract and report preamble") {
    auto r = run({"mylar", "--a", "1", "--samples", "100", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 100 + 1 + 6);  // rows + header + report preamble
    CHECK(r.out.find("x,f\n") != std::string::npos);
    CHECK(r.out.find("# volume=") != std::string::npos);
    CHECK(r.out.find("\r") == std::string::npos);  // line-feed newlines only
}

TEST_CASE("mylar json: report values against the Beta oracles") {
    auto r = run({"mylar", "--a", "1", "--format", "json"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(std::abs(doc["report"]["volume"].get<double>() - oracle::kMylarVolume1) < 1e-5);
    CHECK(std::abs(doc["report"]["thickness"].get<double>() - oracle::kMylarThickness1) < 1e-5);
    CHECK(std::abs(doc["report"]["flat_radius"].get<double>() - oracle::kFlatRadius1) < 1e-7);
    CHECK(doc["samples"].size() == 200);
    CHECK(doc["residuals"]["volume_route_gap"].get<double>() < 1e-8);
}

TEST_CASE("mylar usage validation") {
    CHECK(run({"mylar", "--a", "-1"}).code == 64);
    CHECK(run({"mylar"}).code == 64);
    CHECK(run({"mylar", "--a", "1", "--samples", "1"}).code == 64);
    CHECK(run({"mylar", "--a", "1", "--bogus", "2"}).code == 64);
    CHECK(run({"mylar", "--a", "nope"}).code == 64);
}

TEST_CASE("implicit reproduces the mylar member; invalid family exits 1") {
    auto r = run({"implicit", "--lambda", "0", "--mu", "16", "--L", "1.3110287771460599",
                  "--samples", "50", "--format", "csv"});
    REQUIRE(r.code == 0);
    // Last data row: k within 1e-6 of 2.
    const auto pos = r.out.rfind('\n', r.out.size() - 2);
    std::string last = r.out.substr(pos + 1);
    double t, k;
    REQUIRE(std::sscanf(last.c_str(), "%lf,%lf", &t, &k) == 2);
    CHECK(std::abs(k - 2.0) < 1e-6);

    auto bad = run({"implicit", "--lambda", "0", "--mu", "-1", "--L", "1"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("branch") != std::string::npos);
}

TEST_CASE("solve at a fixed point emits a constant k column") {
    auto r = run({"solve", "--k0", "1", "--kp0", "0", "--lambda", "0.5", "--L", "2",
                  "--samples", "20", "--format", "json"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    for (const auto& row : doc["samples"]) {
        CHECK(std::abs(row[1].get<double>() - 1.0) < 1e-9);
    }
}

TEST_CASE("assemble: mylar section closes; sweep row count; svg structure") {
    auto asmres = run({"assemble", "--n", "2", "--L", "1.3110287771460599", "--target-angle",
                       "0", "--format", "json"});
    REQUIRE(asmres.code == 0);
    auto doc = nlohmann::json::parse(asmres.out);
    CHECK(doc["report"]["closure_gap"].get<double>() <= 1e-6);
    CHECK(std::abs(doc["report"]["turning_plus_corners"].get<double>() - 2 * 3.14159265358979) <
          1e-6);

    auto sweep = run({"sweep", "--nu-start", "0.5", "--nu-stop", "2.5", "--nu-count", "5",
                      "--L", "1", "--format", "csv"});
    REQUIRE(sweep.code == 0);
    CHECK(count_lines(sweep.out) == 5 + 1 + 3);  // rows + header + preamble

    auto svg = run({"assemble", "--n", "4", "--L", "1.0", "--target-angle", "0.8",
                    "--format", "svg"});
    REQUIRE(svg.code == 0);
    CHECK(svg.out.find("<svg") != std::string::npos);
    // One polyline per arc.
    std::size_t n = 0;
    for (std::size_t p = svg.out.find("<polyline"); p != std::string::npos;
         p = svg.out.find("<polyline", p + 1)) {
        ++n;
    }
    CHECK(n == 4);

    CHECK(run({"assemble", "--n", "3", "--L", "1", "--target-angle", "0"}).code == 64);
    CHECK(run({"assemble", "--n", "2", "--L", "1", "--target-angle", "3.14"}).code == 1);
    CHECK(run({"assemble", "--n", "2", "--L", "1"}).code == 64);
}

TEST_CASE("identical invocations produce byte-identical files") {
    const auto p1 = temp_file("det1.json");
    const auto p2 = temp_file("det2.json");
    for (const auto& p : {p1, p2}) {
        auto r = run({"implicit", "--lambda", "0.5", "--mu", "3", "--L", "2", "--format",
                      "json", "--out", p.string()});
        REQUIRE(r.code == 0);
    }
    CHECK(slurp(p1) == slurp(p2));
    fs::remove(p1);
    fs::remove(p2);
}

TEST_CASE("config file provides defaults, flags override") {
    const auto cfg = temp_file("cfg.txt");
    {
        std::ofstream out(cfg);
        out << "a = 2\n"
            << "samples = 7\n"
            << "# comment line\n";
    }
    auto r = run({"mylar", "--config", cfg.string(), "--samples", "4", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(count_lines(r.out) == 4 + 1 + 6);
    CHECK(r.out.find("# a=2.0000000000000000e+00") != std::string::npos);
    fs::remove(cfg);
    CHECK(run({"mylar", "--config", "/no/such/file"}).code == 64);
}

TEST_CASE("validate: pass by default, fail under injected fault, residuals printed") {
    auto ok = run({"validate"});
    CHECK(ok.code == 0);
    CHECK(count_lines(ok.out) >= 13);  // >= 12 checks plus the summary
    CHECK(ok.out.find("PASS") != std::string::npos);

    auto fault = run({"validate", "--inject-fault"});
    CHECK(fault.code == 1);
    CHECK(fault.out.find("FAIL") != std::string::npos);

    auto tight = run({"validate", "--tol-scale", "1e-3"});
    CHECK(count_lines(tight.out) >= 13);    // residuals still printed
    CHECK(tight.out.find("measured=") != std::string::npos);
}

TEST_CASE("unwritable output path exits 2") {
    auto r = run({"mylar", "--a", "1", "--out", "/nonexistent-dir/out.csv"});
    CHECK(r.code == 2);
}
