#include <catch_amalgamated.hpp>

#include <cstdlib>

#include "support.hpp"

using namespace fokas;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string violations(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("minimal config fills defaults", "[config]") {
    const auto c = parse_config(json::parse(R"({"params": {"alpha": 1, "beta": 1}, "data": {"preset": "gaussian"}})"));
    CHECK(c.params.alpha == 1.0);
    CHECK(c.T == 2.0);
    CHECK(c.preset == "gaussian");
    CHECK(c.g1.amp == cplx(0, 0.8));
    CHECK(c.quad.tol == 1e-8);
    CHECK(c.oracle.T == 1.0);
    CHECK(c.echo["quadrature"]["tol"] == 1e-8);
    CHECK(c.echo["data"]["g0"]["kind"] == "gaussian_bump");
    const auto e = parse_config(json::object());
    CHECK(e.echo == c.echo);
}

TEST_CASE("presets and overrides", "[config]") {
    const auto early = parse_config(json::parse(R"({"data": {"preset": "early"}})"));
    CHECK(early.T == 1.0);
    const auto shortT = parse_config(json::parse(R"({"params": {"T": 0.5}, "data": {"preset": "zero"}, "grids": {"t": {"min": 0.1, "max": 0.5}}, "dispersion": {"t_hi": 0.5}})"));
    CHECK(shortT.T == 0.5);
    CHECK(shortT.oracle.T == 0.5);
    const auto custom = parse_config(json::parse(
        R"({"data": {"preset": "gaussian", "g1": {"kind": "poly_bump", "amp": [0, 2], "support": [0.5, 1.5], "m": 6}}})"));
    CHECK(custom.preset == "custom");
    CHECK(custom.g1.m == 6);
    CHECK(custom.g1.amp == cplx(0, 2));
    CHECK(custom.datum(custom.g1)(1.0) == cplx(0, 2));
}

TEST_CASE("validation names the offending field", "[config]") {
    CHECK_THAT(violations(json::parse(R"({"params": {"alpha": 0, "beta": 1}})")), ContainsSubstring("params.alpha"));
    CHECK_THAT(violations(json::parse(R"({"data": {"g0": {"kind": "gaussian_bump", "support": [0, 4]}}})")),
               ContainsSubstring("data.support"));
    CHECK_THAT(violations(json::parse(R"({"quadrature": {"tol": 1e-2}})")), ContainsSubstring("quadrature.tol"));
    CHECK_THAT(violations(json::parse(R"({"data": {"preset": "nope"}})")), ContainsSubstring("data.preset"));
    CHECK_THAT(violations(json::parse(R"({"grids": {"x": {"min": 0}}})")), ContainsSubstring("grids.x"));
    CHECK_THAT(violations(json::parse(R"({"oracle": {"Nx": 50}})")), ContainsSubstring("oracle.Nx"));
    CHECK_THAT(violations(json::parse(R"({"params": {"alpha": "one"}})")), ContainsSubstring("params.alpha: wrong type"));
    CHECK_THAT(violations(json::parse(R"({"paramz": {}})")), ContainsSubstring("paramz"));
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("CSV formatting", "[output]") {
    Table empty({"t", "value"});
    CHECK(empty.csv() == "t,value\n");
    Table t({"i", "x", "tag"});
    t.add({1LL, 0.1, std::string("a")});
    const std::string s = t.csv();
    CHECK(s == "i,x,tag\n1,1.00000000000000006e-01,a\n");
    CHECK_THROWS(t.add({1.0}));
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::nextafter(1.0, 2.0)})
        CHECK(std::strtod(fmt_real(v).c_str(), nullptr) == v);
}

TEST_CASE("config hash ignores output location and seed", "[output]") {
    auto a = parse_config(json::object()).echo;
    auto b = a;
    b["output"]["dir"] = "elsewhere";
    b["seed"] = 7;
    CHECK(config_hash(a) == config_hash(b));
    b["quadrature"]["tol"] = 1e-9;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("seeded generator is reproducible", "[output]") {
    SplitMix64 a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
    }
    SplitMix64 u(1);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform(-2, 3);
        CHECK(v >= -2);
        CHECK(v < 3);
    }
}

TEST_CASE("run output writes named files and a manifest", "[output]") {
    const auto dir = std::filesystem::temp_directory_path() / "fokas_output_test";
    std::filesystem::remove_all(dir);
    const auto cfg = parse_config(json::object()).echo;
    {
        RunOutput out(dir, "solve", cfg, 5);
        Table t({"x", "y"});
        t.add({1.0, 2.0});
        const auto p = out.csv(t);
        CHECK(p.filename().string() == "solve_" + out.hash() + ".csv");
        CHECK(out.csv(t, "extra").filename().string() == "solve-extra_" + out.hash() + ".csv");
        out.check("ok", true);
        out.check("bad", false, "detail");
        CHECK_FALSE(out.all_pass());
        out.stage_time("solve", 1.5);
        out.finish();
        const auto m = json::parse(slurp(dir / ("solve_" + out.hash() + ".json")));
        CHECK(m["command"] == "solve");
        CHECK(m["seed"] == 5);
        CHECK(m["files"].size() == 2);
        CHECK(m["pass"] == false);
        CHECK_FALSE(m.contains("timing"));
        CHECK(std::filesystem::exists(dir / ("solve_" + out.hash() + ".timing.json")));
    }
    for (const auto& e : std::filesystem::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
    std::filesystem::remove_all(dir);
}
