#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "aww/config.hpp"
#include "aww/csv.hpp"
#include "aww/errors.hpp"
#include "aww/harness.hpp"
#include "aww/scenario.hpp"
#include "aww/sweep.hpp"

using namespace aww;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("aww_unit_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("config parsing") {
    const Config c = Config::parse("# comment\na.b = 1.5\nlist = 1, 2,3\nflag = true\na.b = 2  # later wins\n");
    CHECK(c.get_double("a.b") == 2.0);
    CHECK(c.get_list("list") == std::vector<double>{1, 2, 3});
    CHECK(c.get_bool("flag", false));
    CHECK(c.get_size("absent", 7) == 7);
    CHECK_FALSE(c.has("absent"));
    CHECK_THROWS_WITH_AS(static_cast<void>(c.get("bath.name")), doctest::Contains("bath.name"), ConfigError);
    CHECK_THROWS_AS(Config::parse("no equals sign"), ConfigError);
    CHECK_THROWS_AS(parse_number("1.x", "k"), ConfigError);
    CHECK_THROWS_AS(Config::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("csv formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678}) CHECK(std::stod(csv::format(x)) == x);
    const fs::path dir = scratch("csv");
    {
        csv::Writer w(dir / "t.csv", {"name", "x", "y"});
        w.row({"a"}, {1.0, 2.0});
        w.row({"b"}, {3.0, 0.25});
    }
    const csv::Table t = csv::read(dir / "t.csv");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.header[2] == "y");
    CHECK(t.rows[1][2] == "0.25");
}

TEST_CASE("scenario loading") {
    Config c;
    c.set("scenario", "ww-ref-2level");
    c.set("run.epsilon", "0.05");
    c.set("run.lambda_sq", "0.05");
    const Scenario s = load_scenario(c);
    CHECK(s.atom.levels == 2);
    CHECK(s.gamma_l1 == doctest::Approx(4.0));
    CHECK(s.single_point().lambda == doctest::Approx(std::sqrt(0.05)));
    CHECK(s.z0.size() == 2);

    Config missing;
    missing.set("atom.name", "ww-ref-2level");
    CHECK_THROWS_WITH_AS(load_scenario(missing), doctest::Contains("bath.name"), ConfigError);

    Config bad = c;
    bad.set("init.z0", "1,1");
    CHECK_THROWS_AS(load_scenario(bad), ConfigError);
    bad = c;
    bad.set("scenario", "unknown");
    CHECK_THROWS_AS(load_scenario(bad), ConfigError);
    bad = c;
    bad.set("solver.volterra_mode", "sideways");
    CHECK_THROWS_AS(load_scenario(bad), ConfigError);
}

TEST_CASE("sweep points and smallness checks") {
    Config c;
    c.set("scenario", "ww-ref-2level");
    c.set("sweep.epsilons", "0.2,0.1,0.05");
    c.set("sweep.lambda_rule", "power 1 1");
    Scenario s = load_scenario(c);
    const auto pts = s.sweep_points();
    REQUIRE(pts.size() == 3);
    CHECK(pts[1].lambda * pts[1].lambda == doctest::Approx(0.1));
    CHECK_THROWS_AS(check_point(s, std::sqrt(0.2)), ConfigError);
    s.override_smallness = true;
    CHECK_NOTHROW(check_point(s, std::sqrt(0.2)));

    c.set("sweep.epsilons", "1");
    c.set("sweep.lambda_rule", "list 0.05,0.025,0.0125");
    c.set("scenario", "ww-const-2level");
    const auto list = load_scenario(c).sweep_points();
    REQUIRE(list.size() == 3);
    CHECK(list[2].lambda == 0.0125);

    c.set("sweep.lambda_rule", "list 0.05");
    Scenario single = load_scenario(c);
    CHECK_THROWS_WITH_AS(run_sweep(single, 1), doctest::Contains("need >= 3 points"), ConfigError);
}

TEST_CASE("log-log slope fit") {
    const std::vector<double> x{0.1, 0.2, 0.4, 0.8};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v * v);
    const SlopeFit f = fit_log_slope(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.stderr_slope < 1e-12);
    CHECK(f.points == 4);
    CHECK_THROWS(fit_log_slope({1.0}, {1.0}));
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](std::size_t i) {
                                     if (i == 7) throw NumericalError("boom", 1.0);
                                 }),
                    NumericalError);
}

TEST_CASE("simulate writes its outputs") {
    Config c;
    c.set("scenario", "ww-ref-2level");
    c.set("run.epsilon", "0.1");
    c.set("run.lambda", "0.1");
    Scenario s = load_scenario(c);
    s.out_dir = scratch("simulate");
    std::ostringstream log;
    const PointResult r = run_simulate(s, log);
    for (const char* f : {"exact.csv", "volterra.csv", "effective.csv", "leading.csv", "comparison.csv"}) {
        CHECK(fs::exists(s.out_dir / f));
    }
    CHECK(r.norm_defect < 1e-8);
    CHECK(log.str().find("E_lead") != std::string::npos);

    // λ = 0 leaves only the adiabatic error
    c.set("run.lambda", "0");
    Scenario free = load_scenario(c);
    free.out_dir = scratch("simulate0");
    const PointResult r0 = run_simulate(free, log);
    CHECK(r0.e_lead < 2.0 * 0.1);
    CHECK(r0.p_down_measured < 1e-9);
}

TEST_CASE("validate and regimes") {
    Config c;
    c.set("scenario", "ww-ref-2level");
    c.set("run.epsilon", "0.05");
    c.set("run.lambda_sq", "0.015625");
    Scenario s = load_scenario(c);
    s.out_dir = scratch("validate");
    std::ostringstream log;
    CHECK(run_validate(s, log));
    const csv::Table t = csv::read(s.out_dir / "validate.csv");
    REQUIRE(t.rows.size() == 1);
    CHECK(std::stod(t.rows[0][3]) == doctest::Approx(0.5));

    c.set("sweep.epsilons", "0.01,0.05,0.1");
    c.set("sweep.lambda_rule", "list 0.33,0.2236,0.0316227766");
    Scenario r = load_scenario(c);
    r.out_dir = scratch("regimes");
    const auto pts = run_regimes(r, 1, false, log);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].regime == Regime::strong);
    CHECK(pts[1].regime == Regime::davies);
    CHECK(pts[2].regime == Regime::weak_b);
    CHECK(fs::exists(r.out_dir / "regimes.csv"));
}
