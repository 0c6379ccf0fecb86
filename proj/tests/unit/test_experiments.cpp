#include <doctest.h>

#include <cmath>
#include <sstream>

#include "maxperim/experiments.hpp"

using namespace maxperim;
namespace ex = maxperim::experiments;
using ex::json;

TEST_CASE("exponent fit") {
  std::vector<std::pair<double, double>> rows;
  for (double n : {4.0, 8.0, 16.0, 32.0}) rows.emplace_back(n, 3.0 * std::pow(n, 0.25));
  auto const f = ex::fit_exponent(rows);
  CHECK(f.slope == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.points.size() == 4);

  std::vector<std::pair<double, double>> linear{{1, 2}, {2, 4}, {5, 10}};
  CHECK(ex::fit_exponent(linear).slope == doctest::Approx(1.0));

  std::vector<std::pair<double, double>> noisy{{2, 1.0}, {4, 3.0}, {8, 2.0}, {16, 5.0}};
  auto const nf = ex::fit_exponent(noisy);
  CHECK(nf.r_squared >= 0.0);
  CHECK(nf.r_squared <= 1.0);

  CHECK_THROWS_AS(ex::fit_exponent({{1, 1}, {2, 2}}), InputError);
  CHECK_THROWS_AS(ex::fit_exponent({{1, 1}, {2, 0}, {3, 1}}), InputError);
  CHECK_THROWS_AS(ex::fit_exponent({{1, 1}, {2, -1}, {3, 1}}), InputError);
}

TEST_CASE("measure and body descriptors") {
  auto const g = ex::measure_from_json(json::parse(R"({"family":"gaussian","dim":3,"scale":2,"shift":[1,0,0]})"));
  CHECK(g.family() == Family::gaussian);
  CHECK(g.dim() == 3);
  CHECK(g.scale() == 2.0);
  CHECK(g.shift()[0] == 1.0);

  auto const p = ex::measure_from_json(json::parse(R"({"family":"pnorm","p":1.5})"), 4);
  CHECK(p.p() == 1.5);
  CHECK(p.dim() == 4);

  auto const u = ex::measure_from_json(json::parse(R"({"family":"uniform","dim":2,"body":{"kind":"ball","radius":2}})"));
  CHECK(std::holds_alternative<Ball>(*u.body()));

  auto const cube = ex::body_from_json(json::parse(R"({"kind":"cube"})"), g, 0);
  CHECK(std::get<Box>(cube).half_widths() == Vector(3, 0.5));

  auto const poly = ex::body_from_json(
      json::parse(R"({"kind":"polytope","facets":[{"normal":[1,0,0],"offset":1},{"normal":[-1,0,0],"offset":1}]})"), g, 0);
  CHECK(std::get<Polytope>(poly).facet_count() == 2);

  auto const naz = ex::body_from_json(json::parse(R"({"kind":"nazarov"})"), ex::measure_from_json(json{{"family", "gaussian"}}, 16), 4);
  CHECK(std::get<Polytope>(naz).facet_count() == 3);
}

TEST_CASE("config errors name the offending field") {
  auto field_of = [](auto&& f) -> std::string {
    try {
      f();
    } catch (ex::ConfigError const& e) {
      return e.field;
    }
    return "<no error>";
  };
  CHECK(field_of([] { ex::measure_from_json(json::parse(R"({"family":"cauchy","dim":2})")); }) == "measure.family");
  CHECK(field_of([] { ex::measure_from_json(json::parse(R"({"family":"pnorm","dim":2})")); }) == "measure.p");
  CHECK(field_of([] { ex::measure_from_json(json::parse(R"({"family":"pnorm","dim":2,"p":-1})")); }) == "measure");
  CHECK(field_of([] { ex::measure_from_json(json::parse(R"({"family":"gaussian"})")); }) == "measure.dim");
  CHECK(field_of([] { ex::measure_from_json(json::parse(R"({"family":"gaussian","dim":2,"shift":[1]})")); }) ==
        "measure.shift");
  CHECK(field_of([] { ex::scan_config_from_json(json::parse(R"({"dims":[]})")); }) == "dims");
  CHECK(field_of([] { ex::scan_config_from_json(json::parse(R"({"dims":[4,"x"]})")); }) == "dims[1]");
  CHECK(field_of([] { ex::scan_config_from_json(json::parse(R"({"dims":[4],"samples":10})")); }) == "samples");
  CHECK(field_of([] { ex::scan_config_from_json(json::parse(R"({"dims":[4],"alpha":1.5})")); }) == "alpha");
  CHECK(field_of([] {
          ex::perimeter_config_from_json(json::parse(R"({"measure":{"family":"gaussian","dim":2},"body":{"kind":"ball"}})"));
          ex::run_perimeter(ex::perimeter_config_from_json(
              json::parse(R"({"measure":{"family":"gaussian","dim":2},"body":{"kind":"ball"}})")));
        }) == "body.radius");
  CHECK(field_of([] { ex::perimeter_config_from_json(json::parse(R"({"measure":"gaussian"})")); }) == "body");
}

TEST_CASE("perimeter runner") {
  auto const config = ex::perimeter_config_from_json(json::parse(R"({
    "samples": 200000, "seed": 5,
    "jobs": [
      {"measure": {"family":"uniform","dim":3}, "body": {"kind":"cube"}},
      {"measure": {"family":"gaussian","dim":8}, "body": {"kind":"halfspace","normal":[1,0,0,0,0,0,0,0],"offset":0}},
      {"measure": {"family":"gaussian","dim":8}, "body": {"kind":"halfspace","normal":[1,0,0,0,0,0,0,0],"offset":0},
       "method": "facet_shell"},
      {"measure": {"family":"pnorm","dim":2,"p":1}, "body": {"kind":"halfspace","normal":[1,0],"offset":0},
       "method": "closed_form"}
    ]})"));
  auto const rows = ex::run_perimeter(config);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].method == "facet_shell");
  CHECK(std::abs(rows[0].value - 6.0) < 3.0 * rows[0].std_error);
  CHECK(rows[1].method == "closed_form");
  CHECK(rows[1].value == doctest::Approx(0.3989422804));
  CHECK(std::abs(rows[2].value - rows[1].value) < 3.0 * rows[2].std_error);
  CHECK_FALSE(rows[3].error.empty());
  CHECK(std::isnan(rows[3].value));

  std::ostringstream a, b;
  ex::write_perimeter_csv(a, rows);
  auto const again = ex::run_perimeter(config);
  ex::write_perimeter_csv(b, again);
  // identical apart from the wall_time column
  auto strip = [](std::string s) {
    std::istringstream in(s);
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
  };
  CHECK(strip(a.str()) == strip(b.str()));
  CHECK(a.str().rfind("body,measure,n,method,side,value,stderr,eps,samples,seed,version,error,wall_time\n", 0) == 0);
}

TEST_CASE("scan runner, CSV, SVG and fit") {
  auto const config = ex::scan_config_from_json(json::parse(R"({"dims":[4,8,16],"trials":3,"samples":20000,"seed":7})"));
  auto const rows = ex::run_nazarov_scan(config);
  REQUIRE(rows.size() == 3);
  for (auto const& r : rows) {
    CHECK(r.ok());
    CHECK(r.empirical_mean > 0.0);
    CHECK(r.empirical_stderr > 0.0);
    CHECK(r.facets >= 2);
    CHECK(r.seed == 7);
  }
  CHECK(rows[2].expected_norm == doctest::Approx(3.938026).epsilon(1e-6));

  std::ostringstream csv, svg;
  ex::write_scan_csv(csv, rows);
  ex::write_scan_svg(svg, rows, "test");
  CHECK(csv.str().rfind("n,E,W,alpha,beta,rho,N,analytic_bound,empirical_mean,empirical_stderr,seed,version,error,wall_time", 0) == 0);
  CHECK(svg.str().find("<polyline") != std::string::npos);

  std::istringstream in(csv.str());
  auto const points = ex::read_points_csv(in, "empirical_mean");
  REQUIRE(points.size() == 3);
  CHECK(points[1].first == 8.0);
  CHECK(points[1].second == rows[1].empirical_mean);
  auto const fit = ex::fit_exponent(points);
  CHECK(fit.slope > 0.0);

  auto const again = ex::run_nazarov_scan(config);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].empirical_mean == rows[i].empirical_mean);

  CHECK(ex::estimate_scan_minutes(config) > 0.0);
}

TEST_CASE("scan rows record failures instead of aborting") {
  // alpha below w violates the hypothesis in every dimension
  auto const config = ex::scan_config_from_json(json::parse(R"({"dims":[4,8],"trials":1,"samples":10000,"alpha":0.01})"));
  auto const rows = ex::run_nazarov_scan(config);
  for (auto const& r : rows) {
    CHECK_FALSE(r.ok());
    CHECK(r.error.find("alpha") != std::string::npos);
  }
  CHECK(ex::scan_points(rows).empty());
}

TEST_CASE("bound report JSON") {
  auto const config = ex::report_config_from_json(json::parse(
      R"({"measure":{"family":"gaussian","dim":3},"body":{"kind":"ball","radius":1.5},"samples":50000,"seed":1})"));
  auto const m = ex::measure_from_json(config.measure);
  auto const body = ex::body_from_json(*config.body, m, 1);
  auto const report = bounds_report(m, body, config.options);
  auto const j = ex::to_json(report);
  CHECK(j["lower"]["value"].get<double>() <= j["upper"]["value"].get<double>());
  CHECK(j["empirical"]["stderr"].get<double>() > 0.0);
  CHECK(j["bounds_applied"].size() >= 4);
  std::ostringstream csv;
  ex::write_report_csv(csv, report, 1, 0.5);
  CHECK(csv.str().find("lower_source") != std::string::npos);
}
