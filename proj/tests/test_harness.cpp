#include "sinebody/harness.hpp"

#include "sinebody/sine_polarity.hpp"

#include <doctest.h>

#include <sstream>

using namespace sinebody;

namespace {

Vec v3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

}  // namespace

TEST_CASE("lp sine Blaschke-Santalo reports") {
  const auto g = default_rule(3);
  const auto r = verify_lp_sine_bs(make_ball(3), 2, g);
  CHECK(std::abs(r.ratio - 1) <= 1e-6);
  CHECK(r.pass);
  CHECK(r.equality);
  CHECK(r.rule == "gauss:64x128");
  const auto s = verify_lp_sine_bs(make_ellipsoid(v3(1, 1, 2)), 2, g);
  CHECK(s.ratio < 0.999);
  CHECK(s.pass);
  CHECK_FALSE(s.equality);
  const auto e = verify_lp_sine_bs(zoo_body("ellipse12"), 2, default_rule(2));
  CHECK(std::abs(e.ratio - 1) <= 1e-4);
  CHECK(e.equality);
}

TEST_CASE("sine Blaschke-Santalo and polar dominance reports") {
  const auto g = default_rule(3);
  CHECK(std::abs(verify_sine_bs(make_ball(3), g).ratio - 1) <= 1e-6);
  const auto box = verify_sine_bs(zoo_body("box2"), parse_rule("uniform:16384", 2));
  CHECK(std::abs(box.ratio - 8 / (M_PI * M_PI)) <= 1e-6);
  CHECK(box.tol == 1e-3);
  const auto tri = verify_sine_bs(make_tricylinder(), parse_rule("gauss:24", 3));
  CHECK(tri.ratio < 1);
  CHECK(tri.pass);
  const auto ball = verify_polar_dominates_diamond(make_ball(3), g);
  CHECK(ball.ratio == doctest::Approx(1.0).epsilon(1e-12));
  const auto bi = verify_polar_dominates_diamond(make_bicylinder(), parse_rule("gauss:24", 3));
  CHECK(bi.ratio <= 1);
  CHECK_THROWS_AS(verify_polar_dominates_diamond(make_box(v3(1, 1, 1)), g), std::invalid_argument);
}

TEST_CASE("double integral inequality") {
  const auto g = default_rule(3);
  const auto equal = verify_double_integral_ineq(make_ball(3), make_ball(3), 2, 100000, 42, g);
  CHECK(equal.pass);
  CHECK(equal.equality);
  CHECK(equal.std_error > 0);
  CHECK(equal.seed == 42u);
  const auto strict =
      verify_double_integral_ineq(make_ball(3), make_ellipsoid(v3(1, 1, 2)), 2, 100000, 42, g);
  CHECK(strict.pass);
  CHECK_FALSE(strict.equality);
  CHECK(strict.lhs - strict.rhs > 3 * strict.std_error);
  const auto planar = verify_double_integral_ineq(make_ball(2), zoo_body("ellipse12"), 1, 20000, 1,
                                                  default_rule(2));
  CHECK(planar.pass);
  const auto again = verify_double_integral_ineq(make_ball(2), zoo_body("ellipse12"), 1, 20000, 1,
                                                 default_rule(2));
  CHECK(again.lhs == planar.lhs);
  CHECK_THROWS(verify_double_integral_ineq(make_ball(3), make_ball(3), 2, 100, 42, g));
  CHECK_THROWS(verify_double_integral_ineq(make_ball(3), make_ball(3), 0.5, 100000, 42, g));
}

TEST_CASE("spherical function inequality") {
  const auto g = default_rule(3);
  auto one = [](const Vec&) { return 1.0; };
  const auto r = verify_spherical_function_ineq(one, one, 2, g);
  CHECK(std::abs(r.lhs - r.rhs) <= 1e-8);
  CHECK(r.equality);
  const auto e = make_ellipsoid(v3(1, 1, 2));
  auto f = [&e](const Vec& u) { return std::pow(e->radial(u), 5); };
  const auto s = verify_spherical_function_ineq(f, f, 2, g);
  CHECK(s.pass);
  CHECK(s.ratio < 0.99);
  const auto zero = verify_spherical_function_ineq([](const Vec&) { return 0.0; }, one, 2, g);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.pass);
  const auto odd = verify_spherical_function_ineq(one, one, 1, g);
  CHECK(std::abs(odd.lhs - odd.rhs) <= 1e-8);
  CHECK_THROWS(verify_spherical_function_ineq([](const Vec&) { return -1.0; }, one, 2, g));
}

TEST_CASE("sup bracket inequality") {
  const auto g = default_rule(3);
  const auto balls = verify_sup_bracket_ineq(make_ball(3), make_ball(3), g);
  CHECK(balls.lhs == doctest::Approx(1.0));
  CHECK(balls.rhs == doctest::Approx(1.0));
  CHECK(balls.equality);
  CHECK(sup_bracket(*make_ball(3, 2), *make_ball(3, 3)) == doctest::Approx(6.0));
  CHECK(verify_sup_bracket_ineq(make_ball(3, 2), make_ball(3, 3), g).pass);
  const auto e = make_ellipsoid(v3(1, 1, 2));
  const auto dual = verify_sup_bracket_ineq(e, sine_polar(e), g);
  CHECK(dual.lhs == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(dual.rhs <= 1.0);
  CHECK(dual.pass);
}

TEST_CASE("suite config parsing and failure aggregation") {
  const auto config = parse_suite_config(R"({
    "tolerances": {"smooth": 1e-7},
    "checks": [
      {"check": "sine_bs", "body": "ball3"},
      {"check": "lp_sine_bs", "body": {"kind": "ellipsoid", "semiaxes": [1, 2]}, "p": 2},
      {"check": "lp_sine_bs", "body": "ball3"},
      {"check": "no_such_check", "body": "ball3"},
      {"check": "sine_bs", "body": "/does/not/exist.json"}
    ]})");
  CHECK(config.tolerances.smooth == 1e-7);
  CHECK(config.tolerances.nonsmooth == 1e-3);
  const auto reports = run_suite(config);
  REQUIRE(reports.size() == 5);
  CHECK(reports[0].pass);
  CHECK(reports[0].tol == 1e-7);
  CHECK(reports[1].pass);
  CHECK(reports[1].n == 2);
  CHECK_FALSE(reports[2].pass);
  CHECK(reports[2].error.find("p") != std::string::npos);
  CHECK_FALSE(reports[3].pass);
  CHECK_FALSE(reports[4].pass);
  CHECK_THROWS(parse_suite_config(R"({"nothing": []})"));
}

TEST_CASE("csv output is reproducible") {
  SuiteConfig config;
  config.items.push_back({"double_integral", "ball3", "spheroid112", 2.0, "gauss:16", 20000, 7});
  config.items.push_back({"sup_bracket", "box3", "ball3", std::nullopt, "gauss:16", 0, 0});
  std::ostringstream a;
  std::ostringstream b;
  write_reports_csv(a, run_suite(config));
  write_reports_csv(b, run_suite(config));
  CHECK(a.str() == b.str());
  std::istringstream lines(a.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "name,n,p,body_K,body_L,rule,seed,lhs,rhs,ratio,tol,pass,equality_flag,wall_ms");
  std::string row;
  std::getline(lines, row);
  CHECK(row.find(",7,") != std::string::npos);
  CHECK(row.back() == ',');
}

TEST_CASE("zoo") {
  for (const auto& name : zoo_names()) CHECK(zoo_body(name)->dim() >= 2);
  CHECK_THROWS(zoo_body("dodecahedron"));
  CHECK(resolve_body(R"({"dim": 3, "kind": "ball", "radius": 2})")->radial(v3(1, 0, 0)) == 2.0);
}
