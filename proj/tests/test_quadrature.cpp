#include "sinebody/quadrature.hpp"

#include "sinebody/bodies.hpp"
#include "sinebody/parallel.hpp"

#include <doctest.h>

#include <cstdlib>
#include <limits>

using namespace sinebody;

namespace {

Vec v3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

void check_rule_invariants(const SphericalRule& rule) {
  CHECK(std::abs(rule.weights.sum() - 1.0) <= 1e-13);
  CHECK(rule.weights.minCoeff() > 0.0);
  for (Eigen::Index j = 0; j < rule.size(); ++j) {
    REQUIRE(std::abs(rule.nodes.col(j).norm() - 1.0) <= 1e-12);
  }
  // Antipodal symmetry: the sum of all weighted nodes vanishes and the
  // first odd moment of every coordinate is zero.
  CHECK((rule.nodes * rule.weights).norm() <= 1e-12);
}

// |P_V u|^p with V spanned by the first m coordinates.
double projection_power(const Vec& u, int m, double p) {
  return std::pow(u.head(m).norm(), p);
}

}  // namespace

TEST_CASE("rule construction") {
  const auto r = build_rule(2, 8, RuleKind::UniformAngle);
  REQUIRE(r.size() == 8);
  for (int k = 0; k < 8; ++k) {
    CHECK(r.weights(k) == doctest::Approx(1.0 / 8));
    CHECK(std::atan2(r.nodes(1, k), r.nodes(0, k)) ==
          doctest::Approx(std::remainder(k * M_PI / 4, 2 * M_PI)));
  }
  check_rule_invariants(r);
  const auto g = build_rule(3, 32, RuleKind::GaussProduct);
  CHECK(g.size() == 32 * 64);
  check_rule_invariants(g);
  const auto mc = build_rule(4, 2000, RuleKind::MonteCarlo, 42);
  CHECK(mc.size() == 2000);
  check_rule_invariants(mc);
  CHECK(mc.spec == "mc:2000:42");
  CHECK_THROWS(build_rule(3, 8, RuleKind::UniformAngle));
  CHECK_THROWS(build_rule(2, 8, RuleKind::GaussProduct));
  CHECK_THROWS(build_rule(2, 2, RuleKind::UniformAngle));
}

TEST_CASE("rule specs") {
  CHECK(parse_rule("uniform:16", 2).size() == 16);
  CHECK(parse_rule("gauss:8x20", 3).size() == 160);
  CHECK(parse_rule("gauss:8", 3).spec == parse_rule("gauss:8x16", 3).spec);
  CHECK(parse_rule("mc:100:7", 5).seed == 7);
  CHECK_THROWS(parse_rule("gauss:8", 2));
  CHECK_THROWS(parse_rule("uniform:x", 2));
  CHECK_THROWS(parse_rule("simpson:10", 3));
  CHECK(default_rule_spec(2) == "uniform:512");
  CHECK(default_rule_spec(3) == "gauss:64");
  CHECK(default_rule(3).spec == "gauss:64x128");
  CHECK(default_rule_spec(4) == "mc:200000:42");
  const auto a = parse_rule("mc:1000:3", 4);
  const auto b = parse_rule("mc:1000:3", 4);
  CHECK((a.nodes - b.nodes).norm() == 0.0);
  CHECK((a.nodes - parse_rule("mc:1000:4", 4).nodes).norm() > 0.0);
}

TEST_CASE("integration examples") {
  for (const auto& rule : {default_rule(2), default_rule(3), build_rule(4, 4000, RuleKind::MonteCarlo)}) {
    CHECK(integrate(rule, [](const Vec&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(integrate(rule, [](const Vec&) { return 3.5; }) == doctest::Approx(3.5).epsilon(1e-13));
  }
  const auto g = default_rule(3);
  CHECK(integrate(g, [](const Vec& u) { return u(0) * u(0); }) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(integrate(g, [](const Vec& u) { return projection_power(u, 2, 2); }) ==
        doctest::Approx(2.0 / 3).epsilon(1e-14));
  const auto c = build_rule(2, 16, RuleKind::UniformAngle);
  CHECK(integrate(c, [](const Vec& u) { return u(0) * u(0); }) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("non-finite integrand names the node") {
  const auto g = build_rule(3, 4, RuleKind::GaussProduct);
  try {
    integrate(g, [](const Vec& u) {
      return u(2) > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    });
    FAIL("expected an error");
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("projection moments reproduce the closed form") {
  const auto g = parse_rule("gauss:512", 3);
  for (const auto [m, p] : {std::pair{2, 1.0}, {2, 2.0}, {2, 4.0}, {1, 2.0}}) {
    const double q = integrate(g, [m, p](const Vec& u) { return projection_power(u, m, p); });
    CHECK(std::abs(q - sphere_projection_moment(3, m, p)) <= 1e-8);
  }
  const auto mc = build_rule(4, 200000, RuleKind::MonteCarlo, 42);
  const double q = integrate(mc, [](const Vec& u) { return projection_power(u, 3, 2); });
  CHECK(std::abs(q - sphere_projection_moment(4, 3, 2)) <= 5e-3);
}

TEST_CASE("volumes") {
  const auto g = default_rule(3);
  CHECK(volume(*make_ball(3), g) == doctest::Approx(4 * M_PI / 3).epsilon(1e-14));
  CHECK(volume(*make_ellipsoid(v3(1, 1, 2)), g) == doctest::Approx(8 * M_PI / 3).epsilon(1e-12));
  CHECK(volume(*make_ellipsoid(v3(1, 2, 3)), g) == doctest::Approx(8 * M_PI).epsilon(1e-10));
  CHECK(std::abs(volume(*make_bicylinder(), g) / (16.0 / 3) - 1) < 2e-3);
  CHECK(volume(*make_box(Eigen::Vector2d(1, 1)), parse_rule("uniform:4096", 2)) ==
        doctest::Approx(4.0).epsilon(1e-5));
  CHECK_THROWS(volume(*make_ball(2), g));
}

TEST_CASE("dual mixed volume") {
  const auto g = default_rule(3);
  const auto e = make_ellipsoid(v3(1, 2, 3));
  const auto ball = make_ball(3);
  for (const double p : {1.0, 2.0, 3.5}) {
    CHECK(dual_mixed_volume(*e, *e, p, g) == doctest::Approx(volume(*e, g)).epsilon(1e-13));
    CHECK(dual_mixed_volume(*ball, *ball, p, g) == doctest::Approx(unit_ball_volume(3)));
  }
  CHECK(dual_mixed_volume(*make_ball(3, 2.0), *ball, 2, g) ==
        doctest::Approx(unit_ball_volume(3) * 32).epsilon(1e-13));
  // Dual L_{-p} Minkowski inequality and its equality case L' = cL.
  const std::vector<BodyPtr> zoo{ball, e, make_ellipsoid(v3(1, 1, 2)), make_box(v3(1, 1, 1)),
                                 make_bicylinder()};
  for (const auto& k : zoo) {
    for (const auto& l : zoo) {
      for (const double p : {1.0, 2.0}) {
        const double lhs = std::pow(dual_mixed_volume(*k, *l, p, g), 3);
        const double rhs = std::pow(volume(*k, g), 3 + p) * std::pow(volume(*l, g), -p);
        CHECK(lhs >= rhs * (1 - 1e-12));
      }
    }
    const double p = 2.0;
    const double lhs = std::pow(dual_mixed_volume(*k, *scaled(k, 1.7), p, g), 3);
    const double rhs = std::pow(volume(*k, g), 3 + p) * std::pow(volume(*scaled(k, 1.7), g), -p);
    CHECK(std::abs(lhs / rhs - 1) <= 1e-9);
  }
}

TEST_CASE("rotation invariance of smooth integrals") {
  const auto g = default_rule(3);
  CounterRng rng(21);
  const auto e = make_ellipsoid(v3(1, 2, 3));
  auto f = [&e](const Vec& u) { return std::pow(e->radial(u), 3); };
  const double base = integrate(g, f);
  for (int i = 0; i < 3; ++i) {
    const Mat o = random_orthogonal(3, rng);
    CHECK(integrate(g, [&](const Vec& u) { return f(Vec(o * u)); }) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("uniform rule exactness and refinement") {
  const auto r = build_rule(2, 8, RuleKind::UniformAngle);
  for (int k = 0; k < 8; ++k) {
    const double exact = k == 0 ? 1.0 : 0.0;
    CHECK(integrate(r, [k](const Vec& u) { return std::cos(k * std::atan2(u(1), u(0))); }) ==
          doctest::Approx(exact).epsilon(1e-14));
  }
  // Nonsmooth radial powers converge as the rule is refined.
  const auto box = make_box(Eigen::Vector3d(1, 1, 1));
  const double e16 = std::abs(volume(*box, parse_rule("gauss:16", 3)) - 8);
  const double e32 = std::abs(volume(*box, parse_rule("gauss:32", 3)) - 8);
  const double e64 = std::abs(volume(*box, parse_rule("gauss:64", 3)) - 8);
  CHECK(e32 < e16);
  CHECK(e64 < e32);
}

TEST_CASE("slicing identity") {
  const auto outer = parse_rule("gauss:48", 3);
  const auto circle = build_rule(2, 256, RuleKind::UniformAngle);
  auto [a, b] = slice_integral_check([](const Vec&) { return 1.0; }, outer, circle);
  CHECK(a == doctest::Approx(1.0));
  CHECK(b == doctest::Approx(1.0));
  std::tie(a, b) = slice_integral_check([](const Vec& u) { return u(0) * u(0); }, outer, circle);
  CHECK(a == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(b == doctest::Approx(1.0 / 3).epsilon(1e-12));
  const auto e = make_ellipsoid(v3(1, 1, 2));
  std::tie(a, b) = slice_integral_check([&e](const Vec& u) { return std::pow(e->radial(u), -3); },
                                        outer, circle);
  CHECK(std::abs(a - b) <= 1e-6);
  CHECK_THROWS(slice_integral_check([](const Vec&) { return 1.0; }, default_rule(2), circle));
}

TEST_CASE("results do not depend on the thread count") {
  const auto g = default_rule(3);
  const auto e = make_ellipsoid(v3(1, 2, 3));
  setenv("SINEBODY_THREADS", "1", 1);
  const double one = volume(*e, g);
  setenv("SINEBODY_THREADS", "4", 1);
  const double four = volume(*e, g);
  unsetenv("SINEBODY_THREADS");
  CHECK(one == four);
}
