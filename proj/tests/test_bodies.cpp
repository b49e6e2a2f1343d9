#include "sinebody/bodies.hpp"
#include "sinebody/body_io.hpp"

#include <doctest.h>

#include <cmath>

using namespace sinebody;

namespace {

Vec v2(double a, double b) { return Eigen::Vector2d(a, b); }
Vec v3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

std::vector<Vec> test_directions(int n, int count, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Vec> out;
  for (int i = 0; i < n; ++i) out.push_back(Vec::Unit(n, i));
  for (int i = 0; i < count; ++i) out.push_back(random_unit_vector(n, rng));
  return out;
}

}  // namespace

TEST_CASE("radial examples") {
  const auto ball = make_ball(3, 2.0);
  CounterRng rng(1);
  for (int i = 0; i < 10; ++i) CHECK(ball->radial(random_unit_vector(3, rng)) == doctest::Approx(2.0));
  CHECK(make_ellipsoid(v3(1, 1, 2))->radial(v3(0, 0, 1)) == doctest::Approx(2.0));
  CHECK(make_bicylinder()->radial(v3(0, 0, 1)) == doctest::Approx(1.0));
  CHECK(make_box(v2(1, 2))->radial(normalized(v2(1, 1))) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(ball->radial(v3(1, 1, 0)), std::invalid_argument);
}

TEST_CASE("support examples") {
  CHECK(make_ball(3)->support(v3(0.6, 0.8, 0)) == doctest::Approx(1.0));
  CHECK(make_ellipsoid(v3(1, 1, 2))->support(v3(0, 0, 1)) == doctest::Approx(2.0));
  CHECK(make_box(v2(1, 1))->support(normalized(v2(1, 1))) == doctest::Approx(std::sqrt(2.0)));
  // Homogeneous of degree one.
  CHECK(make_box(v3(1, 2, 3))->support(v3(2, -4, 6)) == doctest::Approx(2 + 8 + 18));
  CHECK(make_ball(2)->support(Vec::Zero(2)) == 0.0);
}

TEST_CASE("cylinder set support is numeric and accurate") {
  // Bicylinder: h(u) = sqrt(u1^2 + u3^2) + ... not closed; compare with a
  // brute-force maximum over boundary points on a fine grid.
  const auto k = make_bicylinder();
  CounterRng rng(17);
  for (int t = 0; t < 5; ++t) {
    const Vec u = random_unit_vector(3, rng);
    double best = 0.0;
    const int m = 400;
    for (int i = 0; i <= m; ++i) {
      const double theta = M_PI * i / m;
      for (int j = 0; j < 2 * m; ++j) {
        const double phi = M_PI * j / m;
        const Vec v = v3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                         std::cos(theta));
        best = std::max(best, k->radial(v) * u.dot(v));
      }
    }
    const double h = k->support(u);
    CHECK(h >= best - 1e-12);
    CHECK(h <= best * (1 + 1e-4));
  }
  // Along an axis of the square cross-section the answer is exact.
  CHECK(k->support(v3(1, 0, 0)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(k->support(v3(0, 0, 1)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(k->support(normalized(v3(1, 1, 0))) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("membership") {
  const auto ball = make_ball(3);
  CHECK(ball->contains(v3(0.5, 0, 0)));
  CHECK_FALSE(ball->contains(v3(1.5, 0, 0)));
  CHECK(ball->contains(Vec::Zero(3)));
  const auto bi = make_bicylinder();
  CHECK_FALSE(bi->contains(v3(5, 0, 0)));
  CHECK(bi->contains(v3(0, 0, 0.99)));
  CHECK(bi->contains(v3(0.7, 0.7, 0.7)));
  CHECK_FALSE(bi->contains(v3(0.8, 0.8, 0.7)));
}

TEST_CASE("cylinder set validation") {
  CHECK_THROWS_AS(make_cylinders(3, {{v3(1, 0, 0), 1.0}, {v3(-1, 0, 0), 2.0}}), DescriptorError);
  CHECK_THROWS_AS(make_cylinders(3, {{v3(1, 0, 0), 0.0}, {v3(0, 1, 0), 1.0}}), DescriptorError);
  CHECK_THROWS_AS(make_cylinders(3, {}), DescriptorError);
  // In three dimensions two cylinders already bound the body; the radial
  // function is degree -1 homogeneous.
  const auto k = make_cylinders(3, {{normalized(v3(1, 1, 0)), 2.0}, {v3(0, 0, 1), 1.0}});
  const Vec x = v3(0.3, -0.2, 0.5);
  CHECK(k->radial_at(2.5 * x) == doctest::Approx(k->radial_at(x) / 2.5));
  try {
    make_cylinders(3, {{v3(1, 0, 0), 1.0}, {v3(0, 1, 0), -1.0}});
    FAIL("expected a descriptor error");
  } catch (const DescriptorError& e) {
    CHECK(e.field() == "cylinders[1].radius");
  }
}

TEST_CASE("cylinder set unbounded direction in higher dimension") {
  // Two cylinders in R^4 leave a common axis direction free.
  const Vec a = Vec::Unit(4, 0);
  const Vec b = Vec::Unit(4, 1);
  const auto k = make_cylinders(4, {{a, 1.0}, {b, 1.0}});
  Vec free_dir = Vec::Zero(4);
  free_dir(2) = 1.0;
  // [e3, e1] = 1 so this direction is bounded.
  CHECK(k->radial(free_dir) == doctest::Approx(1.0));
}

TEST_CASE("polar bodies") {
  const auto ball = make_ball(3, 2.0);
  const auto pb = polar(ball);
  CHECK(pb->radial(v3(0, 1, 0)) == doctest::Approx(0.5));
  const auto e = make_ellipsoid(v3(1, 2, 3));
  const auto pe = polar(e);
  const auto expected = make_ellipsoid(v3(1, 0.5, 1.0 / 3));
  for (const Vec& u : test_directions(3, 20, 3)) {
    CHECK(pe->radial(u) == doctest::Approx(expected->radial(u)).epsilon(1e-12));
    CHECK(pe->radial(u) * e->support(u) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(polar(pe)->radial(u) == doctest::Approx(e->radial(u)).epsilon(1e-10));
  }
  const auto cross = polar(make_box(v2(1, 1)));
  CHECK(cross->radial(normalized(v2(1, 1))) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(cross->radial(v2(1, 0)) == doctest::Approx(1.0));
  CHECK(polar(e)->ellipsoid_matrix().has_value());
  const Mat table_nodes = (Mat(2, 4) << 1, 0, -1, 0, 0, 1, 0, -1).finished();
  CHECK_THROWS_AS(polar(make_radial_table(table_nodes, Vec::Ones(4))), std::invalid_argument);
}

TEST_CASE("polar scaling and linear images") {
  const auto e = make_ellipsoid(v3(1, 2, 3));
  const double c = 2.5;
  CounterRng rng(8);
  Mat m = Mat::Identity(3, 3);
  m(0, 1) = 0.7;
  m(2, 0) = -0.4;
  const LinearMap phi(m);
  const auto image = linear_image(e, phi);
  const auto polar_image = polar(image);
  const auto inverse_transpose_of_polar = linear_image(polar(e), LinearMap(phi.inverse().transpose()));
  for (const Vec& u : test_directions(3, 20, 4)) {
    CHECK(polar(scaled(e, c))->radial(u) == doctest::Approx(polar(e)->radial(u) / c).epsilon(1e-12));
    CHECK(polar_image->radial(u) ==
          doctest::Approx(inverse_transpose_of_polar->radial(u)).epsilon(1e-10));
    CHECK(image->radial(u) == doctest::Approx(1.0 / (phi.inverse() * u).norm() *
                                              e->radial(normalized(phi.inverse() * u)))
                                  .epsilon(1e-12));
    CHECK(image->support(u) == doctest::Approx(e->support(phi.transpose() * u)).epsilon(1e-12));
  }
  CHECK(linear_image(make_ball(3), LinearMap::scaling(3, 2))->radial(v3(0, 0, 1)) ==
        doctest::Approx(2.0));
  const auto stretched = linear_image(make_ball(2), LinearMap(v2(1, 2).asDiagonal()));
  CHECK(stretched->radial(v2(0, 1)) == doctest::Approx(2.0));
  const double a = 0.3;
  const Mat rot = (Mat(2, 2) << std::cos(a), -std::sin(a), std::sin(a), std::cos(a)).finished();
  const auto rotated = linear_image(make_ellipsoid(v2(1, 1)), LinearMap(rot));
  CHECK(rotated->radial(normalized(v2(0.2, 0.9))) == doctest::Approx(1.0));
  CHECK_THROWS_AS(LinearMap(Mat::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("radial tables") {
  const int m = 64;
  Mat nodes(2, m);
  Vec values(m);
  const auto e = make_ellipsoid(v2(1, 2));
  for (int j = 0; j < m; ++j) {
    const double t = 2 * M_PI * j / m;
    nodes.col(j) = v2(std::cos(t), std::sin(t));
    values(j) = e->radial(nodes.col(j));
  }
  const auto table = make_radial_table(nodes, values);
  CHECK_FALSE(table->is_convex());
  CHECK(table->radial(nodes.col(5)) == doctest::Approx(values(5)));
  const Vec mid = normalized(nodes.col(5) + nodes.col(6));
  CHECK(table->radial(mid) == doctest::Approx(0.5 * (values(5) + values(6))).epsilon(1e-12));
  CHECK(std::abs(table->radial(mid) - e->radial(mid)) < 1e-2);
  CHECK_THROWS_AS(make_radial_table(nodes, Vec::Zero(m)), DescriptorError);
}

TEST_CASE("descriptor json round trip and diagnostics") {
  const auto d = parse_body_json(R"({"dim": 3, "kind": "cylinders",
      "cylinders": [{"axis": [2, 0, 0], "radius": 1}, {"axis": [0, 1, 0], "radius": 1}]})");
  const auto k = make_body(d);
  CHECK(k->radial(v3(0, 0, 1)) == doctest::Approx(1.0));
  const auto again = make_body(parse_body_json(body_to_json(d)));
  CHECK(again->describe() == k->describe());

  CHECK(make_body(parse_body_json(R"({"kind": "ellipsoid", "semiaxes": [1, 1, 2]})"))->dim() == 3);
  CHECK(make_body(parse_body_json(R"({"dim": 2, "kind": "ball", "radius": 3})"))->radial(v2(1, 0)) ==
        doctest::Approx(3.0));

  auto field_of = [](const std::string& text) {
    try {
      parse_body_json(text);
    } catch (const DescriptorError& e) {
      return e.field();
    }
    return std::string("no error");
  };
  CHECK(field_of(R"({"dim": 3, "kind": "cylinders",
      "cylinders": [{"axis": [1, 0, 0], "radius": 1}, {"axis": [0, 0], "radius": 1}]})") ==
        "cylinders[1].axis");
  CHECK(field_of(R"({"kind": "box", "half_widths": [1, -1]})").find("half_widths") == 0);
  CHECK(field_of(R"({"kind": "torus"})") == "kind");
  CHECK(field_of("{\n\"kind\": \"ball\",\n oops }").rfind("line", 0) == 0);
}
