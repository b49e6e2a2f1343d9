#include "sinebody/sine_polarity.hpp"

#include <algorithm>

namespace sinebody {

namespace {

double bracket_unit(const Vec& u, const Vec& v) {
  const double c = u.dot(v);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

}  // namespace

double cyl_support_numeric(const Body& body, const Vec& x) {
  if (x.size() != body.dim()) throw std::invalid_argument("cyl_support: dimension mismatch");
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  const Vec u = x / r;
  const double c =
      maximize_radial_weighted(
          body, [&u](const Vec& v) { return bracket_unit(u, v); },
          [&u](const Mat& nodes) {
            return Vec((1.0 - (nodes.transpose() * u).array().square()).max(0.0).sqrt());
          })
          .value;
  if (!(c > 0.0)) throw GeometryError("cyl_support: body is concentrated on a line");
  return r * c;
}

double cyl_support(const Body& body, const Vec& x) {
  if (x.size() != body.dim()) throw std::invalid_argument("cyl_support: dimension mismatch");
  if (auto closed = body.closed_form_cyl_support(x)) return *closed;
  return cyl_support_numeric(body, x);
}

SinePolarBody::SinePolarBody(BodyPtr parent) : Body(parent->dim()), parent_(std::move(parent)) {}

double SinePolarBody::radial_unit(const Vec& u) const { return 1.0 / cyl_support(*parent_, u); }

std::shared_ptr<const SinePolarBody> sine_polar(BodyPtr body) {
  return std::make_shared<const SinePolarBody>(std::move(body));
}

std::shared_ptr<const SinePolarBody> cylindrical_hull(BodyPtr body) {
  return sine_polar(sine_polar(std::move(body)));
}

double sine_polar_volume(BodyPtr body, const SphericalRule& rule) {
  return volume(*sine_polar(std::move(body)), rule);
}

std::vector<GaussImageEntry> cyl_gauss_image(BodyPtr body, const Vec& x, double tol) {
  if (x.size() != body->dim()) throw std::invalid_argument("cyl_gauss_image: dimension mismatch");
  const double r = x.norm();
  if (r == 0.0) throw GeometryError("cyl_gauss_image: the origin is not a boundary point");
  const Vec xhat = x / r;
  const double rho = body->radial_unit(xhat);
  if (std::abs(r - rho) > 1e-8 * std::max(1.0, rho)) {
    throw GeometryError("cyl_gauss_image: point is not on the boundary (|x| = " +
                        std::to_string(r) + ", radial = " + std::to_string(rho) + ")");
  }
  // 1 / rho of the sine polar body is c_K; its scan cache holds c_K at the
  // scan nodes.
  const auto diamond = sine_polar(body);
  const ScanSet& scan = scan_set(body->dim());
  const Vec& inverse_c = diamond->scan_radials();
  auto residual = [&](const Vec& u) { return cyl_support(*body, u) - sine_bracket(x, u); };

  std::vector<GaussImageEntry> candidates;
  for (Eigen::Index i = 0; i < scan.nodes.cols(); ++i) {
    const Vec u = scan.nodes.col(i);
    candidates.push_back({u, 1.0 / inverse_c(i) - sine_bracket(x, u)});
  }
  for (const Vec& h : body->hint_directions()) candidates.push_back({h, residual(h)});

  // Refine the best few candidates towards zero residual.
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].residual < candidates[b].residual;
  });
  const SearchSettings& settings = body->search_settings();
  const std::size_t refine = std::min<std::size_t>(order.size(), settings.top_k);
  for (std::size_t k = 0; k < refine; ++k) {
    const GaussImageEntry& start = candidates[order[k]];
    const SearchResult best = refine_on_sphere([&](const Vec& u) { return -residual(u); },
                                               start.direction, -start.residual,
                                               1.5 * scan.spacing, settings);
    candidates.push_back({best.argmax, -best.value});
  }

  std::vector<GaussImageEntry> image;
  for (auto& c : candidates) {
    c.residual = std::max(0.0, c.residual);
    if (c.residual <= tol) image.push_back(std::move(c));
  }
  std::stable_sort(image.begin(), image.end(),
                   [](const auto& a, const auto& b) { return a.residual < b.residual; });
  return image;
}

Cylinder supporting_cylinder(const Body& body, const Vec& u) {
  if (std::abs(u.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("supporting_cylinder: axis is not a unit vector");
  }
  return {u, cyl_support(body, u)};
}

double cylinder_envelope_radial(const std::vector<Cylinder>& cylinders, const Vec& u) {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& c : cylinders) {
    const double b = sine_bracket(u, c.axis);
    if (b > 1e-12) r = std::min(r, c.radius / b);
  }
  return r;
}

}  // namespace sinebody
