#pragma once

#include "sinebody/bodies.hpp"

#include <memory>
#include <vector>

namespace sinebody {

/// Cylindrical support function c_K(x) = max over y in K of [x, y]: the
/// base radius of the thinnest solid cylinder with axis x/|x| containing K.
/// Ball, ellipsoidal bodies and boxes use closed forms; everything else is
/// maximized over the sphere as max_v rho_K(v) [x, v].
double cyl_support(const Body& body, const Vec& x);

/// Same, always through the numerical optimizer (test oracle for the
/// closed forms and vice versa).
double cyl_support_numeric(const Body& body, const Vec& x);

/// Sine polar body K^<>: the points x with [x, y] <= 1 for all y in K.
/// Its radial function is 1 / c_K.
class SinePolarBody final : public Body {
 public:
  explicit SinePolarBody(BodyPtr parent);

  BodyKind kind() const override { return BodyKind::SinePolar; }
  bool is_convex() const override { return true; }
  std::string describe() const override { return "sine_polar(" + parent_->describe() + ")"; }
  std::vector<Vec> hint_directions() const override { return parent_->hint_directions(); }
  std::optional<std::string> rule_identity() const override { return parent_->rule_identity(); }

  const Body& parent() const { return *parent_; }
  double radial_unit(const Vec& u) const override;

 private:
  BodyPtr parent_;
};

std::shared_ptr<const SinePolarBody> sine_polar(BodyPtr body);

/// K^<><>, the intersection of all solid cylinders containing K.
std::shared_ptr<const SinePolarBody> cylindrical_hull(BodyPtr body);

/// omega_n times the integral of c_K^{-n}.
double sine_polar_volume(BodyPtr body, const SphericalRule& rule);

struct GaussImageEntry {
  Vec direction;
  double residual;  ///< c_K(u) - [x, u] >= 0
};

/// Directions u whose supporting cylinder touches K at the boundary point
/// x, i.e. [x, u] = c_K(u) up to `tol`. Candidates are the scan nodes, the
/// body's hint directions and locally refined minimizers of the residual;
/// the returned set is not claimed to be complete. Sorted by residual.
std::vector<GaussImageEntry> cyl_gauss_image(BodyPtr body, const Vec& x, double tol = 1e-6);

/// Supporting cylinder at direction u: axis u, radius c_K(u).
Cylinder supporting_cylinder(const Body& body, const Vec& u);

/// Radial function of the intersection of the given solid cylinders.
double cylinder_envelope_radial(const std::vector<Cylinder>& cylinders, const Vec& u);

}  // namespace sinebody
