#pragma once

#include "sinebody/core.hpp"
#include "sinebody/quadrature.hpp"
#include "sinebody/sphere_search.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sinebody {

enum class BodyKind {
  Ball,
  Ellipsoid,
  Box,
  Cylinders,
  RadialTable,
  LinearImage,
  Polar,
  SineCentroid,
  CosineCentroid,
  SinePolar,
};

/// Solid cylinder with axis through the origin.
struct Cylinder {
  Vec axis;  ///< unit
  double radius = 1.0;
};

struct BallSpec {
  int dim = 3;
  double radius = 1.0;
};
struct EllipsoidSpec {
  Vec semiaxes;
};
struct BoxSpec {
  Vec half_widths;
};
struct CylinderSetSpec {
  int dim = 3;
  std::vector<Cylinder> cylinders;
};
struct RadialTableSpec {
  Mat nodes;   ///< unit columns
  Vec values;  ///< radial values at the nodes
};

using BodyDescriptor =
    std::variant<BallSpec, EllipsoidSpec, BoxSpec, CylinderSetSpec, RadialTableSpec>;

/// Invalid descriptor; `field()` names the offending field.
class DescriptorError : public std::invalid_argument {
 public:
  DescriptorError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Throws DescriptorError when an invariant of the descriptor fails.
void validate(const BodyDescriptor& descriptor);

int descriptor_dim(const BodyDescriptor& descriptor);

/// Origin-symmetric star body given by its radial function on S^{n-1}.
/// Immutable after construction; evaluators are safe to call concurrently.
class Body {
 public:
  explicit Body(int dim);
  virtual ~Body() = default;
  Body(const Body&) = delete;
  Body& operator=(const Body&) = delete;

  int dim() const { return dim_; }

  /// rho_K(u) for a unit vector u.
  double radial(const Vec& u) const;
  /// Degree -1 extension rho_K(x) = rho_K(x/|x|) / |x|.
  double radial_at(const Vec& x) const;
  /// rho_K at every node of the rule.
  virtual Vec radials(const SphericalRule& rule) const;

  /// h_K(x), positively homogeneous of degree 1.
  double support(const Vec& x) const;

  /// Membership: |x| <= rho_K(x/|x|).
  bool contains(const Vec& x) const;

  virtual BodyKind kind() const = 0;
  virtual bool is_convex() const = 0;
  /// Smooth boundary; selects the tight tolerance tier.
  virtual bool is_smooth() const { return false; }
  virtual std::string describe() const = 0;

  /// K = B * (unit ball) for ellipsoidal bodies.
  virtual std::optional<Mat> ellipsoid_matrix() const { return std::nullopt; }
  /// c_K(x) when a closed form exists.
  virtual std::optional<double> closed_form_cyl_support(const Vec& x) const;
  /// Directions where extremal values of the radial function are likely
  /// (cylinder axes, for instance); added to every scan.
  virtual std::vector<Vec> hint_directions() const { return {}; }
  /// Rule a derived body was built with, if any.
  virtual std::optional<std::string> rule_identity() const { return std::nullopt; }

  /// rho_K at the columns of scan_set(dim()), computed once.
  const Vec& scan_radials() const;

  /// Settings for the numerical optimizers that act on this body.
  const SearchSettings& search_settings() const { return search_; }

  /// Unchecked radial at a unit vector.
  virtual double radial_unit(const Vec& u) const = 0;

 protected:
  /// h_K at a unit vector; the default maximizes rho_K(v) (u . v) over v.
  virtual double support_unit(const Vec& u) const;

  SearchSettings search_;

 private:
  int dim_;
  mutable std::once_flag scan_once_;
  mutable Vec scan_radials_;
};

using BodyPtr = std::shared_ptr<const Body>;

/// Invertible linear map with cached inverse and determinant.
class LinearMap {
 public:
  explicit LinearMap(Mat matrix);
  static LinearMap scaling(int n, double c) { return LinearMap(c * Mat::Identity(n, n)); }

  const Mat& matrix() const { return matrix_; }
  const Mat& inverse() const { return inverse_; }
  Mat transpose() const { return matrix_.transpose(); }
  double determinant() const { return det_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  Mat matrix_;
  Mat inverse_;
  double det_;
};

BodyPtr make_body(const BodyDescriptor& descriptor);
BodyPtr make_ball(int dim, double radius = 1.0);
BodyPtr make_ellipsoid(const Vec& semiaxes);
BodyPtr make_box(const Vec& half_widths);
BodyPtr make_cylinders(int dim, std::vector<Cylinder> cylinders);
BodyPtr make_radial_table(const Mat& nodes, const Vec& values);

/// Two perpendicular unit cylinders about e1 and e2 in R^3.
BodyPtr make_bicylinder();
/// Three perpendicular unit cylinders about the coordinate axes in R^3.
BodyPtr make_tricylinder();

/// phi K: rho(x) = rho_K(phi^{-1} x), h(x) = h_K(phi^t x).
BodyPtr linear_image(BodyPtr body, const LinearMap& map);
BodyPtr scaled(BodyPtr body, double c);

/// Classical polar K^o with rho_{K^o} = 1 / h_K. Requires a convex body.
BodyPtr polar(BodyPtr body);

/// Maximizer of rho_K(v) * g(v) over the sphere for a nonnegative weight g,
/// using the body's cached scan and hint directions.
SearchResult maximize_radial_weighted(const Body& body, const SphereFunction& weight);

/// Same, with `scan_weight` returning the weight at every column of a node
/// matrix in one pass.
SearchResult maximize_radial_weighted(const Body& body, const SphereFunction& weight,
                                      const std::function<Vec(const Mat&)>& scan_weight);

}  // namespace sinebody
