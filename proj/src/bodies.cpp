#include "sinebody/bodies.hpp"

#include "sinebody/parallel.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace sinebody {

namespace {

constexpr double kUnitTolerance = 1e-10;
constexpr double kBracketFloor = 1e-12;

std::string join(const Vec& v) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v(i);
  return os.str();
}

void require_positive(const Vec& v, const std::string& field) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i)) || !(v(i) > 0.0)) {
      throw DescriptorError(field + "[" + std::to_string(i) + "]",
                            "must be finite and strictly positive");
    }
  }
}

// Largest singular value of P_{x^perp} B, times |x|.
double ellipsoid_cyl_support(const Mat& b, const Vec& x) {
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  const Vec u = x / r;
  const Mat pb = b - u * (u.transpose() * b);
  const Mat gram = pb * pb.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram, Eigen::EigenvaluesOnly);
  return r * std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

class BallBody final : public Body {
 public:
  BallBody(int dim, double radius) : Body(dim), radius_(radius) {}
  BodyKind kind() const override { return BodyKind::Ball; }
  bool is_convex() const override { return true; }
  bool is_smooth() const override { return true; }
  std::string describe() const override {
    std::ostringstream os;
    os << "ball(r=" << radius_ << ";n=" << dim() << ")";
    return os.str();
  }
  std::optional<Mat> ellipsoid_matrix() const override {
    return Mat(radius_ * Mat::Identity(dim(), dim()));
  }
  std::optional<double> closed_form_cyl_support(const Vec& x) const override {
    return radius_ * x.norm();
  }
  double radial_unit(const Vec&) const override { return radius_; }

 protected:
  double support_unit(const Vec&) const override { return radius_; }

 private:
  double radius_;
};

class EllipsoidBody final : public Body {
 public:
  explicit EllipsoidBody(Vec semiaxes)
      : Body(static_cast<int>(semiaxes.size())), axes_(std::move(semiaxes)) {}
  BodyKind kind() const override { return BodyKind::Ellipsoid; }
  bool is_convex() const override { return true; }
  bool is_smooth() const override { return true; }
  std::string describe() const override { return "ellipsoid(" + join(axes_) + ")"; }
  std::optional<Mat> ellipsoid_matrix() const override { return Mat(axes_.asDiagonal()); }
  std::optional<double> closed_form_cyl_support(const Vec& x) const override {
    return ellipsoid_cyl_support(axes_.asDiagonal(), x);
  }
  double radial_unit(const Vec& u) const override {
    return 1.0 / u.cwiseQuotient(axes_).norm();
  }

 protected:
  double support_unit(const Vec& u) const override { return u.cwiseProduct(axes_).norm(); }

 private:
  Vec axes_;
};

class BoxBody final : public Body {
 public:
  explicit BoxBody(Vec half_widths)
      : Body(static_cast<int>(half_widths.size())), w_(std::move(half_widths)) {
    // Vertices up to the antipodal map: first sign fixed to +.
    const int n = dim();
    const int count = 1 << (n - 1);
    vertices_.resize(n, count);
    for (int mask = 0; mask < count; ++mask) {
      vertices_(0, mask) = w_(0);
      for (int i = 1; i < n; ++i) vertices_(i, mask) = (mask >> (i - 1)) & 1 ? -w_(i) : w_(i);
    }
  }
  BodyKind kind() const override { return BodyKind::Box; }
  bool is_convex() const override { return true; }
  std::string describe() const override { return "box(" + join(w_) + ")"; }
  // c_K is convex, so its maximum over the box sits at a vertex.
  std::optional<double> closed_form_cyl_support(const Vec& x) const override {
    double best = 0.0;
    for (Eigen::Index j = 0; j < vertices_.cols(); ++j) {
      best = std::max(best, sine_bracket(x, vertices_.col(j)));
    }
    return best;
  }
  std::vector<Vec> hint_directions() const override {
    std::vector<Vec> hints;
    for (Eigen::Index j = 0; j < vertices_.cols(); ++j) hints.push_back(vertices_.col(j).normalized());
    for (int i = 0; i < dim(); ++i) hints.push_back(Vec::Unit(dim(), i));
    return hints;
  }
  double radial_unit(const Vec& u) const override {
    double r = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (std::abs(u(i)) > 0.0) r = std::min(r, w_(i) / std::abs(u(i)));
    }
    return r;
  }

 protected:
  double support_unit(const Vec& u) const override { return u.cwiseAbs().dot(w_); }

 private:
  Vec w_;
  Mat vertices_;
};

class CylinderSetBody final : public Body {
 public:
  CylinderSetBody(int dim, std::vector<Cylinder> cylinders)
      : Body(dim), cylinders_(std::move(cylinders)) {}
  BodyKind kind() const override { return BodyKind::Cylinders; }
  bool is_convex() const override { return true; }
  std::string describe() const override {
    std::ostringstream os;
    os << "cylinders(" << cylinders_.size() << ";n=" << dim() << ")";
    return os.str();
  }
  std::vector<Vec> hint_directions() const override {
    std::vector<Vec> hints;
    for (const auto& c : cylinders_) hints.push_back(c.axis);
    return hints;
  }
  double radial_unit(const Vec& u) const override {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& c : cylinders_) {
      const double b = sine_bracket(u, c.axis);
      if (b > kBracketFloor) r = std::min(r, c.radius / b);
    }
    if (!std::isfinite(r)) {
      throw GeometryError("cylinder set is unbounded along the evaluated direction");
    }
    return r;
  }
  const std::vector<Cylinder>& cylinders() const { return cylinders_; }

 private:
  std::vector<Cylinder> cylinders_;
};

class RadialTableBody final : public Body {
 public:
  RadialTableBody(Mat nodes, Vec values)
      : Body(static_cast<int>(nodes.rows())), nodes_(std::move(nodes)), values_(std::move(values)) {
    if (dim() == 2) {
      // Sort by angle for periodic interpolation.
      std::vector<std::pair<double, double>> pts;
      for (Eigen::Index j = 0; j < nodes_.cols(); ++j) {
        double a = std::atan2(nodes_(1, j), nodes_(0, j));
        if (a < 0.0) a += 2.0 * std::numbers::pi;
        pts.emplace_back(a, values_(j));
      }
      std::sort(pts.begin(), pts.end());
      for (const auto& [a, v] : pts) {
        angles_.push_back(a);
        sorted_values_.push_back(v);
      }
    }
  }
  BodyKind kind() const override { return BodyKind::RadialTable; }
  bool is_convex() const override { return false; }
  std::string describe() const override {
    return "radial_table(" + std::to_string(nodes_.cols()) + ";n=" + std::to_string(dim()) + ")";
  }
  double radial_unit(const Vec& u) const override {
    if (dim() == 2) {
      double a = std::atan2(u(1), u(0));
      if (a < 0.0) a += 2.0 * std::numbers::pi;
      const auto m = angles_.size();
      auto hi = static_cast<std::size_t>(std::upper_bound(angles_.begin(), angles_.end(), a) -
                                         angles_.begin());
      const std::size_t lo_i = (hi + m - 1) % m;
      const std::size_t hi_i = hi % m;
      double a0 = angles_[lo_i];
      double a1 = angles_[hi_i];
      if (hi == 0) a0 -= 2.0 * std::numbers::pi;
      if (hi == m) a1 += 2.0 * std::numbers::pi;
      const double t = a1 > a0 ? (a - a0) / (a1 - a0) : 0.0;
      return (1.0 - t) * sorted_values_[lo_i] + t * sorted_values_[hi_i];
    }
    Eigen::Index best = 0;
    (nodes_.transpose() * u).maxCoeff(&best);
    return values_(best);
  }

 private:
  Mat nodes_;
  Vec values_;
  std::vector<double> angles_;
  std::vector<double> sorted_values_;
};

class LinearImageBody final : public Body {
 public:
  LinearImageBody(BodyPtr parent, LinearMap map)
      : Body(parent->dim()), parent_(std::move(parent)), map_(std::move(map)) {}
  BodyKind kind() const override { return BodyKind::LinearImage; }
  bool is_convex() const override { return parent_->is_convex(); }
  bool is_smooth() const override { return parent_->is_smooth(); }
  std::string describe() const override { return "linear(" + parent_->describe() + ")"; }
  std::optional<Mat> ellipsoid_matrix() const override {
    if (auto b = parent_->ellipsoid_matrix()) return Mat(map_.matrix() * *b);
    return std::nullopt;
  }
  std::optional<double> closed_form_cyl_support(const Vec& x) const override {
    if (auto b = ellipsoid_matrix()) return ellipsoid_cyl_support(*b, x);
    return std::nullopt;
  }
  std::vector<Vec> hint_directions() const override {
    std::vector<Vec> hints;
    for (const Vec& h : parent_->hint_directions()) hints.push_back((map_.matrix() * h).normalized());
    return hints;
  }
  std::optional<std::string> rule_identity() const override { return parent_->rule_identity(); }
  double radial_unit(const Vec& u) const override { return parent_->radial_at(map_.inverse() * u); }

 protected:
  double support_unit(const Vec& u) const override {
    return parent_->support(map_.matrix().transpose() * u);
  }

 private:
  BodyPtr parent_;
  LinearMap map_;
};

class PolarBody final : public Body {
 public:
  explicit PolarBody(BodyPtr parent) : Body(parent->dim()), parent_(std::move(parent)) {}
  BodyKind kind() const override { return BodyKind::Polar; }
  bool is_convex() const override { return true; }
  bool is_smooth() const override { return parent_->is_smooth(); }
  std::string describe() const override { return "polar(" + parent_->describe() + ")"; }
  std::optional<Mat> ellipsoid_matrix() const override {
    if (auto b = parent_->ellipsoid_matrix()) return Mat(b->inverse().transpose());
    return std::nullopt;
  }
  std::optional<double> closed_form_cyl_support(const Vec& x) const override {
    if (auto b = ellipsoid_matrix()) return ellipsoid_cyl_support(*b, x);
    return std::nullopt;
  }
  std::optional<std::string> rule_identity() const override { return parent_->rule_identity(); }
  double radial_unit(const Vec& u) const override { return 1.0 / parent_->support(u); }

 protected:
  // Bipolar theorem: h_{K^o} = 1 / rho_K for convex K.
  double support_unit(const Vec& u) const override { return 1.0 / parent_->radial_unit(u); }

 private:
  BodyPtr parent_;
};

}  // namespace

// ---------------------------------------------------------------------------

Body::Body(int dim) : dim_(dim) {
  if (dim < 2) throw std::invalid_argument("body dimension must be at least 2");
}

double Body::radial(const Vec& u) const {
  if (u.size() != dim_) throw std::invalid_argument("radial: dimension mismatch");
  if (std::abs(u.norm() - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("radial: direction is not a unit vector");
  }
  return radial_unit(u);
}

double Body::radial_at(const Vec& x) const {
  const double r = x.norm();
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  return radial_unit(x / r) / r;
}

Vec Body::radials(const SphericalRule& rule) const {
  if (rule.dim != dim_) throw std::invalid_argument("radials: body/rule dimension mismatch");
  return evaluate_at_nodes(rule, [this](const Vec& u) { return radial_unit(u); });
}

double Body::support(const Vec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("support: dimension mismatch");
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  return r * support_unit(x / r);
}

bool Body::contains(const Vec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("contains: dimension mismatch");
  const double r = x.norm();
  if (r == 0.0) return true;
  return r <= radial_unit(x / r);
}

std::optional<double> Body::closed_form_cyl_support(const Vec&) const { return std::nullopt; }

const Vec& Body::scan_radials() const {
  std::call_once(scan_once_, [this] {
    const Mat& nodes = scan_set(dim_).nodes;
    Vec values(nodes.cols());
    parallel_for(static_cast<std::size_t>(nodes.cols()), [&](std::size_t i) {
      const auto k = static_cast<Eigen::Index>(i);
      values(k) = radial_unit(nodes.col(k));
    });
    scan_radials_ = std::move(values);
  });
  return scan_radials_;
}

double Body::support_unit(const Vec& u) const {
  return maximize_radial_weighted(
             *this, [&u](const Vec& v) { return std::abs(u.dot(v)); },
             [&u](const Mat& nodes) { return Vec((nodes.transpose() * u).cwiseAbs()); })
      .value;
}

SearchResult maximize_radial_weighted(const Body& body, const SphereFunction& weight) {
  return maximize_radial_weighted(body, weight, [&weight](const Mat& nodes) {
    Vec w(nodes.cols());
    for (Eigen::Index i = 0; i < nodes.cols(); ++i) w(i) = weight(nodes.col(i));
    return w;
  });
}

SearchResult maximize_radial_weighted(const Body& body, const SphereFunction& weight,
                                      const std::function<Vec(const Mat&)>& scan_weight) {
  const ScanSet& scan = scan_set(body.dim());
  const Vec& radii = body.scan_radials();
  const std::vector<Vec> hints = body.hint_directions();
  const Eigen::Index m = scan.nodes.cols();
  Mat candidates(body.dim(), m + static_cast<Eigen::Index>(hints.size()));
  Vec values(candidates.cols());
  candidates.leftCols(m) = scan.nodes;
  values.head(m) = radii.cwiseProduct(scan_weight(scan.nodes));
  for (std::size_t h = 0; h < hints.size(); ++h) {
    const auto k = m + static_cast<Eigen::Index>(h);
    candidates.col(k) = hints[h];
    values(k) = body.radial_unit(hints[h]) * weight(hints[h]);
  }
  auto objective = [&](const Vec& v) { return body.radial_unit(v) * weight(v); };
  SearchSettings settings = body.search_settings();
  settings.ridge_polish = settings.ridge_polish || !body.is_smooth();
  return maximize_on_sphere(objective, candidates, values, 1.5 * scan.spacing, settings);
}

// ---------------------------------------------------------------------------

LinearMap::LinearMap(Mat matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("linear map must be square");
  Eigen::FullPivLU<Mat> lu(matrix_);
  det_ = lu.determinant();
  if (!(std::abs(det_) > 1e-12)) throw std::invalid_argument("linear map is singular");
  inverse_ = lu.inverse();
}

int descriptor_dim(const BodyDescriptor& descriptor) {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BallSpec> || std::is_same_v<T, CylinderSetSpec>) {
          return d.dim;
        } else if constexpr (std::is_same_v<T, EllipsoidSpec>) {
          return static_cast<int>(d.semiaxes.size());
        } else if constexpr (std::is_same_v<T, BoxSpec>) {
          return static_cast<int>(d.half_widths.size());
        } else {
          return static_cast<int>(d.nodes.rows());
        }
      },
      descriptor);
}

void validate(const BodyDescriptor& descriptor) {
  if (descriptor_dim(descriptor) < 2) throw DescriptorError("dim", "must be at least 2");
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BallSpec>) {
          if (!std::isfinite(d.radius) || !(d.radius > 0.0)) {
            throw DescriptorError("radius", "must be finite and strictly positive");
          }
        } else if constexpr (std::is_same_v<T, EllipsoidSpec>) {
          require_positive(d.semiaxes, "semiaxes");
        } else if constexpr (std::is_same_v<T, BoxSpec>) {
          require_positive(d.half_widths, "half_widths");
        } else if constexpr (std::is_same_v<T, CylinderSetSpec>) {
          if (d.cylinders.empty()) throw DescriptorError("cylinders", "empty cylinder list");
          for (std::size_t i = 0; i < d.cylinders.size(); ++i) {
            const std::string field = "cylinders[" + std::to_string(i) + "]";
            const Cylinder& c = d.cylinders[i];
            if (c.axis.size() != d.dim) throw DescriptorError(field + ".axis", "wrong length");
            if (!c.axis.allFinite()) throw DescriptorError(field + ".axis", "non-finite entry");
            if (std::abs(c.axis.norm() - 1.0) > 1e-12) {
              throw DescriptorError(field + ".axis", "not a unit vector");
            }
            if (!std::isfinite(c.radius) || !(c.radius > 0.0)) {
              throw DescriptorError(field + ".radius", "must be finite and strictly positive");
            }
          }
          // Bounded iff the axes do not all lie on one line.
          bool spread = false;
          for (const Cylinder& c : d.cylinders) {
            if (sine_bracket(c.axis, d.cylinders.front().axis) > 1e-9) spread = true;
          }
          if (!spread) {
            throw DescriptorError("cylinders", "all axes are parallel; the intersection is unbounded");
          }
        } else {
          if (d.nodes.cols() != d.values.size()) {
            throw DescriptorError("values", "count does not match the node count");
          }
          if (d.nodes.cols() < 3) throw DescriptorError("nodes", "need at least 3 nodes");
          for (Eigen::Index j = 0; j < d.nodes.cols(); ++j) {
            if (!d.nodes.col(j).allFinite() || std::abs(d.nodes.col(j).norm() - 1.0) > 1e-9) {
              throw DescriptorError("nodes[" + std::to_string(j) + "]", "not a unit vector");
            }
          }
          require_positive(d.values, "values");
          if (d.values.maxCoeff() / d.values.minCoeff() > 1e12) {
            throw DescriptorError("values", "radial values are not bounded away from 0 and infinity");
          }
        }
      },
      descriptor);
}

BodyPtr make_body(const BodyDescriptor& descriptor) {
  validate(descriptor);
  return std::visit(
      [](const auto& d) -> BodyPtr {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BallSpec>) {
          return std::make_shared<BallBody>(d.dim, d.radius);
        } else if constexpr (std::is_same_v<T, EllipsoidSpec>) {
          return std::make_shared<EllipsoidBody>(d.semiaxes);
        } else if constexpr (std::is_same_v<T, BoxSpec>) {
          return std::make_shared<BoxBody>(d.half_widths);
        } else if constexpr (std::is_same_v<T, CylinderSetSpec>) {
          return std::make_shared<CylinderSetBody>(d.dim, d.cylinders);
        } else {
          return std::make_shared<RadialTableBody>(d.nodes, d.values);
        }
      },
      descriptor);
}

BodyPtr make_ball(int dim, double radius) { return make_body(BallSpec{dim, radius}); }
BodyPtr make_ellipsoid(const Vec& semiaxes) { return make_body(EllipsoidSpec{semiaxes}); }
BodyPtr make_box(const Vec& half_widths) { return make_body(BoxSpec{half_widths}); }
BodyPtr make_cylinders(int dim, std::vector<Cylinder> cylinders) {
  for (auto& c : cylinders) {
    if (c.axis.size() > 0 && c.axis.norm() > 0.0) c.axis.normalize();
  }
  return make_body(CylinderSetSpec{dim, std::move(cylinders)});
}
BodyPtr make_radial_table(const Mat& nodes, const Vec& values) {
  return make_body(RadialTableSpec{nodes, values});
}

BodyPtr make_bicylinder() {
  return make_cylinders(3, {{Vec::Unit(3, 0), 1.0}, {Vec::Unit(3, 1), 1.0}});
}

BodyPtr make_tricylinder() {
  return make_cylinders(3, {{Vec::Unit(3, 0), 1.0}, {Vec::Unit(3, 1), 1.0}, {Vec::Unit(3, 2), 1.0}});
}

BodyPtr linear_image(BodyPtr body, const LinearMap& map) {
  if (map.dim() != body->dim()) throw std::invalid_argument("linear_image: dimension mismatch");
  return std::make_shared<LinearImageBody>(std::move(body), map);
}

BodyPtr scaled(BodyPtr body, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
  const int n = body->dim();
  return linear_image(std::move(body), LinearMap::scaling(n, c));
}

BodyPtr polar(BodyPtr body) {
  if (!body->is_convex()) {
    throw std::invalid_argument("polar: " + body->describe() + " is not a convex body");
  }
  return std::make_shared<PolarBody>(std::move(body));
}

}  // namespace sinebody
