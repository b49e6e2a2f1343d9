#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sinebody {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when a geometric evaluation has no meaningful value (unbounded
/// bodies, points off a boundary, zero volume, ...).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename DerivedA, typename DerivedB>
void require_same_dim(const Eigen::MatrixBase<DerivedA>& x,
                      const Eigen::MatrixBase<DerivedB>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()));
  }
}

}  // namespace detail

/// [x, y]: area of the parallelogram spanned by x and y.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar sine_bracket(const Eigen::MatrixBase<DerivedA>& x,
                                       const Eigen::MatrixBase<DerivedB>& y) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_same_dim(x, y);
  const Scalar xx = x.squaredNorm();
  const Scalar yy = y.squaredNorm();
  const Scalar xy = x.dot(y);
  const Scalar radicand = xx * yy - xy * xy;
  return radicand > Scalar(0) ? std::sqrt(radicand) : Scalar(0);
}

/// Projection of x onto the hyperplane orthogonal to the unit vector u.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1> proj_perp(
    const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& u) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_same_dim(x, u);
  if (std::abs(u.norm() - Scalar(1)) > Scalar(1e-12)) {
    throw std::invalid_argument("proj_perp: axis is not a unit vector");
  }
  return x - x.dot(u) * u;
}

/// Quarter turn (x1, x2) -> (-x2, x1) in the plane.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 1> rotate_quarter_2d(
    const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != 2) {
    throw std::invalid_argument("rotate_quarter_2d: expected a planar vector");
  }
  return {-x(1), x(0)};
}

/// Volume of the unit ball in dimension s; s may be fractional.
double unit_ball_volume(double s);

/// Normalization of the L_p-sine centroid body.
double c_tilde(int n, double p);

/// Normalization of the classical L_p centroid body.
double c_np(int n, double p);

/// Integral over the probability measure on S^{n-1} of |P_V u|^p for an
/// m-dimensional subspace V.
double sphere_projection_moment(int n, int m, double p);

/// Deterministic counter-based generator (SplitMix64 finalizer). The
/// stream is a pure function of (seed, counter).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t start = 0)
      : seed_(seed), counter_(start) {}

  std::uint64_t next_u64();
  /// Uniform in the open interval (0, 1).
  double uniform();
  double normal();
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

Vec random_unit_vector(int n, CounterRng& rng);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// sign convention diag(R) > 0.
Mat random_orthogonal(int n, CounterRng& rng);

/// Orthonormal basis of the hyperplane u^perp, as the columns of an
/// n x (n-1) matrix.
Mat orthonormal_complement(const Vec& u);

/// Unit vector in direction x; throws on the zero vector.
Vec normalized(const Vec& x);

}  // namespace sinebody
