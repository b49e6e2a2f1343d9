#include "sinebody/core.hpp"

#include <numbers>

namespace sinebody {

double unit_ball_volume(double s) {
  if (!(s >= 0.0)) {
    throw std::invalid_argument("unit_ball_volume: negative dimension");
  }
  // lgamma keeps large s finite; the direct form is exact for small s.
  if (s > 300.0) {
    return std::exp(0.5 * s * std::log(std::numbers::pi) - std::lgamma(1.0 + 0.5 * s));
  }
  return std::pow(std::numbers::pi, 0.5 * s) / std::tgamma(1.0 + 0.5 * s);
}

namespace {

void check_np(int n, double p) {
  if (n < 2) throw std::invalid_argument("dimension must be at least 2");
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
}

}  // namespace

double c_tilde(int n, double p) {
  check_np(n, p);
  const double nn = n;
  return (nn - 1.0) * unit_ball_volume(nn - 1.0) * unit_ball_volume(nn + p - 2.0) /
         ((nn + p) * unit_ball_volume(nn) * unit_ball_volume(nn + p - 3.0));
}

double c_np(int n, double p) {
  check_np(n, p);
  const double nn = n;
  return unit_ball_volume(nn + p) /
         (unit_ball_volume(2.0) * unit_ball_volume(nn) * unit_ball_volume(p - 1.0));
}

double sphere_projection_moment(int n, int m, double p) {
  if (n < 2 || m < 1 || m > n) {
    throw std::invalid_argument("sphere_projection_moment: need 1 <= m <= n, n >= 2");
  }
  if (!(p >= 0.0)) throw std::invalid_argument("sphere_projection_moment: p < 0");
  if (m == n) return 1.0;
  const double nn = n;
  const double mm = m;
  return mm * unit_ball_volume(mm) * unit_ball_volume(nn + p - 2.0) /
         (nn * unit_ball_volume(nn) * unit_ball_volume(mm + p - 2.0));
}

std::uint64_t CounterRng::next_u64() {
  std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ULL * (++counter_);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double t = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Vec random_unit_vector(int n, CounterRng& rng) {
  Vec v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
  } while (v.norm() < 1e-12);
  return v.normalized();
}

Mat random_orthogonal(int n, CounterRng& rng) {
  Mat g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Mat orthonormal_complement(const Vec& u) {
  const int n = static_cast<int>(u.size());
  const Vec v = normalized(u);
  // Householder reflection mapping v to a coordinate axis; its remaining
  // columns span v^perp.
  int k = 0;
  v.cwiseAbs().maxCoeff(&k);
  Vec w = v;
  w(k) += (v(k) >= 0.0 ? 1.0 : -1.0);
  const Mat h = Mat::Identity(n, n) - 2.0 * w * w.transpose() / w.squaredNorm();
  Mat basis(n, n - 1);
  for (int j = 0, c = 0; j < n; ++j) {
    if (j == k) continue;
    basis.col(c++) = h.col(j);
  }
  return basis;
}

Vec normalized(const Vec& x) {
  const double r = x.norm();
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  return x / r;
}

}  // namespace sinebody
