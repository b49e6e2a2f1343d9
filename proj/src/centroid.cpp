#include "sinebody/centroid.hpp"

#include <sstream>

namespace sinebody {

namespace {

double ipow(double x, long k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

// kernel(c)^p where c = x.u for unit x, u.
struct KernelPower {
  CentroidFlavor flavor;
  double p;
  long ip;
  bool integral;

  // Even integer powers give a polynomial kernel with no kink to remove.
  bool smooth() const { return integral && ip % 2 == 0; }

  KernelPower(CentroidFlavor f, double power)
      : flavor(f), p(power), ip(std::lround(power)), integral(std::abs(power - ip) < 1e-15 && ip <= 256) {}

  double operator()(double c) const {
    if (flavor == CentroidFlavor::Cosine) {
      const double a = std::abs(c);
      return integral ? ipow(a, ip) : std::pow(a, p);
    }
    const double s2 = std::max(0.0, 1.0 - c * c);
    if (integral) return ip % 2 == 0 ? ipow(s2, ip / 2) : ipow(std::sqrt(s2), ip);
    return std::pow(s2, 0.5 * p);
  }
};

std::shared_ptr<const SphericalRule> share(const SphericalRule& rule) {
  return std::make_shared<const SphericalRule>(rule);
}

struct NeumaierSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double term) {
    const double t = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

CentroidBody::CentroidBody(BodyPtr parent, double p, std::shared_ptr<const SphericalRule> rule,
                           CentroidFlavor flavor, CentroidOptions options)
    : Body(parent->dim()),
      parent_(std::move(parent)),
      p_(p),
      rule_(std::move(rule)),
      flavor_(flavor),
      options_(options),
      n_(parent_->dim()) {
  if (!(p_ >= 1.0) || !std::isfinite(p_)) throw std::invalid_argument("centroid body: need p >= 1");
  if (rule_->dim != n_) throw std::invalid_argument("centroid body: rule/body dimension mismatch");
  if (const auto id = parent_->rule_identity(); id && *id != rule_->spec) {
    throw std::invalid_argument("centroid body: parent was built with rule " + *id +
                                ", refusing to mix with " + rule_->spec);
  }
  const Vec rho = parent_->radials(*rule_);
  if (!(rho.minCoeff() > 0.0)) throw GeometryError("centroid body: parent radial vanishes at a node");
  const double np = n_ + p_;
  log_rho_max_ = std::log(rho.maxCoeff());
  scaled_mass_ = (np * (rho.array().log() - log_rho_max_)).exp().matrix();
  parent_volume_ =
      unit_ball_volume(n_) * integrate_values(*rule_, rho.array().pow(n_).matrix());
  if (!(parent_volume_ > 0.0)) throw GeometryError("centroid body: parent volume is zero");
  const double c = flavor_ == CentroidFlavor::Sine ? c_tilde(n_, p_) : c_np(n_, p_);
  log_prefactor_ = std::log(n_ * unit_ball_volume(n_) / (np * c * parent_volume_)) + np * log_rho_max_;
  kernel_moment_ = flavor_ == CentroidFlavor::Sine ? sphere_projection_moment(n_, n_ - 1, p_)
                                                   : sphere_projection_moment(n_, 1, p_);
}

std::string CentroidBody::describe() const {
  std::ostringstream os;
  os << (flavor_ == CentroidFlavor::Sine ? "sine_centroid" : "cosine_centroid") << "(p=" << p_
     << ";" << parent_->describe() << ")";
  return os.str();
}

double CentroidBody::log_support_unit(const Vec& u) const {
  const KernelPower kernel(flavor_, p_);
  // Direction where the kernel vanishes; the integrand has its kink there.
  std::optional<Vec> singular;
  if (options_.subtract_singularity && !kernel.smooth()) {
    if (flavor_ == CentroidFlavor::Sine) {
      singular = u;
    } else if (n_ == 2) {
      singular = Vec(rotate_quarter_2d(u));
    }
  }
  double frozen = 0.0;
  if (singular) {
    const double r = parent_->radial_unit(*singular);
    frozen = std::exp((n_ + p_) * (std::log(r) - log_rho_max_));
  }
  const Vec cosines = rule_->nodes.transpose() * u;
  // Plain and kink-subtracted sums side by side; the subtracted one loses
  // everything to cancellation when the mass is tiny next to the frozen value.
  NeumaierSum plain;
  NeumaierSum subtracted;
  for (Eigen::Index j = 0; j < cosines.size(); ++j) {
    const double wk = rule_->weights(j) * kernel(cosines(j));
    plain.add(wk * scaled_mass_(j));
    subtracted.add(wk * (scaled_mass_(j) - frozen));
  }
  double integral = plain.value();
  if (singular) {
    const double corrected = subtracted.value() + frozen * kernel_moment_;
    if (corrected > 1e-6 * frozen * kernel_moment_) integral = corrected;
  }
  if (!(integral > 0.0)) {
    throw GeometryError("centroid transform is not positive at a direction; body too degenerate "
                        "for the rule " + rule_->spec);
  }
  return (log_prefactor_ + std::log(integral)) / p_;
}

double CentroidBody::support_unit(const Vec& u) const { return std::exp(log_support_unit(u)); }

double CentroidBody::radial_unit(const Vec& u) const {
  // rho_K(u) = 1 / h_{K^o}(u) with rho_{K^o} = 1 / h_K.
  auto objective = [this, &u](const Vec& v) { return std::abs(u.dot(v)) / support_unit(v); };
  const ScanSet& scan = scan_set(dim());
  Vec values(scan.nodes.cols());
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = objective(scan.nodes.col(i));
  return 1.0 / maximize_on_sphere(objective, scan.nodes, values, 1.5 * scan.spacing, search_).value;
}

double lp_sine_transform(const Body& body, double p, const Vec& x, const SphericalRule& rule,
                         CentroidOptions options) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_sine_transform: need p >= 1");
  if (x.size() != body.dim() || rule.dim != body.dim()) {
    throw std::invalid_argument("lp_sine_transform: dimension mismatch");
  }
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  const Vec u = x / r;
  const int n = body.dim();
  const KernelPower kernel(CentroidFlavor::Sine, p);
  const Vec rho = body.radials(rule);
  const double frozen = options.subtract_singularity && !kernel.smooth()
                            ? std::pow(body.radial_unit(u), n + p)
                            : 0.0;
  const Vec cosines = rule.nodes.transpose() * u;
  Vec terms(rule.size());
  for (Eigen::Index j = 0; j < terms.size(); ++j) {
    terms(j) = kernel(cosines(j)) * (std::pow(rho(j), n + p) - frozen);
  }
  const double integral =
      integrate_values(rule, terms) + frozen * sphere_projection_moment(n, n - 1, p);
  return std::pow(r, p) * integral;
}

std::shared_ptr<const CentroidBody> sine_centroid(BodyPtr body, double p, const SphericalRule& rule,
                                                  CentroidOptions options) {
  return std::make_shared<const CentroidBody>(std::move(body), p, share(rule), CentroidFlavor::Sine,
                                              options);
}

BodyPtr sine_centroid_polar(BodyPtr body, double p, const SphericalRule& rule,
                            CentroidOptions options) {
  return sinebody::polar(sine_centroid(std::move(body), p, rule, options));
}

std::shared_ptr<const CentroidBody> cosine_centroid(BodyPtr body, double p,
                                                    const SphericalRule& rule,
                                                    CentroidOptions options) {
  return std::make_shared<const CentroidBody>(std::move(body), p, share(rule),
                                              CentroidFlavor::Cosine, options);
}

BodyPtr cosine_centroid_polar(BodyPtr body, double p, const SphericalRule& rule,
                              CentroidOptions options) {
  return sinebody::polar(cosine_centroid(std::move(body), p, rule, options));
}

double sine_centroid_support(BodyPtr body, double p, const Vec& x, const SphericalRule& rule) {
  return sine_centroid(std::move(body), p, rule)->support(x);
}

double sine_centroid_polar_radial(BodyPtr body, double p, const Vec& u, const SphericalRule& rule) {
  return sine_centroid_polar(std::move(body), p, rule)->radial(u);
}

double cosine_centroid_support(BodyPtr body, double p, const Vec& x, const SphericalRule& rule) {
  return cosine_centroid(std::move(body), p, rule)->support(x);
}

double fubini_symmetry_gap(BodyPtr K, BodyPtr L, double p, const SphericalRule& rule) {
  const double vk = volume(*K, rule);
  const double vl = volume(*L, rule);
  const BodyPtr polar_k = sine_centroid_polar(K, p, rule);
  const BodyPtr polar_l = sine_centroid_polar(L, p, rule);
  const double lhs = dual_mixed_volume(*K, *polar_l, p, rule) / vk;
  const double rhs = dual_mixed_volume(*L, *polar_k, p, rule) / vl;
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

std::pair<double, double> iterated_polar_volume_check(BodyPtr body, double p,
                                                      const SphericalRule& rule) {
  const double v = volume(*body, rule);
  const BodyPtr once = sine_centroid_polar(body, p, rule);
  const BodyPtr twice = sine_centroid_polar(once, p, rule);
  return {volume(*twice, rule), v};
}

}  // namespace sinebody
