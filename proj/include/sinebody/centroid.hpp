#pragma once

#include "sinebody/bodies.hpp"

#include <memory>
#include <utility>

namespace sinebody {

enum class CentroidFlavor {
  Sine,    ///< kernel [x, u]^p, normalization c~_{n,p}
  Cosine,  ///< kernel |x . u|^p, normalization c_{n,p}
};

struct CentroidOptions {
  /// Subtract g(s) * kernel(x, u) with g = rho^{n+p} frozen at the kernel's
  /// singular direction s and add back its exact integral. Removes the
  /// leading quadrature error of the kink in the kernel at odd p. Applies to
  /// the sine kernel in every dimension and the cosine kernel for n = 2.
  bool subtract_singularity = true;
};

/// Convex body whose support function is the p-th root of the normalized
/// L_p-sine (or cosine) transform of rho_K^{n+p}, evaluated in polar
/// coordinates with a fixed quadrature rule. The parent's radial values at
/// the rule nodes and its volume are computed once at construction.
class CentroidBody final : public Body {
 public:
  CentroidBody(BodyPtr parent, double p, std::shared_ptr<const SphericalRule> rule,
               CentroidFlavor flavor, CentroidOptions options = {});

  BodyKind kind() const override {
    return flavor_ == CentroidFlavor::Sine ? BodyKind::SineCentroid : BodyKind::CosineCentroid;
  }
  bool is_convex() const override { return true; }
  bool is_smooth() const override { return parent_->is_smooth(); }
  std::string describe() const override;
  std::optional<std::string> rule_identity() const override { return rule_->spec; }

  double p() const { return p_; }
  CentroidFlavor flavor() const { return flavor_; }
  double parent_volume() const { return parent_volume_; }
  const SphericalRule& rule() const { return *rule_; }

  /// log h(u) for a unit vector u.
  double log_support_unit(const Vec& u) const;

  /// Radial function of the body itself, 1 / max_v (u.v) / h(v).
  double radial_unit(const Vec& u) const override;

 protected:
  double support_unit(const Vec& u) const override;

 private:
  BodyPtr parent_;
  double p_;
  std::shared_ptr<const SphericalRule> rule_;
  CentroidFlavor flavor_;
  CentroidOptions options_;
  int n_;
  double parent_volume_;
  double log_rho_max_;
  Vec scaled_mass_;    // (rho_j / rho_max)^{n+p}
  double log_prefactor_;  // log of n omega_n / ((n+p) c V(K)) + (n+p) log rho_max
  double kernel_moment_;  // integral of the kernel at |x| = 1
};

/// Raw transform: integral over the rule of kernel(x, u)^p rho_K(u)^{n+p}.
double lp_sine_transform(const Body& body, double p, const Vec& x, const SphericalRule& rule,
                         CentroidOptions options = {});

/// Lambda_p K and its polar.
std::shared_ptr<const CentroidBody> sine_centroid(BodyPtr body, double p,
                                                  const SphericalRule& rule,
                                                  CentroidOptions options = {});
BodyPtr sine_centroid_polar(BodyPtr body, double p, const SphericalRule& rule,
                            CentroidOptions options = {});

/// Gamma_p K and its polar.
std::shared_ptr<const CentroidBody> cosine_centroid(BodyPtr body, double p,
                                                    const SphericalRule& rule,
                                                    CentroidOptions options = {});
BodyPtr cosine_centroid_polar(BodyPtr body, double p, const SphericalRule& rule,
                              CentroidOptions options = {});

/// One-shot evaluators (build the transform body, then evaluate).
double sine_centroid_support(BodyPtr body, double p, const Vec& x, const SphericalRule& rule);
double sine_centroid_polar_radial(BodyPtr body, double p, const Vec& u, const SphericalRule& rule);
double cosine_centroid_support(BodyPtr body, double p, const Vec& x, const SphericalRule& rule);

/// Relative difference of V~_{-p}(K, Lambda_p^o L)/V(K) and
/// V~_{-p}(L, Lambda_p^o K)/V(L).
double fubini_symmetry_gap(BodyPtr K, BodyPtr L, double p, const SphericalRule& rule);

/// (V(Lambda_p^o Lambda_p^o K), V(K)).
std::pair<double, double> iterated_polar_volume_check(BodyPtr body, double p,
                                                      const SphericalRule& rule);

}  // namespace sinebody
