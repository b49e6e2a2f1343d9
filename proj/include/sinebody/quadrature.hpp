#pragma once

#include "sinebody/core.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

namespace sinebody {

class Body;

enum class RuleKind { UniformAngle, GaussProduct, MonteCarlo };

/// Quadrature on S^{n-1} for the rotation-invariant probability measure.
/// Node set is antipodally symmetric and weights sum to one.
struct SphericalRule {
  int dim = 0;
  Mat nodes;    ///< dim x size, unit columns
  Vec weights;  ///< size, positive
  RuleKind kind = RuleKind::UniformAngle;
  std::uint64_t seed = 0;  ///< Monte Carlo only
  std::string spec;        ///< canonical spec string, doubles as identity

  Eigen::Index size() const { return nodes.cols(); }
  Vec node(Eigen::Index i) const { return nodes.col(i); }
};

/// n=2 uniform angles; n=3 Gauss-Legendre in cos(theta) x uniform phi with
/// 2*resolution azimuths; n>=4 seeded Gaussian directions plus antipodes.
SphericalRule build_rule(int n, int resolution, RuleKind kind, std::uint64_t seed = 42);

/// Gauss product rule with explicit polar and azimuthal counts (n = 3).
SphericalRule build_gauss_rule(int polar, int azimuthal);

/// Parses "uniform:N", "gauss:N", "gauss:NxM" or "mc:N:seed".
SphericalRule parse_rule(const std::string& spec, int dim);

/// uniform:512 (n=2), gauss:64 (n=3), mc:200000:42 (n>=4).
std::string default_rule_spec(int dim);
SphericalRule default_rule(int dim);

/// Neumaier-compensated sum in index order.
double compensated_sum(const Vec& terms);

/// f evaluated at every node (possibly in parallel); throws GeometryError
/// naming the node if a value is not finite.
Vec evaluate_at_nodes(const SphericalRule& rule, const std::function<double(const Vec&)>& f);

double integrate(const SphericalRule& rule, const std::function<double(const Vec&)>& f);
double integrate_values(const SphericalRule& rule, const Vec& values);

/// omega_n * integral of rho_K^n.
double volume(const Body& body, const SphericalRule& rule);

/// omega_n * integral of rho_L^{n+p} rho_M^{-p}.
double dual_mixed_volume(const Body& L, const Body& M, double p, const SphericalRule& rule);

/// Both sides of the slicing identity: the plain integral of f, and the
/// integral over v of the circle average of f on S^{n-1} cap v^perp.
/// The inner average uses `circle_rule` (a 2-dimensional uniform rule)
/// mapped into each plane v^perp.
std::pair<double, double> slice_integral_check(const std::function<double(const Vec&)>& f,
                                               const SphericalRule& outer,
                                               const SphericalRule& circle_rule);

}  // namespace sinebody
