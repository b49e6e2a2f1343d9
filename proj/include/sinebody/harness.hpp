#pragma once

#include "sinebody/bodies.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sinebody {

/// Outcome of one inequality check. `ratio` is oriented so that the
/// inequality holds iff ratio <= 1 + tol.
struct VerificationReport {
  std::string name;
  int n = 0;
  std::optional<double> p;
  std::string body_k;
  std::string body_l;
  std::string rule;
  std::optional<std::uint64_t> seed;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool equality = false;
  double wall_ms = 0.0;
  double std_error = 0.0;  ///< Monte Carlo checks only
  std::string error;       ///< set when the check threw
};

/// Pass tolerances per body class and the equality window.
struct Tolerances {
  double smooth = 1e-6;
  double nonsmooth = 1e-3;
  double equality = 1e-4;
  double mc_sigmas = 3.0;

  double for_bodies(std::initializer_list<const Body*> bodies) const;
};

/// V(K) V(Lambda_p^o K) <= omega_n^2.
VerificationReport verify_lp_sine_bs(BodyPtr body, double p, const SphericalRule& rule,
                                     const Tolerances& tolerances = {});

/// V(K) V(K^<>) <= omega_n^2.
VerificationReport verify_sine_bs(BodyPtr body, const SphericalRule& rule,
                                  const Tolerances& tolerances = {});

/// V(K^<>) <= V(K^o) for K an intersection of cylinders (balls accepted as
/// the limiting case).
VerificationReport verify_polar_dominates_diamond(BodyPtr body, const SphericalRule& rule,
                                                  const Tolerances& tolerances = {});

/// int_K int_L [x, y]^p dx dy >= C [V(K) V(L)]^{(n+p)/n}, left side by
/// Monte Carlo rejection sampling. Volumes come from `volume_rule`.
VerificationReport verify_double_integral_ineq(BodyPtr K, BodyPtr L, double p,
                                               std::size_t samples, std::uint64_t seed,
                                               const SphericalRule& volume_rule,
                                               const Tolerances& tolerances = {});

/// int int [u, v]^p f(u) g(v) du dv >= C ||f||_{n/(n+p)} ||g||_{n/(n+p)}.
VerificationReport verify_spherical_function_ineq(const std::function<double(const Vec&)>& f,
                                                  const std::function<double(const Vec&)>& g,
                                                  double p, const SphericalRule& rule,
                                                  const Tolerances& tolerances = {});

/// sup over K x L of [x, y] >= omega_n^{-2/n} [V(K) V(L)]^{1/n}.
VerificationReport verify_sup_bracket_ineq(BodyPtr K, BodyPtr L, const SphericalRule& rule,
                                           const Tolerances& tolerances = {});

/// sup over x in K, y in L of [x, y], as max_u rho_K(u) c_L(u).
double sup_bracket(const Body& K, const Body& L);

// --- suites ---------------------------------------------------------------

/// Named bodies: ball2, ball3, ellipse12, spheroid112, ellipsoid123, box2,
/// box3, bicylinder, tricylinder.
BodyPtr zoo_body(const std::string& name);
std::vector<std::string> zoo_names();

struct SuiteItem {
  std::string check;  ///< lp_sine_bs | sine_bs | polar_dominates_diamond |
                      ///< double_integral | spherical_function | sup_bracket |
                      ///< iterated_polar | fubini_symmetry
  std::string body;   ///< zoo name, path to a body file, or inline JSON
  std::string body2;
  std::optional<double> p;
  std::string rule;  ///< empty: default for the dimension
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
};

struct SuiteConfig {
  std::vector<SuiteItem> items;
  Tolerances tolerances;
};

/// {"tolerances": {...}, "checks": [{"check": ..., "body": ..., ...}, ...]}
SuiteConfig parse_suite_config(const std::string& json_text);
SuiteConfig load_suite_config(const std::string& path);

/// Checks over the body zoo and a small p grid.
SuiteConfig default_suite();

/// Runs every item in order; failures are recorded in the report and the
/// suite continues.
std::vector<VerificationReport> run_suite(const SuiteConfig& config);

/// One report per line with the header
/// name,n,p,body_K,body_L,rule,seed,lhs,rhs,ratio,tol,pass,equality_flag,wall_ms.
/// Wall time is written only when `with_timing` is set, so repeated runs
/// produce identical bytes.
void write_reports_csv(std::ostream& out, const std::vector<VerificationReport>& reports,
                       bool with_timing = false);

/// Resolves a body argument: zoo name, inline JSON object, or file path.
BodyPtr resolve_body(const std::string& reference);

}  // namespace sinebody
