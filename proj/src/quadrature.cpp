#include "sinebody/quadrature.hpp"

#include "sinebody/bodies.hpp"
#include "sinebody/parallel.hpp"

#include <numbers>
#include <sstream>
#include <vector>

namespace sinebody {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_N.
void gauss_legendre(int n, Vec& x, Vec& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x(i) = z;
    x(n - 1 - i) = -z;
    w(i) = 2.0 / ((1.0 - z * z) * dp * dp);
    w(n - 1 - i) = w(i);
  }
  if (n % 2 == 1) x(n / 2) = 0.0;
}

std::string rule_kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::UniformAngle: return "uniform";
    case RuleKind::GaussProduct: return "gauss";
    case RuleKind::MonteCarlo: return "mc";
  }
  return "?";
}

SphericalRule uniform_rule(int n, int resolution) {
  if (n != 2) throw std::invalid_argument("uniform rules exist only for n = 2");
  if (resolution % 2 != 0) {
    throw std::invalid_argument("uniform rule needs an even node count (antipodal symmetry)");
  }
  SphericalRule rule;
  rule.dim = 2;
  rule.kind = RuleKind::UniformAngle;
  rule.nodes.resize(2, resolution);
  rule.weights = Vec::Constant(resolution, 1.0 / resolution);
  for (int k = 0; k < resolution; ++k) {
    const double t = kTwoPi * k / resolution;
    rule.nodes(0, k) = std::cos(t);
    rule.nodes(1, k) = std::sin(t);
  }
  rule.spec = "uniform:" + std::to_string(resolution);
  return rule;
}

SphericalRule monte_carlo_rule(int n, int resolution, std::uint64_t seed) {
  if (resolution % 2 != 0) {
    throw std::invalid_argument("Monte Carlo rule needs an even node count (antipodal pairs)");
  }
  SphericalRule rule;
  rule.dim = n;
  rule.kind = RuleKind::MonteCarlo;
  rule.seed = seed;
  rule.nodes.resize(n, resolution);
  rule.weights = Vec::Constant(resolution, 1.0 / resolution);
  CounterRng rng(seed);
  for (int k = 0; k < resolution / 2; ++k) {
    const Vec u = random_unit_vector(n, rng);
    rule.nodes.col(2 * k) = u;
    rule.nodes.col(2 * k + 1) = -u;
  }
  rule.spec = "mc:" + std::to_string(resolution) + ":" + std::to_string(seed);
  return rule;
}

}  // namespace

SphericalRule build_gauss_rule(int polar, int azimuthal) {
  if (polar < 2 || azimuthal < 4) throw std::invalid_argument("gauss rule too coarse");
  if (azimuthal % 2 != 0) {
    throw std::invalid_argument("gauss rule needs an even azimuthal count (antipodal symmetry)");
  }
  Vec t;
  Vec wt;
  gauss_legendre(polar, t, wt);
  SphericalRule rule;
  rule.dim = 3;
  rule.kind = RuleKind::GaussProduct;
  const Eigen::Index size = static_cast<Eigen::Index>(polar) * azimuthal;
  rule.nodes.resize(3, size);
  rule.weights.resize(size);
  Eigen::Index k = 0;
  for (int i = 0; i < polar; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - t(i) * t(i)));
    for (int j = 0; j < azimuthal; ++j, ++k) {
      const double phi = kTwoPi * j / azimuthal;
      rule.nodes(0, k) = s * std::cos(phi);
      rule.nodes(1, k) = s * std::sin(phi);
      rule.nodes(2, k) = t(i);
      rule.weights(k) = wt(i);
    }
  }
  rule.weights /= compensated_sum(rule.weights);
  rule.spec = "gauss:" + std::to_string(polar) + "x" + std::to_string(azimuthal);
  return rule;
}

SphericalRule build_rule(int n, int resolution, RuleKind kind, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sphere dimension must be at least 2");
  if (resolution < 4) throw std::invalid_argument("rule resolution must be at least 4");
  switch (kind) {
    case RuleKind::UniformAngle:
      return uniform_rule(n, resolution);
    case RuleKind::GaussProduct:
      if (n != 3) throw std::invalid_argument("gauss product rules exist only for n = 3");
      return build_gauss_rule(resolution, 2 * resolution);
    case RuleKind::MonteCarlo:
      if (n < 4) {
        throw std::invalid_argument("Monte Carlo rules are used for n >= 4; use " +
                                    default_rule_spec(n));
      }
      return monte_carlo_rule(n, resolution, seed);
  }
  throw std::invalid_argument("unknown rule kind " + rule_kind_name(kind));
}

SphericalRule parse_rule(const std::string& spec, int dim) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("rule spec '" + spec + "': expected kind:resolution");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) {
      throw std::invalid_argument("rule spec '" + spec + "': bad integer '" + s + "'");
    }
    return v;
  };
  if (kind == "uniform") {
    if (dim != 2) throw std::invalid_argument("rule spec '" + spec + "' needs n = 2");
    return build_rule(2, to_int(rest), RuleKind::UniformAngle);
  }
  if (kind == "gauss") {
    if (dim != 3) throw std::invalid_argument("rule spec '" + spec + "' needs n = 3");
    const auto x = rest.find('x');
    if (x == std::string::npos) return build_rule(3, to_int(rest), RuleKind::GaussProduct);
    return build_gauss_rule(to_int(rest.substr(0, x)), to_int(rest.substr(x + 1)));
  }
  if (kind == "mc") {
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos) {
      throw std::invalid_argument("rule spec '" + spec + "': expected mc:N:seed");
    }
    const int n = to_int(rest.substr(0, c2));
    const std::string seed_text = rest.substr(c2 + 1);
    std::uint64_t seed = 0;
    try {
      std::size_t used = 0;
      seed = std::stoull(seed_text, &used);
      if (used != seed_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("rule spec '" + spec + "': bad seed '" + seed_text + "'");
    }
    return build_rule(dim, n, RuleKind::MonteCarlo, seed);
  }
  throw std::invalid_argument("rule spec '" + spec + "': unknown kind '" + kind + "'");
}

std::string default_rule_spec(int dim) {
  if (dim == 2) return "uniform:512";
  if (dim == 3) return "gauss:64";
  return "mc:200000:42";
}

SphericalRule default_rule(int dim) { return parse_rule(default_rule_spec(dim), dim); }

double compensated_sum(const Vec& terms) {
  double sum = 0.0;
  double c = 0.0;
  for (Eigen::Index i = 0; i < terms.size(); ++i) {
    const double x = terms(i);
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

Vec evaluate_at_nodes(const SphericalRule& rule, const std::function<double(const Vec&)>& f) {
  Vec values(rule.size());
  parallel_for(static_cast<std::size_t>(rule.size()), [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(i);
    values(k) = f(rule.nodes.col(k));
  });
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values(k))) {
      std::ostringstream os;
      os << "integrand not finite (" << values(k) << ") at node " << k << " = ("
         << rule.nodes.col(k).transpose() << ")";
      throw GeometryError(os.str());
    }
  }
  return values;
}

double integrate_values(const SphericalRule& rule, const Vec& values) {
  if (values.size() != rule.size()) throw std::invalid_argument("value count != node count");
  return compensated_sum(rule.weights.cwiseProduct(values));
}

double integrate(const SphericalRule& rule, const std::function<double(const Vec&)>& f) {
  return integrate_values(rule, evaluate_at_nodes(rule, f));
}

double volume(const Body& body, const SphericalRule& rule) {
  if (body.dim() != rule.dim) throw std::invalid_argument("volume: body/rule dimension mismatch");
  const int n = rule.dim;
  const Vec r = body.radials(rule);
  return unit_ball_volume(n) * integrate_values(rule, r.array().pow(n).matrix());
}

double dual_mixed_volume(const Body& L, const Body& M, double p, const SphericalRule& rule) {
  if (L.dim() != rule.dim || M.dim() != rule.dim) {
    throw std::invalid_argument("dual_mixed_volume: dimension mismatch");
  }
  const int n = rule.dim;
  const Vec rl = L.radials(rule);
  const Vec rm = M.radials(rule);
  Vec terms(rule.size());
  for (Eigen::Index i = 0; i < terms.size(); ++i) {
    if (rm(i) < 1e-12) {
      std::ostringstream os;
      os << "dual_mixed_volume: second body radial " << rm(i) << " below 1e-12 at node ("
         << rule.nodes.col(i).transpose() << ")";
      throw GeometryError(os.str());
    }
    terms(i) = std::pow(rl(i), n + p) * std::pow(rm(i), -p);
  }
  return unit_ball_volume(n) * integrate_values(rule, terms);
}

std::pair<double, double> slice_integral_check(const std::function<double(const Vec&)>& f,
                                               const SphericalRule& outer,
                                               const SphericalRule& circle_rule) {
  if (circle_rule.dim != 2) throw std::invalid_argument("slice check: circle rule must be planar");
  if (outer.dim != 3) throw std::invalid_argument("slice check: only n = 3 is supported");
  const double direct = integrate(outer, f);
  const Vec inner = evaluate_at_nodes(outer, [&](const Vec& v) {
    const Mat basis = orthonormal_complement(v);
    Vec values(circle_rule.size());
    for (Eigen::Index k = 0; k < circle_rule.size(); ++k) {
      values(k) = f(basis * circle_rule.nodes.col(k));
    }
    return integrate_values(circle_rule, values);
  });
  return {direct, integrate_values(outer, inner)};
}

}  // namespace sinebody
