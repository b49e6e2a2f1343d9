#include "sinebody/harness.hpp"

#include "sinebody/body_io.hpp"
#include "sinebody/centroid.hpp"
#include "sinebody/sine_polarity.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sinebody {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Inequality of the form small <= large.
void conclude(VerificationReport& r, double small, double large, const Tolerances& t) {
  if (small == 0.0 && large == 0.0) {
    r.ratio = 1.0;
  } else {
    r.ratio = small / large;
  }
  r.pass = std::isfinite(r.ratio) && r.ratio <= 1.0 + r.tol;
  r.equality = std::abs(r.ratio - 1.0) <= t.equality;
}

VerificationReport start_report(const std::string& name, int n, std::optional<double> p,
                                const Body* k, const Body* l, const std::string& rule) {
  VerificationReport r;
  r.name = name;
  r.n = n;
  r.p = p;
  r.body_k = k ? k->describe() : "";
  r.body_l = l ? l->describe() : "";
  r.rule = rule;
  return r;
}

}  // namespace

double Tolerances::for_bodies(std::initializer_list<const Body*> bodies) const {
  for (const Body* b : bodies) {
    if (b && !b->is_smooth()) return nonsmooth;
  }
  return smooth;
}

VerificationReport verify_lp_sine_bs(BodyPtr body, double p, const SphericalRule& rule,
                                     const Tolerances& tolerances) {
  const auto t0 = Clock::now();
  const int n = body->dim();
  auto r = start_report("lp_sine_blaschke_santalo", n, p, body.get(), nullptr, rule.spec);
  r.tol = tolerances.for_bodies({body.get()});
  const auto centroid = sine_centroid(body, p, rule);
  r.lhs = centroid->parent_volume() * volume(*sinebody::polar(centroid), rule);
  r.rhs = std::pow(unit_ball_volume(n), 2);
  conclude(r, r.lhs, r.rhs, tolerances);
  r.wall_ms = elapsed_ms(t0);
  return r;
}

VerificationReport verify_sine_bs(BodyPtr body, const SphericalRule& rule,
                                  const Tolerances& tolerances) {
  const auto t0 = Clock::now();
  const int n = body->dim();
  auto r = start_report("sine_blaschke_santalo", n, std::nullopt, body.get(), nullptr, rule.spec);
  r.tol = tolerances.for_bodies({body.get()});
  r.lhs = volume(*body, rule) * sine_polar_volume(body, rule);
  r.rhs = std::pow(unit_ball_volume(n), 2);
  conclude(r, r.lhs, r.rhs, tolerances);
  r.wall_ms = elapsed_ms(t0);
  return r;
}

VerificationReport verify_polar_dominates_diamond(BodyPtr body, const SphericalRule& rule,
                                                  const Tolerances& tolerances) {
  if (body->kind() != BodyKind::Cylinders && body->kind() != BodyKind::Ball) {
    throw std::invalid_argument("polar dominance is stated for intersections of cylinders; got " +
                                body->describe());
  }
  const auto t0 = Clock::now();
  auto r = start_report("sine_polar_vs_polar_volume", body->dim(), std::nullopt, body.get(),
                        nullptr, rule.spec);
  r.tol = tolerances.for_bodies({body.get()});
  r.lhs = sine_polar_volume(body, rule);
  r.rhs = volume(*sinebody::polar(body), rule);
  conclude(r, r.lhs, r.rhs, tolerances);
  r.wall_ms = elapsed_ms(t0);
  return r;
}

namespace {

// Uniform points in `body` by rejection from the cube around a bounding ball.
class BodySampler {
 public:
  BodySampler(const Body& body, std::uint64_t seed) : body_(body), rng_(seed) {
    radius_ = 1.01 * body.scan_radials().maxCoeff();
    for (const Vec& h : body.hint_directions()) {
      radius_ = std::max(radius_, 1.01 * body.radial_unit(h));
    }
  }

  Vec next() {
    const int n = body_.dim();
    Vec y(n);
    for (;;) {
      ++tried_;
      for (int i = 0; i < n; ++i) y(i) = radius_ * (2.0 * rng_.uniform() - 1.0);
      if (y.norm() <= radius_ && body_.contains(y)) {
        ++accepted_;
        return y;
      }
      if (tried_ >= 100000 && accepted_ < 1e-3 * tried_) {
        throw GeometryError("rejection sampler acceptance rate below 1e-3 for " + body_.describe());
      }
    }
  }

 private:
  const Body& body_;
  CounterRng rng_;
  double radius_ = 0.0;
  std::size_t tried_ = 0;
  std::size_t accepted_ = 0;
};

}  // namespace

VerificationReport verify_double_integral_ineq(BodyPtr K, BodyPtr L, double p, std::size_t samples,
                                               std::uint64_t seed, const SphericalRule& volume_rule,
                                               const Tolerances& tolerances) {
  if (!(p >= 1.0)) throw std::invalid_argument("double integral check: need p >= 1");
  if (samples < 10000) throw std::invalid_argument("double integral check: need >= 1e4 samples");
  if (K->dim() != L->dim()) throw std::invalid_argument("double integral check: dimension mismatch");
  const auto t0 = Clock::now();
  const int n = K->dim();
  auto r = start_report("double_integral_sine", n, p, K.get(), L.get(), volume_rule.spec);
  r.seed = seed;
  BodySampler sample_k(*K, seed);
  BodySampler sample_l(*L, seed ^ 0xA5A5A5A5DEADBEEFULL);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double v = std::pow(sine_bracket(sample_k.next(), sample_l.next()), p);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double sd = std::sqrt(m2 / static_cast<double>(samples - 1));
  const double vk = volume(*K, volume_rule);
  const double vl = volume(*L, volume_rule);
  const double nn = n;
  const double constant = nn * (nn - 1.0) * unit_ball_volume(nn - 1.0) *
                          unit_ball_volume(nn + p - 2.0) /
                          ((nn + p) * (nn + p) * unit_ball_volume(nn + p - 3.0) *
                           std::pow(unit_ball_volume(nn), 1.0 + 2.0 * p / nn));
  r.lhs = vk * vl * mean;
  r.std_error = vk * vl * sd / std::sqrt(static_cast<double>(samples));
  r.rhs = constant * std::pow(vk * vl, (nn + p) / nn);
  r.tol = tolerances.mc_sigmas * r.std_error / r.lhs;
  r.ratio = r.rhs / r.lhs;
  r.pass = r.ratio <= 1.0 + r.tol;
  r.equality = std::abs(r.lhs - r.rhs) <= tolerances.mc_sigmas * r.std_error;
  r.wall_ms = elapsed_ms(t0);
  return r;
}

VerificationReport verify_spherical_function_ineq(const std::function<double(const Vec&)>& f,
                                                  const std::function<double(const Vec&)>& g,
                                                  double p, const SphericalRule& rule,
                                                  const Tolerances& tolerances) {
  if (!(p >= 1.0)) throw std::invalid_argument("spherical function check: need p >= 1");
  const auto t0 = Clock::now();
  const int n = rule.dim;
  auto r = start_report("spherical_function_sine", n, p, nullptr, nullptr, rule.spec);
  r.tol = tolerances.smooth;
  const Vec fv = evaluate_at_nodes(rule, f);
  const Vec gv = evaluate_at_nodes(rule, g);
  if (fv.minCoeff() < 0.0 || gv.minCoeff() < 0.0) {
    throw std::invalid_argument("spherical function check: functions must be nonnegative");
  }
  const double moment = sphere_projection_moment(n, n - 1, p);
  // Inner integral of [u_i, v]^p g(v) with the kink at v = +-u_i removed by
  // subtracting (a + b u_i.v) [u_i, v]^p, whose integral is a * moment.
  const Vec inner = evaluate_at_nodes(rule, [&](const Vec& u) {
    const double gp = g(u);
    const double gm = g(Vec(-u));
    const double a = 0.5 * (gp + gm);
    const double b = 0.5 * (gp - gm);
    const Vec c = rule.nodes.transpose() * u;
    Vec terms(rule.size());
    for (Eigen::Index j = 0; j < terms.size(); ++j) {
      const double s = std::pow(std::max(0.0, 1.0 - c(j) * c(j)), 0.5 * p);
      terms(j) = s * (gv(j) - a - b * c(j));
    }
    return integrate_values(rule, terms) + a * moment;
  });
  r.lhs = integrate_values(rule, fv.cwiseProduct(inner));
  const double q = n / (n + p);
  auto quasi_norm = [&](const Vec& values) {
    return std::pow(integrate_values(rule, values.array().pow(q).matrix()), 1.0 / q);
  };
  r.rhs = moment * quasi_norm(fv) * quasi_norm(gv);
  conclude(r, r.rhs, r.lhs, tolerances);
  r.wall_ms = elapsed_ms(t0);
  return r;
}

double sup_bracket(const Body& K, const Body& L) {
  if (K.dim() != L.dim()) throw std::invalid_argument("sup_bracket: dimension mismatch");
  const ScanSet& scan = scan_set(K.dim());
  std::vector<Vec> hints = K.hint_directions();
  for (const Vec& h : L.hint_directions()) hints.push_back(h);
  const Eigen::Index m = scan.nodes.cols();
  Mat candidates(K.dim(), m + static_cast<Eigen::Index>(hints.size()));
  candidates.leftCols(m) = scan.nodes;
  for (std::size_t h = 0; h < hints.size(); ++h) {
    candidates.col(m + static_cast<Eigen::Index>(h)) = hints[h];
  }
  auto objective = [&](const Vec& u) { return K.radial_unit(u) * cyl_support(L, u); };
  const Vec values = evaluate_at_nodes(
      SphericalRule{K.dim(), candidates, Vec::Ones(candidates.cols()), RuleKind::UniformAngle, 0, ""},
      objective);
  return maximize_on_sphere(objective, candidates, values, 1.5 * scan.spacing, K.search_settings())
      .value;
}

VerificationReport verify_sup_bracket_ineq(BodyPtr K, BodyPtr L, const SphericalRule& rule,
                                           const Tolerances& tolerances) {
  const auto t0 = Clock::now();
  const int n = K->dim();
  auto r = start_report("sup_bracket", n, std::nullopt, K.get(), L.get(), rule.spec);
  r.tol = tolerances.for_bodies({K.get(), L.get()});
  r.lhs = sup_bracket(*K, *L);
  r.rhs = std::pow(unit_ball_volume(n), -2.0 / n) *
          std::pow(volume(*K, rule) * volume(*L, rule), 1.0 / n);
  conclude(r, r.rhs, r.lhs, tolerances);
  r.wall_ms = elapsed_ms(t0);
  return r;
}

// --- suites ---------------------------------------------------------------

std::vector<std::string> zoo_names() {
  return {"ball2", "ball3", "ellipse12", "spheroid112", "ellipsoid123",
          "box2",  "box3",  "bicylinder", "tricylinder"};
}

BodyPtr zoo_body(const std::string& name) {
  if (name == "ball2") return make_ball(2, 1.0);
  if (name == "ball3") return make_ball(3, 1.0);
  if (name == "ellipse12") return make_ellipsoid(Eigen::Vector2d(1.0, 2.0));
  if (name == "spheroid112") return make_ellipsoid(Eigen::Vector3d(1.0, 1.0, 2.0));
  if (name == "ellipsoid123") return make_ellipsoid(Eigen::Vector3d(1.0, 2.0, 3.0));
  if (name == "box2") return make_box(Eigen::Vector2d(1.0, 1.0));
  if (name == "box3") return make_box(Eigen::Vector3d(1.0, 1.0, 1.0));
  if (name == "bicylinder") return make_bicylinder();
  if (name == "tricylinder") return make_tricylinder();
  throw std::invalid_argument("unknown zoo body '" + name + "'");
}

BodyPtr resolve_body(const std::string& reference) {
  if (reference.empty()) throw std::invalid_argument("missing body");
  if (reference.front() == '{') return make_body(parse_body_json(reference));
  for (const auto& name : zoo_names()) {
    if (name == reference) return zoo_body(name);
  }
  return make_body(load_body_file(reference));
}

SuiteConfig parse_suite_config(const std::string& json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("suite config: ") + e.what());
  }
  SuiteConfig config;
  try {
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      config.tolerances.smooth = t.value("smooth", config.tolerances.smooth);
      config.tolerances.nonsmooth = t.value("nonsmooth", config.tolerances.nonsmooth);
      config.tolerances.equality = t.value("equality", config.tolerances.equality);
      config.tolerances.mc_sigmas = t.value("mc_sigmas", config.tolerances.mc_sigmas);
    }
    if (!j.contains("checks") || !j.at("checks").is_array()) {
      throw std::invalid_argument("suite config: expected a \"checks\" array");
    }
    auto body_text = [](const json& b) { return b.is_string() ? b.get<std::string>() : b.dump(); };
    for (const json& c : j.at("checks")) {
      SuiteItem item;
      item.check = c.at("check").get<std::string>();
      if (c.contains("body")) item.body = body_text(c.at("body"));
      if (c.contains("body2")) item.body2 = body_text(c.at("body2"));
      if (c.contains("p")) item.p = c.at("p").get<double>();
      item.rule = c.value("rule", std::string{});
      item.samples = c.value("samples", item.samples);
      item.seed = c.value("seed", item.seed);
      config.items.push_back(item);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("suite config: ") + e.what());
  }
  return config;
}

SuiteConfig load_suite_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open suite config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_suite_config(buffer.str());
}

SuiteConfig default_suite() {
  SuiteConfig config;
  for (const double p : {1.0, 2.0, 4.0}) {
    for (const char* b : {"ball3", "spheroid112", "ellipse12", "box3"}) {
      config.items.push_back({"lp_sine_bs", b, "", p, "", 100000, 42});
    }
  }
  for (const char* b : {"ball3", "box2", "spheroid112", "bicylinder", "tricylinder"}) {
    config.items.push_back({"sine_bs", b, "", std::nullopt, "", 100000, 42});
  }
  for (const char* b : {"ball3", "bicylinder", "tricylinder"}) {
    config.items.push_back({"polar_dominates_diamond", b, "", std::nullopt, "", 100000, 42});
  }
  config.items.push_back({"double_integral", "ball3", "ball3", 2.0, "", 100000, 42});
  config.items.push_back({"double_integral", "ball3", "spheroid112", 2.0, "", 100000, 42});
  config.items.push_back({"double_integral", "ball2", "ellipse12", 1.0, "", 100000, 42});
  config.items.push_back({"spherical_function", "ball3", "ball3", 2.0, "", 100000, 42});
  config.items.push_back({"spherical_function", "spheroid112", "spheroid112", 2.0, "", 100000, 42});
  config.items.push_back({"sup_bracket", "ball3", "ball3", std::nullopt, "", 100000, 42});
  config.items.push_back({"sup_bracket", "spheroid112", "ball3", std::nullopt, "", 100000, 42});
  for (const char* b : {"ball3", "spheroid112"}) {
    config.items.push_back({"iterated_polar", b, "", 2.0, "", 100000, 42});
  }
  config.items.push_back({"fubini_symmetry", "ball3", "spheroid112", 2.0, "", 100000, 42});
  return config;
}

namespace {

VerificationReport run_item(const SuiteItem& item, const Tolerances& tol) {
  const BodyPtr k = resolve_body(item.body);
  const int n = k->dim();
  const SphericalRule rule = item.rule.empty() ? default_rule(n) : parse_rule(item.rule, n);
  auto need_p = [&] {
    if (!item.p) throw std::invalid_argument(item.check + ": missing p");
    return *item.p;
  };
  auto second = [&] { return item.body2.empty() ? k : resolve_body(item.body2); };

  if (item.check == "lp_sine_bs") return verify_lp_sine_bs(k, need_p(), rule, tol);
  if (item.check == "sine_bs") return verify_sine_bs(k, rule, tol);
  if (item.check == "polar_dominates_diamond") return verify_polar_dominates_diamond(k, rule, tol);
  if (item.check == "double_integral") {
    return verify_double_integral_ineq(k, second(), need_p(), item.samples, item.seed, rule, tol);
  }
  if (item.check == "sup_bracket") return verify_sup_bracket_ineq(k, second(), rule, tol);
  if (item.check == "spherical_function") {
    // f = rho_K^{n+p}, g = rho_L^{n+p}.
    const BodyPtr l = second();
    const double p = need_p();
    auto f = [k, p, n](const Vec& u) { return std::pow(k->radial_unit(u), n + p); };
    auto g = [l, p, n](const Vec& u) { return std::pow(l->radial_unit(u), n + p); };
    auto r = verify_spherical_function_ineq(f, g, p, rule, tol);
    r.body_k = k->describe();
    r.body_l = l->describe();
    r.tol = tol.for_bodies({k.get(), l.get()});
    r.pass = r.ratio <= 1.0 + r.tol;
    return r;
  }
  if (item.check == "iterated_polar") {
    const auto t0 = Clock::now();
    const double p = need_p();
    auto r = start_report("iterated_sine_centroid_polar", n, p, k.get(), nullptr, rule.spec);
    r.tol = tol.for_bodies({k.get()});
    const auto [twice, once] = iterated_polar_volume_check(k, p, rule);
    r.lhs = once;
    r.rhs = twice;
    conclude(r, r.lhs, r.rhs, tol);
    r.wall_ms = elapsed_ms(t0);
    return r;
  }
  if (item.check == "fubini_symmetry") {
    const auto t0 = Clock::now();
    const BodyPtr l = second();
    const double p = need_p();
    auto r = start_report("fubini_symmetry", n, p, k.get(), l.get(), rule.spec);
    r.tol = tol.for_bodies({k.get(), l.get()});
    const double gap = fubini_symmetry_gap(k, l, p, rule);
    r.lhs = 1.0 + gap;
    r.rhs = 1.0;
    r.ratio = r.lhs;
    r.pass = gap <= r.tol;
    r.equality = gap <= tol.equality;
    r.wall_ms = elapsed_ms(t0);
    return r;
  }
  throw std::invalid_argument("unknown check '" + item.check + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<VerificationReport> run_suite(const SuiteConfig& config) {
  std::vector<VerificationReport> reports;
  for (const SuiteItem& item : config.items) {
    try {
      reports.push_back(run_item(item, config.tolerances));
    } catch (const std::exception& e) {
      VerificationReport r;
      r.name = item.check;
      r.body_k = item.body;
      r.body_l = item.body2;
      r.p = item.p;
      r.rule = item.rule;
      r.lhs = r.rhs = r.ratio = std::numeric_limits<double>::quiet_NaN();
      r.pass = false;
      r.error = e.what();
      reports.push_back(r);
    }
  }
  return reports;
}

void write_reports_csv(std::ostream& out, const std::vector<VerificationReport>& reports,
                       bool with_timing) {
  out << "name,n,p,body_K,body_L,rule,seed,lhs,rhs,ratio,tol,pass,equality_flag,wall_ms\n";
  auto field = [](std::string s) {
    for (char& c : s) {
      if (c == ',' || c == '\n') c = ';';
    }
    return s;
  };
  for (const auto& r : reports) {
    out << field(r.name) << ',' << r.n << ',' << (r.p ? format_double(*r.p) : "") << ','
        << field(r.body_k) << ',' << field(r.body_l) << ',' << field(r.rule) << ','
        << (r.seed ? std::to_string(*r.seed) : "") << ',' << format_double(r.lhs) << ','
        << format_double(r.rhs) << ',' << format_double(r.ratio) << ',' << format_double(r.tol)
        << ',' << (r.pass ? "true" : "false") << ',' << (r.equality ? "true" : "false") << ','
        << (with_timing ? format_double(r.wall_ms) : "") << '\n';
  }
}

}  // namespace sinebody
