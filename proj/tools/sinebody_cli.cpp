// Command-line front end: volumes, sine polars, centroid bodies, verification
// suites and p sweeps, all written as CSV.

#include "sinebody/body_io.hpp"
#include "sinebody/centroid.hpp"
#include "sinebody/harness.hpp"
#include "sinebody/sine_polarity.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

using namespace sinebody;

namespace {

struct Options {
  std::string body;
  std::string body2;
  int dim = 0;
  std::string rule;
  std::optional<double> p;
  std::vector<double> p_grid;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string config;
  std::optional<double> tol;
  bool timing = false;
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

BodyPtr load_body(const Options& o) {
  if (o.body.empty()) throw UsageError("--body is required");
  BodyPtr body = resolve_body(o.body);
  if (o.dim != 0 && o.dim != body->dim()) {
    throw UsageError("--dim " + std::to_string(o.dim) + " does not match the body dimension " +
                     std::to_string(body->dim()));
  }
  return body;
}

SphericalRule rule_for(const Options& o, int dim) {
  if (!o.rule.empty()) return parse_rule(o.rule, dim);
  if (dim >= 4 && o.seed) return build_rule(dim, 200000, RuleKind::MonteCarlo, *o.seed);
  return default_rule(dim);
}

void check_p(double p) {
  if (!(p >= 1.0)) throw UsageError("p must be >= 1");
}

std::vector<double> p_values(const Options& o) {
  if (o.p && !o.p_grid.empty()) throw UsageError("give either --p or --p-grid");
  if (o.p) {
    check_p(*o.p);
    return {*o.p};
  }
  if (o.p_grid.empty()) throw UsageError("--p or --p-grid is required");
  for (std::size_t i = 0; i < o.p_grid.size(); ++i) {
    check_p(o.p_grid[i]);
    if (i > 0 && !(o.p_grid[i] > o.p_grid[i - 1])) {
      throw UsageError("--p-grid must be strictly increasing");
    }
  }
  return o.p_grid;
}

void write_radial_table(std::ostream& out, const SphericalRule& rule, const Vec& radials) {
  for (int i = 0; i < rule.dim; ++i) out << 'x' << (i + 1) << ',';
  out << "radial\n";
  for (Eigen::Index j = 0; j < rule.size(); ++j) {
    for (int i = 0; i < rule.dim; ++i) out << fmt(rule.nodes(i, j)) << ',';
    out << fmt(radials(j)) << '\n';
  }
}

int cmd_volume(const Options& o) {
  const BodyPtr body = load_body(o);
  const SphericalRule rule = rule_for(o, body->dim());
  Output out(o.out);
  out.stream() << "body," << body->describe() << "\nrule," << rule.spec << "\nnodes," << rule.size()
               << "\nvolume," << fmt(volume(*body, rule)) << '\n';
  return 0;
}

int cmd_sine_polar(const Options& o) {
  const BodyPtr body = load_body(o);
  const SphericalRule rule = rule_for(o, body->dim());
  const auto diamond = sine_polar(body);
  const Vec radials = diamond->radials(rule);
  Output out(o.out);
  write_radial_table(out.stream(), rule, radials);
  out.stream() << "# volume," << fmt(unit_ball_volume(rule.dim) *
                                     integrate_values(rule, radials.array().pow(rule.dim).matrix()))
               << '\n';
  return 0;
}

struct CentroidRow {
  double p;
  double volume_k;
  double volume_polar;
  double product;
  Vec radials;
};

CentroidRow centroid_row(const BodyPtr& body, double p, const SphericalRule& rule) {
  const auto lambda = sine_centroid(body, p, rule);
  const Vec radials = sinebody::polar(lambda)->radials(rule);
  const int n = rule.dim;
  const double vp = unit_ball_volume(n) * integrate_values(rule, radials.array().pow(n).matrix());
  const double vk = lambda->parent_volume();
  return {p, vk, vp, vk * vp / std::pow(unit_ball_volume(n), 2), radials};
}

int cmd_centroid(const Options& o) {
  const BodyPtr body = load_body(o);
  const SphericalRule rule = rule_for(o, body->dim());
  const std::vector<double> ps = p_values(o);
  Output out(o.out);
  if (ps.size() == 1) {
    const CentroidRow row = centroid_row(body, ps.front(), rule);
    write_radial_table(out.stream(), rule, row.radials);
    out.stream() << "# volume," << fmt(row.volume_polar) << "\n# product," << fmt(row.product)
                 << '\n';
    return 0;
  }
  out.stream() << "p,volume_K,volume_polar,product\n";
  for (const double p : ps) {
    const CentroidRow row = centroid_row(body, p, rule);
    out.stream() << fmt(p) << ',' << fmt(row.volume_k) << ',' << fmt(row.volume_polar) << ','
                 << fmt(row.product) << '\n';
  }
  return 0;
}

int cmd_sweep(const Options& o) {
  const BodyPtr body = load_body(o);
  const SphericalRule rule = rule_for(o, body->dim());
  const std::vector<double> ps = p_values(o);
  const int n = rule.dim;
  const Vec diamond = sine_polar(body)->radials(rule);
  const double vd = unit_ball_volume(n) * integrate_values(rule, diamond.array().pow(n).matrix());
  Output out(o.out);
  out.stream() << "p,volume_K,volume_polar,product,sine_product,max_radial_gap\n";
  for (const double p : ps) {
    const CentroidRow row = centroid_row(body, p, rule);
    const double gap = (row.radials - diamond).cwiseAbs().maxCoeff();
    out.stream() << fmt(p) << ',' << fmt(row.volume_k) << ',' << fmt(row.volume_polar) << ','
                 << fmt(row.product) << ',' << fmt(row.volume_k * vd / std::pow(unit_ball_volume(n), 2))
                 << ',' << fmt(gap) << '\n';
  }
  return 0;
}

int cmd_verify(const Options& o) {
  SuiteConfig config = o.config.empty() ? default_suite() : load_suite_config(o.config);
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw UsageError("--tol must be positive");
    config.tolerances.smooth = *o.tol;
    config.tolerances.nonsmooth = *o.tol;
  }
  for (auto& item : config.items) {
    if (o.seed) item.seed = *o.seed;
    if (!o.rule.empty() && item.rule.empty()) item.rule = o.rule;
  }
  const auto reports = run_suite(config);
  Output out(o.out);
  write_reports_csv(out.stream(), reports, o.timing);
  bool ok = true;
  for (const auto& r : reports) {
    if (!r.error.empty()) std::cerr << r.name << " (" << r.body_k << "): " << r.error << '\n';
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sine polar bodies, L_p-sine centroid bodies and their inequalities"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--body", o.body, "Body: zoo name, JSON file or inline JSON");
    sub->add_option("--dim", o.dim, "Expected dimension");
    sub->add_option("--rule", o.rule, "Rule spec: uniform:N, gauss:N[xM], mc:N:seed");
    sub->add_option("--seed", o.seed, "Seed for Monte Carlo parts");
    sub->add_option("--out", o.out, "Output file (default stdout)");
  };
  auto add_p = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "Exponent p >= 1");
    sub->add_option("--p-grid", o.p_grid, "Strictly increasing exponents")->delimiter(',');
  };

  CLI::App* volume_cmd = app.add_subcommand("volume", "Volume of a body");
  add_common(volume_cmd);
  CLI::App* polar_cmd = app.add_subcommand("sine-polar", "Radial table of the sine polar body");
  add_common(polar_cmd);
  CLI::App* centroid_cmd =
      app.add_subcommand("centroid", "Radial table of the polar L_p-sine centroid body");
  add_common(centroid_cmd);
  add_p(centroid_cmd);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Volume products along a p grid");
  add_common(sweep_cmd);
  add_p(sweep_cmd);
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("--config", o.config, "Suite JSON (default: built-in suite)");
  verify_cmd->add_option("--body2", o.body2, "Unused; accepted for symmetry");
  verify_cmd->add_option("--rule", o.rule, "Rule for checks that do not name one");
  verify_cmd->add_option("--seed", o.seed, "Seed override for Monte Carlo checks");
  verify_cmd->add_option("--out", o.out, "Output file (default stdout)");
  verify_cmd->add_option("--tol", o.tol, "Pass tolerance for deterministic checks");
  verify_cmd->add_flag("--timing", o.timing, "Fill the wall_ms column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*volume_cmd) return cmd_volume(o);
    if (*polar_cmd) return cmd_sine_polar(o);
    if (*centroid_cmd) return cmd_centroid(o);
    if (*sweep_cmd) return cmd_sweep(o);
    if (*verify_cmd) return cmd_verify(o);
  } catch (const DescriptorError& e) {
    std::cerr << "invalid body descriptor: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
