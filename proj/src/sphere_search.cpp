#include "sinebody/sphere_search.hpp"

#include "sinebody/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

namespace sinebody {

namespace {

ScanSet build_scan_set(int n) {
  if (n == 2) {
    const SphericalRule r = build_rule(2, 256, RuleKind::UniformAngle);
    return {r.nodes, 2.0 * std::numbers::pi / 256.0};
  }
  if (n == 3) {
    const SphericalRule r = build_rule(3, 24, RuleKind::GaussProduct);
    return {r.nodes, std::numbers::pi / 24.0};
  }
  const int count = 4000;
  const SphericalRule r = build_rule(n, count, RuleKind::MonteCarlo, 7);
  // Mean nearest-neighbour angle scales like (area / count)^(1/(n-1)).
  const double area = n * unit_ball_volume(n);
  return {r.nodes, 1.5 * std::pow(area / count, 1.0 / (n - 1))};
}

// Great-circle step from v along the unit tangent t.
Vec along(const Vec& v, const Vec& t, double angle) {
  Vec w = std::cos(angle) * v + std::sin(angle) * t;
  return w / w.norm();
}

// Maximizes f over the square [-w, w]^2 in the chart (s, t) -> v + s a + t b
// by golden-section search over s of the inner maximum over t. Line searches
// along great circles stall on ridges where two smooth pieces meet; the
// nested search does not, as long as f is unimodal on the square.
SearchResult nested_plane_max(const SphereFunction& f, const Vec& v, const Vec& a, const Vec& b,
                              double w, double xtol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const int iterations = static_cast<int>(std::ceil(std::log(2.0 * w / xtol) / std::log(1.0 / inv_phi)));
  auto point = [&](double s, double t) { return Vec((v + s * a + t * b).normalized()); };
  double best_t = 0.0;
  auto inner = [&](double s) {
    const auto [t, value] =
        golden_section_max([&](double t) { return f(point(s, t)); }, -w, w, iterations, xtol);
    best_t = t;
    return value;
  };
  const auto [s, value] = golden_section_max(inner, -w, w, iterations, xtol);
  inner(s);
  return {value, point(s, best_t)};
}

// Coarse nested search over the whole bracket, recentred while the maximum
// sits on the edge of the square, then a fine search around the result.
SearchResult ridge_polish(const SphereFunction& f, SearchResult best, double bracket,
                          CounterRng& rng) {
  const int n = static_cast<int>(best.argmax.size());
  if (n < 3) return best;
  auto pass = [&](double w, double xtol) {
    Mat tangents = orthonormal_complement(best.argmax);
    if (n > 3) tangents = tangents * random_orthogonal(n - 1, rng);
    const SearchResult r = nested_plane_max(f, best.argmax, tangents.col(0), tangents.col(1), w, xtol);
    const double moved = std::acos(std::clamp(r.argmax.dot(best.argmax), -1.0, 1.0));
    if (r.value > best.value) best = r;
    return moved;
  };
  const double coarse = 1e-4;
  const int planes = n == 3 ? 1 : n - 1;
  for (int i = 0; i < 3 * planes; ++i) {
    if (pass(bracket, coarse) < 0.9 * bracket && i + 1 >= planes) break;
  }
  const double fine = 100.0 * coarse;
  for (int i = 0; i < 4 * planes; ++i) {
    if (pass(fine, 1e-9) < 0.9 * fine && i + 1 >= planes) break;
  }
  return best;
}

}  // namespace

const ScanSet& scan_set(int n) {
  if (n < 2) throw std::invalid_argument("scan_set: dimension must be at least 2");
  static std::mutex mutex;
  static std::map<int, ScanSet> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_scan_set(n)).first;
  return it->second;
}

std::pair<double, double> golden_section_max(const std::function<double(double)>& g, double lo,
                                             double hi, int iterations, double xtol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int i = 0; i < iterations && (b - a) > xtol; ++i) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return gc >= gd ? std::make_pair(c, gc) : std::make_pair(d, gd);
}

SearchResult refine_on_sphere(const SphereFunction& f, const Vec& start, double start_value,
                              double bracket, const SearchSettings& settings) {
  const int n = static_cast<int>(start.size());
  SearchResult best{start_value, start};
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double width = bracket;
  int quiet_rounds = 0;
  CounterRng rng(0x5eed);
  // The ridge polish finishes the job, so the line searches only need to
  // get close.
  const int rounds = settings.ridge_polish ? std::min(settings.max_rounds, 6) : settings.max_rounds;
  const int iterations =
      settings.ridge_polish ? std::min(settings.golden_iterations, 20) : settings.golden_iterations;
  for (int round = 0; round < rounds; ++round) {
    Mat tangents = orthonormal_complement(best.argmax);
    if (n == 3) {
      const double a = round * golden_angle;
      const Vec t1 = std::cos(a) * tangents.col(0) + std::sin(a) * tangents.col(1);
      const Vec t2 = -std::sin(a) * tangents.col(0) + std::cos(a) * tangents.col(1);
      tangents.col(0) = t1;
      tangents.col(1) = t2;
    } else if (n > 3 && round > 0) {
      tangents = tangents * random_orthogonal(n - 1, rng);
    }
    const double before = best.value;
    double largest_step = 0.0;
    for (Eigen::Index k = 0; k < tangents.cols(); ++k) {
      const Vec origin = best.argmax;
      const Vec t = tangents.col(k);
      auto line = [&](double s) { return f(along(origin, t, s)); };
      const auto [s, value] =
          golden_section_max(line, -width, width, iterations, 1e-13);
      if (value > best.value) {
        best.value = value;
        best.argmax = along(origin, t, s);
        largest_step = std::max(largest_step, std::abs(s));
      }
    }
    const double gain = best.value - before;
    if (gain <= settings.tolerance * std::max(1.0, std::abs(best.value))) {
      if (++quiet_rounds >= 3) break;
    } else {
      quiet_rounds = 0;
    }
    // Shrink the bracket around the incumbent once steps become small.
    width = std::clamp(4.0 * largest_step, 1e-9, bracket);
    if (largest_step == 0.0) width = std::max(1e-9, 0.5 * width);
  }
  return best;
}

SearchResult maximize_on_sphere(const SphereFunction& f, const Mat& candidates, const Vec& values,
                                double bracket, const SearchSettings& settings) {
  if (candidates.cols() == 0) throw std::invalid_argument("maximize_on_sphere: no candidates");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(candidates.cols()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto higher = [&](Eigen::Index a, Eigen::Index b) {
    return values(a) > values(b) || (values(a) == values(b) && a < b);
  };
  // Distinct starts almost always sit near the top, so sort a prefix first.
  const auto prefix = std::min<std::size_t>(order.size(), 64);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(prefix), order.end(),
                    higher);
  // Starting points must be separated by more than the bracket; antipodes
  // count as duplicates because every objective here is even.
  const double same = std::cos(2.0 * bracket);
  std::vector<Eigen::Index> starts;
  auto collect = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = from; k < to && static_cast<int>(starts.size()) < settings.top_k; ++k) {
      const Eigen::Index i = order[k];
      const bool distinct = std::none_of(starts.begin(), starts.end(), [&](Eigen::Index j) {
        return std::abs(candidates.col(i).dot(candidates.col(j))) > same;
      });
      if (distinct) starts.push_back(i);
    }
  };
  collect(0, prefix);
  if (static_cast<int>(starts.size()) < settings.top_k && prefix < order.size()) {
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(prefix), order.end(), higher);
    collect(prefix, order.size());
  }
  SearchResult best{-std::numeric_limits<double>::infinity(), candidates.col(order.front())};
  for (const Eigen::Index i : starts) {
    const SearchResult r = refine_on_sphere(f, candidates.col(i), values(i), bracket, settings);
    if (r.value > best.value) best = r;
  }
  if (settings.ridge_polish) {
    CounterRng rng(0x9011);
    best = ridge_polish(f, best, bracket, rng);
  }
  return best;
}

}  // namespace sinebody
