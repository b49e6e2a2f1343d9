#pragma once

#include "sinebody/core.hpp"

#include <functional>
#include <vector>

namespace sinebody {

/// Settings for maximizing a function on S^{n-1}: coarse scan, then
/// golden-section line searches along great circles through the incumbent.
struct SearchSettings {
  int top_k = 3;               ///< distinct starting points refined
  int max_rounds = 40;         ///< rounds of tangent line searches
  int golden_iterations = 40;  ///< cap per line search
  double tolerance = 1e-12;    ///< relative objective improvement to stop
  bool ridge_polish = false;   ///< finish with nested 2D searches (non-smooth objectives)
};

/// Coarse node set for the scan phase, one per dimension.
struct ScanSet {
  Mat nodes;       ///< unit vectors as columns
  double spacing;  ///< typical angular distance between neighbours
};

/// Shared scan set for dimension n (cached; safe to call concurrently).
const ScanSet& scan_set(int n);

struct SearchResult {
  double value = 0.0;
  Vec argmax;
};

using SphereFunction = std::function<double(const Vec&)>;

/// Local refinement from `start` with line searches of half-width `bracket`.
SearchResult refine_on_sphere(const SphereFunction& f, const Vec& start,
                              double start_value, double bracket,
                              const SearchSettings& settings = {});

/// Picks the top_k best candidates (columns of `candidates` with values
/// `values`) at mutually distinct positions and refines each.
SearchResult maximize_on_sphere(const SphereFunction& f, const Mat& candidates,
                                const Vec& values, double bracket,
                                const SearchSettings& settings = {});

/// Maximizes a scalar function on [lo, hi]; returns (argmax, value).
std::pair<double, double> golden_section_max(const std::function<double(double)>& g,
                                             double lo, double hi, int iterations,
                                             double xtol = 1e-12);

}  // namespace sinebody
