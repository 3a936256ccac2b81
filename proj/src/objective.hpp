#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "geometry.hpp"

namespace ojamed {

struct Line {
  Vec anchor;
  Vec direction;  // nonzero
};

enum class LineSearch {
  kEvaluateEach,  // full objective at every crossing (reference behavior)
  kPrefixSweep,   // weighted-median sweep over the piecewise-linear restriction
};

// Sum of |h(x)| / k! over a prepared hyperplane list. With the full list for
// P_{n,k} this is the criterion whose minimizers form the median set.
double objective_from_hyperplanes(std::span<const Hyperplane> hps, std::span<const double> x,
                                  int k);

// Criterion over all k-tuples of observations (sum of simplex volumes of each
// tuple closed with x). Enumeration is capped.
double oja_objective(const Matrix& x_data, std::span<const double> x,
                     std::uint64_t cap = kDefaultEnumCap);

// Criterion over an explicit tuple list.
double oja_objective(const Matrix& x_data, std::span<const double> x,
                     std::span<const std::vector<int>> subsets);

// Monotone-decreasing transform of the criterion; only the induced ordering
// is meaningful, never values across different data sets.
double oja_depth(const Matrix& x_data, std::span<const double> x,
                 std::uint64_t cap = kDefaultEnumCap);

struct LineMinimum {
  Vec point;
  double objective = 0.0;
  double t = 0.0;
  std::vector<Vec> tied_points;  // filled only when tie collection is on
};

// Minimize the criterion along `line` over its crossing points with
// `crossings` (optionally restricted to a halfspace region). The criterion is
// evaluated through `objective_hps` (k! normalization applied); `crossings`
// may additionally contain synthetic bounding hyperplanes that never
// contribute to the criterion. Ties break toward the smallest line parameter.
// Returns nullopt when no crossing lies in the region.
std::optional<LineMinimum> minimize_on_line(std::span<const Hyperplane> crossings,
                                            std::span<const Hyperplane> objective_hps, int k,
                                            const Line& line,
                                            const Halfspaces* region = nullptr,
                                            LineSearch mode = LineSearch::kEvaluateEach,
                                            double tie_tol = -1.0);

}  // namespace ojamed
