#pragma once

#include <cstdint>
#include <variant>

#include "median_result.hpp"
#include "objective.hpp"
#include "scores.hpp"

namespace ojamed {

struct HyperplaneSet {
  std::vector<Hyperplane> all;  // one per k-tuple, lexicographic; degenerate kept as zeros
  std::uint64_t degenerate = 0;
  std::uint64_t distinct = 0;         // coincident functionals counted once
  std::uint64_t max_multiplicity = 1;  // largest coincidence group
};

// All (k-1)-dimensional hyperplanes spanned by k-tuples of observations.
// Degenerate tuples stay in the list as zero functionals (they contribute
// nothing to the criterion and are skipped as crossings) and are reported in
// the diagnostics together with coincidence multiplicities.
HyperplaneSet enumerate_hyperplanes(const Matrix& x_data, std::uint64_t cap = kDefaultEnumCap);

// Intersection of halfspaces with its vertex cache. Vertices are the
// feasible solutions of k-subsets of bound equalities.
struct Region {
  Halfspaces halfspaces;
  std::vector<Vec> vertices;
  bool flat = false;  // some data coordinate had zero range

  double scale = 1.0;  // coordinate magnitude for tolerance scaling
};

Region region_init_bbox(const Matrix& x_data);

std::vector<Vec> region_vertices(const std::vector<Hyperplane>& bounds, double scale);

// Volume of the axis-aligned bounding box of the vertex set.
double region_bbox_volume(const Region& r);

struct MedianFound {
  Vec center;
};
struct EmptyRegion {};

// One reduction step: cut at the vertex mean with the negative rank
// direction, re-enumerate vertices, and drop bounds no longer touching any
// vertex. `hps` is the full data hyperplane list backing the rank. The
// applied cut and its center are reported through the optional out-params.
std::variant<Region, MedianFound, EmptyRegion> region_cut(const Region& r,
                                                          std::span<const Hyperplane> hps,
                                                          int n, int k,
                                                          Hyperplane* cut_out = nullptr,
                                                          Vec* center_out = nullptr);

struct SolverOptions {
  std::uint64_t enum_cap = kDefaultEnumCap;
  int max_rounds = 0;  // 0: number of observations
  LineSearch line_search = LineSearch::kEvaluateEach;
  // (k-1)-subsets of the hyperplanes through a candidate tried per round;
  // beyond this they are sampled seed-deterministically
  std::uint64_t max_lines_per_candidate = 50'000;
  std::uint64_t seed = 0;
  // bounded variant
  double volume_ratio = 1e-8;
  int max_cuts = 500;
};

// Candidate walk along intersection lines of data-spanned hyperplanes,
// starting from the observation closest to the mean; returns a vertex of the
// median set.
MedianResult exact_median(const Matrix& x_data, const SolverOptions& opts = {},
                          SolveTrace* trace = nullptr);

// Same walk restricted to a rank-cut region whose bounding-box volume has
// been driven to `volume_ratio` of the initial box; the bounds join the
// crossing set. Reaches the same criterion value as the unbounded walk.
MedianResult bounded_exact_median(const Matrix& x_data, const SolverOptions& opts = {},
                                  SolveTrace* trace = nullptr);

// Breadth-first exploration of equal-criterion vertices reachable through
// tied line minima; intended for small inputs.
std::vector<Vec> median_set_vertices(const Matrix& x_data, const SolverOptions& opts = {});

}  // namespace ojamed
