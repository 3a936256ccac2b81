#pragma once

#include <cstdint>

#include "median_result.hpp"
#include "objective.hpp"

namespace ojamed {

struct GridConfig {
  int spacing_divisor = 10;         // initial knot distance = data range / divisor
  double spacing_threshold = 0.0;   // 0: 1e-3 * data range
  double alpha = 0.05;              // knot test significance level
  int hyperplanes_per_round = 50;   // initial pool and minimum growth per round
  int max_inner_iterations = 5000;  // drops to 100 once the cap is hit
  int pool_max = 8'000;            // ceiling of the growing hyperplane pool
  std::uint64_t max_knots = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t enum_cap = kDefaultEnumCap;
};

struct EvoConfig {
  double sigma_init = 1.0;        // initial mutation variance (whitened scale)
  int mutations_per_step = 10;
  int sigma_ada = 10;             // steps between variance adaptations
  double ada_factor = 1.5;        // kappa > 1
  double sigma_log10_dec = 4.0;   // stop once log10(var_init) - log10(var) exceeds this
  std::uint64_t n_subsets_used = 0;  // 0: min(1000, binomial(n,k))
  bool use_all_subsets = false;
  int max_steps = 10'000;
  std::uint64_t seed = 0;
  std::uint64_t enum_cap = kDefaultEnumCap;
};

enum class KnotDecision { kKeep, kReject };

struct KnotTest {
  KnotDecision decision = KnotDecision::kKeep;
  double statistic = 0.0;
};

// Mean-gradient test of a grid knot against a hyperplane sample: with
// v_j the gradient of |h_j(.)| at g, Q = m * vbar^T S^+ vbar is compared to
// the upper-alpha chi-square quantile (`chi2_upper`). All-zero gradients keep
// the knot. Needs at least k+1 hyperplanes.
KnotTest knot_test(std::span<const Hyperplane> sample, std::span<const double> g,
                   double chi2_upper);

namespace detail {
// One elimination round: survivors failing the test are removed; if the round
// would remove every knot, the previous set is kept unchanged. Statistics of
// the round are written to `stats` (aligned with the returned set).
std::vector<std::size_t> grid_iteration(const std::vector<Vec>& knots,
                                        const std::vector<std::size_t>& survivors,
                                        std::span<const Hyperplane> sample, double chi2_upper,
                                        std::vector<double>& stats);
}  // namespace detail

MedianResult grid_median(const Matrix& x_data, const GridConfig& cfg = {});

// Evolution strategy over a fixed tuple sample of the criterion, without the
// whitening transform.
MedianResult evolutionary_median_raw(const Matrix& x_data, const EvoConfig& cfg = {},
                                     SolveTrace* trace = nullptr);

// Whitening wrapper: solve on (X - mean) R with R = cov(X)^(-1/2), transform
// back. Falls back to the raw solver when the scatter is singular.
MedianResult evolutionary_median(const Matrix& x_data, const EvoConfig& cfg = {},
                                 SolveTrace* trace = nullptr);

// ---- umbrella entry point used by the C API and the repeat-averaging ----

struct MedianOptions {
  MedianAlg algorithm = MedianAlg::kEvolutionary;
  std::uint64_t seed = 0;
  int sp = 1;      // independent runs averaged into the result
  bool raw = false;  // evolutionary: skip whitening
  std::uint64_t enum_cap = kDefaultEnumCap;
  int max_rounds = 0;
  LineSearch line_search = LineSearch::kEvaluateEach;
  double volume_ratio = 1e-8;
  GridConfig grid;
  EvoConfig evo;
};

MedianResult compute_median(const Matrix& x_data, const MedianOptions& opts = {});

// Componentwise mean of sp independent seeded runs, criterion re-evaluated at
// the averaged point.
MedianResult median_averaged(const Matrix& x_data, const MedianOptions& opts);

}  // namespace ojamed
