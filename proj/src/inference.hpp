#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "scores.hpp"

namespace ojamed {

// Upper-tail probability of the chi-square distribution, absolute error
// below 1e-10; q >= 0, df >= 1.
double chi_square_sf(double q, int df);

// Upper quantile: smallest q with chi_square_sf(q, df) <= p_upper.
double chi_square_quantile_upper(double p_upper, int df);

enum class TestMethod { kAsymptotic, kPermutation };

struct TestResult {
  double statistic = 0.0;  // Q
  int df = 0;
  double p_value = 1.0;
  TestMethod method = TestMethod::kAsymptotic;
  int replications = 0;  // 0 for the asymptotic method
  std::uint64_t seed = 0;
  ScoreKind score_kind = ScoreKind::kSign;
  std::vector<double> null_value;  // tested location; empty for C-sample
  int groups = 1;
  bool singular_score_cov = false;  // score covariance was rank deficient
};

// Location test of H0: center = mu0 with sign or signed-rank scores of the
// shifted sample. Permutation replicates flip score-row signs; replicate b
// derives its randomness from (seed, b).
TestResult one_sample_test(const Matrix& x_data, std::span<const double> mu0, ScoreKind kind,
                           TestMethod method, int replications = 1000, std::uint64_t seed = 0,
                           std::uint64_t cap = kDefaultEnumCap);

// Equal-locations test across C >= 2 groups with sign or rank scores of the
// combined sample. Permutation replicates permute the fixed score rows across
// the group labels. Sign scores center at the combined-sample median resolved
// from `center` (default: the usual center specification).
TestResult c_sample_test(const Matrix& x_data, std::span<const int> labels, ScoreKind kind,
                         TestMethod method, int replications = 1000, std::uint64_t seed = 0,
                         std::uint64_t cap = kDefaultEnumCap,
                         const std::optional<CenterSpec>& center = std::nullopt);

}  // namespace ojamed
