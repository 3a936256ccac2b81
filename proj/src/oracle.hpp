#pragma once

#include <cstdint>
#include <vector>

#include "matrix.hpp"
#include "geometry.hpp"

namespace ojamed {

struct BruteForceResult {
  std::vector<Vec> points;  // all global minimizers, deduplicated, sorted
  double objective = 0.0;
  std::uint64_t candidates = 0;  // intersection vertices evaluated
};

// Ground truth for small inputs: evaluate the full criterion at every
// intersection of k data-spanned hyperplanes and keep the global minimizers.
// Guarded by `max_solves` on the number of k-subsets of hyperplanes.
BruteForceResult brute_force_median(const Matrix& x_data, std::uint64_t max_solves = 10'000'000,
                                    std::uint64_t enum_cap = kDefaultEnumCap);

}  // namespace ojamed
