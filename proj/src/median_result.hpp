#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "matrix.hpp"

namespace ojamed {

enum class MedianAlg {
  kExact,
  kBoundedExact,
  kGrid,
  kEvolutionary,
  kOracle,
};

const char* median_alg_name(MedianAlg alg);

struct MedianResult {
  Vec point;
  double objective = 0.0;
  std::string algorithm;
  int iterations = 0;
  std::uint64_t hyperplanes_used = 0;
  std::optional<double> region_volume_ratio;
  std::uint64_t seed = 0;
  // objective evaluated on a tuple sample instead of all tuples (only when
  // the full enumeration is over the cap)
  bool objective_sampled = false;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::string> notes;
};

// Optional per-solve instrumentation, filled when a caller passes it in.
struct SolveTrace {
  std::vector<double> objectives;  // accepted candidate objective sequence

  struct Cut {
    Hyperplane halfspace;  // feasible side: signed_eval >= 0
    Vec center;
  };
  std::vector<Cut> cuts;
  std::vector<double> volume_ratios;  // region bbox volume / initial, per cut
};

}  // namespace ojamed
