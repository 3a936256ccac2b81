#include <stdexcept>

#include "approx.hpp"
#include "reference.hpp"
#include "scores.hpp"

namespace ojamed {

Vec resolve_center(const Matrix& x_data, const CenterSpec& spec, ScoreFamily family,
                   std::uint64_t cap) {
  CenterSpec::Kind kind = spec.kind;
  if (kind == CenterSpec::Kind::kDefault) {
    switch (family) {
      case ScoreFamily::kOja: kind = CenterSpec::Kind::kOjaMedian; break;
      case ScoreFamily::kMarginal: kind = CenterSpec::Kind::kCompMedian; break;
      case ScoreFamily::kSpatial: kind = CenterSpec::Kind::kSpatialMedian; break;
    }
  }
  switch (kind) {
    case CenterSpec::Kind::kOjaMedian: {
      MedianOptions opts;
      opts.algorithm = spec.median_alg;
      opts.seed = spec.median_seed;
      opts.enum_cap = cap;
      return compute_median(x_data, opts).point;
    }
    case CenterSpec::Kind::kCompMedian:
      return marginal_median(x_data);
    case CenterSpec::Kind::kSpatialMedian:
      return spatial_median(x_data).point;
    case CenterSpec::Kind::kMean:
      return column_means(x_data);
    case CenterSpec::Kind::kExplicit:
      if (spec.point.size() != x_data.cols())
        throw std::invalid_argument("explicit center has wrong dimension");
      return spec.point;
    case CenterSpec::Kind::kDefault:
      break;
  }
  throw std::invalid_argument("unresolved center specification");
}

}  // namespace ojamed
