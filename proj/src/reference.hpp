#pragma once

#include <span>

#include "matrix.hpp"

namespace ojamed {

// Univariate median set [lower, upper]; degenerate for odd sample sizes. Any
// point of the interval is a minimizer of the absolute-deviation sum; the
// single-point median is the interval midpoint.
struct MedianInterval {
  double lower = 0.0;
  double upper = 0.0;
};

MedianInterval univariate_median_interval(std::span<const double> sample);
double univariate_median(std::span<const double> sample);

// Componentwise univariate median.
Vec marginal_median(const Matrix& x);

struct SpatialMedianResult {
  Vec point;
  int iterations = 0;
  bool converged = false;
};

// Minimizer of the Euclidean distance sum, by iteratively reweighted
// averaging with the standard correction when an iterate lands on a data
// point. Returns the best iterate with converged=false after max_iter.
SpatialMedianResult spatial_median(const Matrix& x, double tol = 1e-10, int max_iter = 1000);

double distance_sum(const Matrix& x, std::span<const double> p);

}  // namespace ojamed
