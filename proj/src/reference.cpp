#include "reference.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "errors.hpp"

namespace ojamed {

MedianInterval univariate_median_interval(std::span<const double> sample) {
  if (sample.empty()) throw EmptyInputError("median of an empty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  if (n % 2 == 1) {
    const double m = s[n / 2];
    return {m, m};
  }
  return {s[n / 2 - 1], s[n / 2]};
}

double univariate_median(std::span<const double> sample) {
  const MedianInterval iv = univariate_median_interval(sample);
  return 0.5 * (iv.lower + iv.upper);
}

Vec marginal_median(const Matrix& x) {
  if (x.rows() == 0) throw EmptyInputError("marginal median of an empty sample");
  Vec out(x.cols());
  std::vector<double> col(x.rows());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    for (std::size_t i = 0; i < x.rows(); ++i) col[i] = x(i, j);
    out[j] = univariate_median(col);
  }
  return out;
}

double distance_sum(const Matrix& x, std::span<const double> p) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) s += norm2(sub(x.row(i), p));
  return s;
}

SpatialMedianResult spatial_median(const Matrix& x, double tol, int max_iter) {
  if (x.rows() == 0) throw EmptyInputError("spatial median of an empty sample");
  const std::size_t n = x.rows();
  const std::size_t k = x.cols();

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, norm_inf(x.row(i)));
  const double anchor_eps = 1e-12 * (scale + 1.0);

  SpatialMedianResult res;
  res.point = column_means(x);

  for (int it = 1; it <= max_iter; ++it) {
    res.iterations = it;

    // weighted average of points off the iterate; anchor weight counts
    // coincident data points
    Vec num(k, 0.0);
    double den = 0.0;
    Vec pull(k, 0.0);  // sum of unit directions away from the iterate
    double anchor_weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec d = sub(x.row(i), res.point);
      const double dist = norm2(d);
      if (dist <= anchor_eps) {
        anchor_weight += 1.0;
        continue;
      }
      const double w = 1.0 / dist;
      axpy(num, w, x.row(i));
      den += w;
      axpy(pull, w, d);
    }

    if (den == 0.0) {
      res.converged = true;  // all points coincide with the iterate
      return res;
    }

    Vec target = scaled(num, 1.0 / den);
    Vec next;
    if (anchor_weight > 0.0) {
      const double pull_norm = norm2(pull);
      if (pull_norm <= anchor_weight) {
        res.converged = true;  // the anchored point is optimal
        return res;
      }
      const double shrink = std::min(1.0, anchor_weight / pull_norm);
      next = scaled(target, 1.0 - shrink);
      axpy(next, shrink, res.point);
    } else {
      next = std::move(target);
    }

    const double step = norm2(sub(next, res.point));
    res.point = std::move(next);
    if (step < tol * (1.0 + scale)) {
      res.converged = true;
      return res;
    }
  }
  return res;  // best iterate, flagged as not converged
}

}  // namespace ojamed
