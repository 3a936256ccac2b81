#include "geometry.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace ojamed {

namespace {

// k x k minor of the (k+1) x k column block of the bordered matrix with row
// `skip` removed. Column j of the block is (1, p_j).
Matrix bordered_minor(const Matrix& points, std::size_t skip) {
  const std::size_t k = points.cols();
  Matrix m(k, k);
  std::size_t r = 0;
  for (std::size_t row = 0; row <= k; ++row) {
    if (row == skip) continue;
    for (std::size_t j = 0; j < k; ++j)
      m(r, j) = (row == 0) ? 1.0 : points(j, row - 1);
    ++r;
  }
  return m;
}

}  // namespace

Hyperplane hyperplane_from_points(const Matrix& points) {
  const std::size_t k = points.cols();
  assert(points.rows() == k);
  Hyperplane h;
  h.normal.assign(k, 0.0);

  double scale = 0.0;
  for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, norm_inf(points.row(i)));

  const double off_sign = (k % 2 == 0) ? 1.0 : -1.0;  // (-1)^(0+k)
  h.offset = off_sign * det_lu(bordered_minor(points, 0));
  double sign = -off_sign;  // (-1)^(1+k)
  for (std::size_t i = 1; i <= k; ++i) {
    h.normal[i - 1] = sign * det_lu(bordered_minor(points, i));
    sign = -sign;
  }

  // Degeneracy: the normal components are the k x k minors through the ones
  // row, so they scale like (max entry)^(k-1). Below 1e-12 of that the
  // spanning set is treated as affinely dependent and the functional zeroed.
  // (k = 1 has a constant normal of 1 and is never degenerate.)
  const double thr = 1e-12 * std::pow(scale, static_cast<double>(k - 1));
  if (norm_inf(h.normal) <= thr) {
    h.offset = 0.0;
    std::fill(h.normal.begin(), h.normal.end(), 0.0);
  }
  return h;
}

double simplex_volume(const Matrix& points) {
  const std::size_t k = points.cols();
  assert(points.rows() == k + 1);
  Matrix b(k + 1, k + 1);
  for (std::size_t j = 0; j <= k; ++j) {
    b(0, j) = 1.0;
    for (std::size_t i = 1; i <= k; ++i) b(i, j) = points(j, i - 1);
  }
  return std::abs(det_lu(std::move(b))) / factorial(static_cast<int>(k));
}

Vec abs_det_gradient(const Hyperplane& h, std::span<const double> x) {
  switch (h.eval_sign(x)) {
    case 1: return h.normal;
    case -1: return scaled(h.normal, -1.0);
    default: return Vec(h.normal.size(), 0.0);
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::uint64_t binomial(int n, int m) {
  if (m < 0 || m > n) return 0;
  m = std::min(m, n - m);
  unsigned __int128 c = 1;
  for (int i = 1; i <= m; ++i) {
    c = c * static_cast<unsigned>(n - m + i) / static_cast<unsigned>(i);
    if (c > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

void check_enumeration_cap(int n, int m, std::uint64_t cap, const std::string& what) {
  const std::uint64_t count = binomial(n, m);
  if (count > cap) {
    throw EnumerationCapError(
        what + " needs " + std::to_string(count) + " index tuples (binomial(" +
            std::to_string(n) + "," + std::to_string(m) + ")), above the cap of " +
            std::to_string(cap),
        count, cap);
  }
}

std::vector<int> sample_subset(int n, int m, Rng& rng) {
  assert(0 <= m && m <= n);
  // Floyd's algorithm: uniform over all m-subsets.
  std::vector<int> out;
  out.reserve(m);
  for (int j = n - m; j < n; ++j) {
    const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
    if (std::find(out.begin(), out.end(), t) == out.end())
      out.push_back(t);
    else
      out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Matrix gather_rows(const Matrix& x, std::span<const int> idx) {
  Matrix r(idx.size(), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = x(static_cast<std::size_t>(idx[i]), j);
  return r;
}

void validate_data(const Matrix& x) {
  if (x.rows() == 0 || x.cols() == 0) throw EmptyInputError("data matrix is empty");
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (!std::isfinite(x(i, j)))
        throw std::invalid_argument("data matrix has a non-finite entry at row " +
                                    std::to_string(i + 1));
}

}  // namespace ojamed
