#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace ojamed {

// Default cap on subset enumeration. A 100 x 5 data set already needs
// binomial(100,5) = 75,287,520 spanned hyperplanes, so exhaustion is guarded
// explicitly instead of silently eating memory.
inline constexpr std::uint64_t kDefaultEnumCap = 50'000'000;

// Affine functional c0 + c.x equal to the determinant of the bordered point
// matrix (ones row on top, spanning points as columns) as a function of its
// last column. Degenerate spanning sets are kept as exact zero functionals.
struct Hyperplane {
  double offset = 0.0;
  Vec normal;
  std::vector<int> source;  // spanning observation indices; empty = synthetic

  double signed_eval(std::span<const double> x) const { return offset + dot(normal, x); }
  bool degenerate() const {
    for (double v : normal)
      if (v != 0.0) return false;
    return true;
  }

  // sign of the functional with points on the hyperplane mapped to exactly
  // zero: an evaluation at a spanning point leaves ~1e-16 residue whose sign
  // is noise, so anything below 1e-12 of the functional's scale counts as on
  // the hyperplane
  int eval_sign(std::span<const double> x) const {
    const double v = signed_eval(x);
    const double scale = std::abs(offset) + norm2(normal) * norm2(x);
    if (std::abs(v) <= 1e-12 * scale) return 0;
    return v > 0.0 ? 1 : -1;
  }
};

// Hyperplane spanned by k points of dimension k (one point per row).
// Coefficients come from cofactor expansion of the bordered matrix along its
// last column; each cofactor determinant is evaluated by LU with partial
// pivoting.
Hyperplane hyperplane_from_points(const Matrix& points);

// |det(bordered matrix)| / k! for k+1 points of dimension k (one per row);
// zero iff the points are affinely dependent.
double simplex_volume(const Matrix& points);

// Gradient of x -> |h.signed_eval(x)|: sgn(eval) * normal, and the zero
// vector on the hyperplane itself (the derivative of |.| is defined as zero
// at the origin).
Vec abs_det_gradient(const Hyperplane& h, std::span<const double> x);

double factorial(int k);

// Exact binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(int n, int m);

// Throws EnumerationCapError (message carries the exact count) when
// binomial(n, m) exceeds `cap`.
void check_enumeration_cap(int n, int m, std::uint64_t cap,
                           const std::string& what = "subset enumeration");

// Visit all m-subsets of {0,...,n-1} in lexicographic order.
template <typename F>
void for_each_subset(int n, int m, F&& fn) {
  if (m < 0 || m > n) return;
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  while (true) {
    fn(static_cast<const std::vector<int>&>(idx));
    int pos = m - 1;
    while (pos >= 0 && idx[pos] == n - m + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// One uniformly random m-subset of {0,...,n-1}, sorted ascending. Draws are
// independent across calls (duplicates across draws allowed).
std::vector<int> sample_subset(int n, int m, Rng& rng);

// Rows of `x` selected by `idx`.
Matrix gather_rows(const Matrix& x, std::span<const int> idx);

// Intersection of halfspaces, each the nonnegative side of its hyperplane.
struct Halfspaces {
  std::vector<Hyperplane> bounds;

  bool contains(std::span<const double> x, double rel_slack = 1e-9) const {
    for (const Hyperplane& b : bounds) {
      const double scale = std::abs(b.offset) + norm2(b.normal) * norm2(x);
      if (b.signed_eval(x) < -rel_slack * scale) return false;
    }
    return true;
  }
};

// Data validation shared by the entry points: finite entries, n >= 1, k >= 1.
void validate_data(const Matrix& x);

}  // namespace ojamed
