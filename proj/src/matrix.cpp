#include "matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace ojamed {

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec add(std::span<const double> a, std::span<const double> b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec scaled(std::span<const double> a, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

void axpy(Vec& y, double s, std::span<const double> x) {
  assert(y.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

namespace {

// LU factorization with partial pivoting, in place. Returns the number of
// row swaps, or -1 when a pivot column is exactly zero below the diagonal.
int lu_decompose(Matrix& a, std::vector<std::size_t>& perm) {
  const std::size_t n = a.rows();
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  int swaps = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) return -1;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      std::swap(perm[pivot], perm[col]);
      ++swaps;
    }
    const double d = a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / d;
      a(r, col) = f;
      for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return swaps;
}

}  // namespace

double det_lu(Matrix a) {
  assert(a.rows() == a.cols());
  std::vector<std::size_t> perm;
  const int swaps = lu_decompose(a, perm);
  if (swaps < 0) return 0.0;
  double d = (swaps % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < a.rows(); ++i) d *= a(i, i);
  return d;
}

std::optional<Vec> solve(Matrix a, Vec b) {
  assert(a.rows() == a.cols() && a.rows() == b.size());
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm;
  if (lu_decompose(a, perm) < 0) return std::nullopt;

  // condition guard: reject solves whose pivots collapse relative to scale
  double max_pivot = 0.0, min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::abs(a(i, i));
    max_pivot = std::max(max_pivot, p);
    min_pivot = std::min(min_pivot, p);
  }
  if (min_pivot <= 1e-13 * max_pivot) return std::nullopt;

  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= a(i, j) * x[j];
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= a(ii, j) * x[j];
    x[ii] /= a(ii, ii);
  }
  return x;
}

std::optional<Vec> null_direction(Matrix constraints) {
  const std::size_t m = constraints.rows();
  const std::size_t k = constraints.cols();
  assert(m < k);
  if (m == 0) {
    Vec d(k, 0.0);
    d[0] = 1.0;
    return d;
  }

  // row-echelon with column pivoting over the full row set
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, norm_inf(constraints.row(i)));
  if (scale == 0.0) return std::nullopt;
  for (std::size_t col = 0; col < k && row < m; ++col) {
    std::size_t pr = row;
    double best = std::abs(constraints(row, col));
    for (std::size_t r = row + 1; r < m; ++r) {
      const double v = std::abs(constraints(r, col));
      if (v > best) {
        best = v;
        pr = r;
      }
    }
    if (best <= 1e-13 * scale) continue;
    if (pr != row)
      for (std::size_t j = 0; j < k; ++j) std::swap(constraints(pr, j), constraints(row, j));
    const double d = constraints(row, col);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row) continue;
      const double f = constraints(r, col) / d;
      if (f != 0.0)
        for (std::size_t j = 0; j < k; ++j) constraints(r, j) -= f * constraints(row, j);
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (pivot_col.size() < m) return std::nullopt;  // rank deficient

  // pick the first free column and back-substitute
  std::vector<bool> is_pivot(k, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::size_t free_col = k;
  for (std::size_t c = 0; c < k; ++c)
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  Vec dir(k, 0.0);
  dir[free_col] = 1.0;
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t pc = pivot_col[r];
    dir[pc] = -constraints(r, free_col) / constraints(r, pc);
  }
  const double n2 = norm2(dir);
  for (double& v : dir) v /= n2;
  return dir;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.rows());
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double v = a(i, l);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += v * b(l, j);
    }
  return r;
}

Vec matvec(const Matrix& a, std::span<const double> x) {
  assert(a.cols() == x.size());
  Vec r(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) r[i] = dot(a.row(i), x);
  return r;
}

Matrix transpose(const Matrix& a) {
  Matrix r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  return r;
}

Vec column_means(const Matrix& x) {
  Vec m(x.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) axpy(m, 1.0, x.row(i));
  for (double& v : m) v /= static_cast<double>(x.rows());
  return m;
}

Matrix covariance(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t k = x.cols();
  if (n < 2) throw EmptyInputError("covariance requires at least two observations");
  const Vec mu = column_means(x);
  Matrix s(k, k);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec c = sub(x.row(i), mu);
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t q = 0; q < k; ++q) s(p, q) += c[p] * c[q];
  }
  const double f = 1.0 / static_cast<double>(n - 1);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q) s(p, q) *= f;
  return s;
}

SymEigen sym_eigen(Matrix s) {
  assert(s.rows() == s.cols());
  const std::size_t n = s.rows();
  Matrix v = Matrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
    if (off <= 1e-30 * (1.0 + std::abs(s(0, 0)))) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = s(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double sip = s(i, p), siq = s(i, q);
          s(i, p) = c * sip - sn * siq;
          s(i, q) = sn * sip + c * siq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double spj = s(p, j), sqj = s(q, j);
          s(p, j) = c * spj - sn * sqj;
          s(q, j) = sn * spj + c * sqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - sn * viq;
          v(i, q) = sn * vip + c * viq;
        }
      }
  }
  SymEigen out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = s(i, i);
  out.vectors = std::move(v);
  return out;
}

namespace {

Matrix eigen_map(const Matrix& s, double (*f)(double)) {
  const SymEigen e = sym_eigen(s);
  const std::size_t n = s.rows();
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l)
        acc += e.vectors(i, l) * f(e.values[l]) * e.vectors(j, l);
      r(i, j) = acc;
    }
  return r;
}

}  // namespace

Matrix inverse_sqrt_psd(const Matrix& s) {
  const SymEigen e = sym_eigen(s);
  double lmax = 0.0, lmin = std::numeric_limits<double>::infinity();
  for (double l : e.values) {
    lmax = std::max(lmax, l);
    lmin = std::min(lmin, l);
  }
  if (lmax <= 0.0 || lmin <= 1e-12 * lmax)
    throw SingularScatterError("scatter matrix is singular or indefinite");
  const std::size_t n = s.rows();
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l)
        acc += e.vectors(i, l) / std::sqrt(e.values[l]) * e.vectors(j, l);
      r(i, j) = acc;
    }
  return r;
}

Matrix sqrt_psd(const Matrix& s) {
  return eigen_map(s, +[](double l) { return std::sqrt(std::max(l, 0.0)); });
}

Matrix pseudo_inverse_psd(const Matrix& s, int* rank_out, double rel_tol) {
  const SymEigen e = sym_eigen(s);
  const std::size_t n = s.rows();
  double lmax = 0.0;
  for (double l : e.values) lmax = std::max(lmax, l);
  const double thr = rel_tol * lmax;
  int rank = 0;
  Matrix r(n, n);
  for (std::size_t l = 0; l < n; ++l) {
    if (e.values[l] <= thr || e.values[l] <= 0.0) continue;
    ++rank;
    const double inv = 1.0 / e.values[l];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) += e.vectors(i, l) * inv * e.vectors(j, l);
  }
  if (rank_out) *rank_out = rank;
  return r;
}

}  // namespace ojamed
