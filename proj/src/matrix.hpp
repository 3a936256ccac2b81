#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ojamed {

using Vec = std::vector<double>;

// Dense row-major matrix. Data sets are stored as n x k with one observation
// per row; the same type backs the small square matrices of the determinant
// machinery.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---- vector helpers ----
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
Vec sub(std::span<const double> a, std::span<const double> b);
Vec add(std::span<const double> a, std::span<const double> b);
Vec scaled(std::span<const double> a, double s);
void axpy(Vec& y, double s, std::span<const double> x);  // y += s*x

// ---- small dense linear algebra ----

// Determinant by LU with partial pivoting; input is consumed by value.
double det_lu(Matrix a);

// Solve a x = b for square a; nullopt when a is (numerically) singular.
std::optional<Vec> solve(Matrix a, Vec b);

// A one-dimensional null direction of the (m x k) constraint matrix, m < k.
// Returns nullopt when the constraint rows are rank deficient (the null
// space then has dimension > 1 and no single line is determined).
std::optional<Vec> null_direction(Matrix constraints);

Matrix matmul(const Matrix& a, const Matrix& b);
Vec matvec(const Matrix& a, std::span<const double> x);
Matrix transpose(const Matrix& a);

Vec column_means(const Matrix& x);

// Sample covariance with 1/(n-1) normalization; n >= 2 required.
Matrix covariance(const Matrix& x);

// Symmetric eigendecomposition by cyclic Jacobi rotations. `vectors` has the
// eigenvectors as columns; values are unordered.
struct SymEigen {
  Vec values;
  Matrix vectors;
};
SymEigen sym_eigen(Matrix s);

// Symmetric R with R * S * R = I; throws SingularScatterError when the
// smallest eigenvalue is <= 1e-12 times the largest.
Matrix inverse_sqrt_psd(const Matrix& s);

// Symmetric square root of a PSD matrix (eigenvalues clamped at zero).
Matrix sqrt_psd(const Matrix& s);

// Moore-Penrose inverse of a symmetric PSD matrix via eigen-truncation;
// eigenvalues <= rel_tol * max eigenvalue are dropped. rank_out receives the
// retained rank when non-null.
Matrix pseudo_inverse_psd(const Matrix& s, int* rank_out = nullptr, double rel_tol = 1e-12);

}  // namespace ojamed
