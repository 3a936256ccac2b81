#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "exact.hpp"
#include "oracle.hpp"
#include "reference.hpp"
#include "matrix.hpp"
#include "scores.hpp"
#include "test_util.hpp"

using namespace ojamed;
using testutil::column;
using testutil::from_rows;
using testutil::triangle;

namespace {

// independent oracle for the sign score: central differences of the averaged
// absolute bordered determinant, assembled per tuple from scratch
Vec sign_by_finite_differences(const Matrix& x, std::span<const double> p,
                               std::span<const double> m) {
  const int n = static_cast<int>(x.rows());
  const int k = static_cast<int>(x.cols());
  const double step = 1e-7;
  const auto avg_absdet = [&](const Vec& at) {
    double s = 0.0;
    for_each_subset(n, k - 1, [&](const std::vector<int>& idx) {
      Matrix b(static_cast<std::size_t>(k) + 1, static_cast<std::size_t>(k) + 1);
      for (int c = 0; c <= k; ++c) b(0, static_cast<std::size_t>(c)) = 1.0;
      for (int r = 1; r <= k; ++r) {
        b(static_cast<std::size_t>(r), 0) = m[static_cast<std::size_t>(r - 1)];
        for (std::size_t c = 0; c < idx.size(); ++c)
          b(static_cast<std::size_t>(r), c + 1) =
              x(static_cast<std::size_t>(idx[c]), static_cast<std::size_t>(r - 1));
        b(static_cast<std::size_t>(r), static_cast<std::size_t>(k)) = at[static_cast<std::size_t>(r - 1)];
      }
      s += std::abs(det_lu(std::move(b)));
    });
    return s / static_cast<double>(binomial(n, k - 1));
  };
  Vec g(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    Vec pp(p.begin(), p.end()), pm(p.begin(), p.end());
    pp[static_cast<std::size_t>(j)] += step;
    pm[static_cast<std::size_t>(j)] -= step;
    g[static_cast<std::size_t>(j)] = (avg_absdet(pp) - avg_absdet(pm)) / (2.0 * step);
  }
  return g;
}

}  // namespace

TEST_CASE("sign score reduces to sgn(x - m) for k = 1") {
  const Matrix x = column({1.0, 2.0, 3.0});
  CHECK(oja_sign(x, Vec{3.0}, Vec{2.0}) == Vec{1.0});
  CHECK(oja_sign(x, Vec{0.5}, Vec{2.0}) == Vec{-1.0});
  CHECK(oja_sign(x, Vec{2.0}, Vec{2.0}) == Vec{0.0});
}

TEST_CASE("sign score at the center is zero") {
  const Matrix x = triangle();
  const Vec m{1.0 / 3.0, 1.0 / 3.0};
  const Vec s = oja_sign(x, m, m);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 0.0);
}

TEST_CASE("sign score against the finite-difference oracle") {
  const Matrix x = triangle();
  const Vec m{1.0 / 3.0, 1.0 / 3.0};
  const Vec p{0.0, 0.0};
  const Vec s = oja_sign(x, p, m);
  const Vec fd = sign_by_finite_differences(x, p, m);
  CHECK(std::abs(s[0] - fd[0]) <= 1e-5);
  CHECK(std::abs(s[1] - fd[1]) <= 1e-5);
  CHECK(norm2(s) > 1e-6);

  Rng rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix y = testutil::random_data(6, 2, rng);
    const Vec mm = testutil::random_point(2, rng);
    const Vec pp = testutil::random_point(2, rng, 1.5, 2.5);  // off all hyperplanes
    const Vec got = oja_sign(y, pp, mm);
    const Vec want = sign_by_finite_differences(y, pp, mm);
    CHECK(std::abs(got[0] - want[0]) <= 1e-5);
    CHECK(std::abs(got[1] - want[1]) <= 1e-5);
  }
}

TEST_CASE("sign matrix rows") {
  SUBCASE("k = 1 with the componentwise median center") {
    CenterSpec c;
    c.kind = CenterSpec::Kind::kCompMedian;
    const ScoreMatrix s = oja_sign_matrix(column({1.0, 2.0, 3.0}), c);
    CHECK(s.scores(0, 0) == -1.0);
    CHECK(s.scores(1, 0) == 0.0);
    CHECK(s.scores(2, 0) == 1.0);
    REQUIRE(s.center.has_value());
    CHECK((*s.center)[0] == 2.0);
  }
  SUBCASE("explicit center at the first observation zeroes its row") {
    Rng rng(42);
    const Matrix x = testutil::random_data(5, 2, rng);
    CenterSpec c;
    c.kind = CenterSpec::Kind::kExplicit;
    c.point = Vec(x.row(0).begin(), x.row(0).end());
    const ScoreMatrix s = oja_sign_matrix(x, c);
    CHECK(s.scores(0, 0) == 0.0);
    CHECK(s.scores(0, 1) == 0.0);
  }
  SUBCASE("rows sum to zero at an interior median point") {
    CenterSpec c;
    c.kind = CenterSpec::Kind::kExplicit;
    c.point = Vec{1.0 / 3.0, 1.0 / 3.0};  // interior of the triangle median set
    const ScoreMatrix s = oja_sign_matrix(triangle(), c);
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      s0 += s.scores(i, 0);
      s1 += s.scores(i, 1);
    }
    CHECK(std::abs(s0) <= 1e-9);
    CHECK(std::abs(s1) <= 1e-9);
  }
}

TEST_CASE("rank score reductions and identities") {
  SUBCASE("k = 1 normalized central rank") {
    const Matrix x = column({1.0, 2.0, 3.0});
    CHECK(oja_rank(x, Vec{2.5})[0] == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("interior of the triangle has rank zero") {
    const Vec r = oja_rank(triangle(), Vec{1.0 / 3.0, 1.0 / 3.0});
    CHECK(std::abs(r[0]) <= 1e-12);
    CHECK(std::abs(r[1]) <= 1e-12);
  }
  SUBCASE("both rank formulas agree") {
    Rng rng(43);
    for (int rep = 0; rep < 10; ++rep) {
      const Matrix x = testutil::random_data(7, 2, rng);
      const Vec p = testutil::random_point(2, rng, -0.5, 1.5);
      const Vec direct = oja_rank(x, p);

      const int n = static_cast<int>(x.rows());
      Vec via_signs(2, 0.0);
      for (int i = 0; i < n; ++i)
        axpy(via_signs, 1.0, oja_sign(x, p, x.row(static_cast<std::size_t>(i))));
      for (double& c : via_signs) c /= static_cast<double>(n - 2 + 1);

      CHECK(std::abs(direct[0] - via_signs[0]) <= 1e-10);
      CHECK(std::abs(direct[1] - via_signs[1]) <= 1e-10);
    }
  }
}

TEST_CASE("signed rank scores") {
  SUBCASE("k = 1 matches the absolute-rank identity") {
    const Matrix x = column({1.0, -2.0, 3.0});
    // (2 rnk(|3|) - 1) sgn(3) / (2n) with |3| ranked third among the absolutes
    CHECK(oja_signed_rank(x, Vec{3.0})[0] == doctest::Approx(5.0 / 6.0));
  }
  SUBCASE("zero at the origin") {
    Rng rng(44);
    const Matrix x = testutil::random_data(6, 2, rng, -1.0, 1.0);
    const Vec r = oja_signed_rank(x, Vec{0.0, 0.0});
    CHECK(std::abs(r[0]) <= 1e-15);
    CHECK(std::abs(r[1]) <= 1e-15);
  }
  SUBCASE("odd function") {
    Rng rng(45);
    for (int rep = 0; rep < 10; ++rep) {
      const Matrix x = testutil::random_data(6, 2, rng, -1.0, 1.0);
      const Vec p = testutil::random_point(2, rng, -1.0, 1.0);
      const Vec plus = oja_signed_rank(x, p);
      const Vec minus = oja_signed_rank(x, scaled(p, -1.0));
      CHECK(std::abs(plus[0] + minus[0]) <= 1e-10);
      CHECK(std::abs(plus[1] + minus[1]) <= 1e-10);
    }
  }
  SUBCASE("the dimension guard") {
    const Matrix x(12, 11, 0.5);
    CHECK_THROWS_AS(oja_signed_rank(x, Vec(11, 0.0)), std::invalid_argument);
  }
}

TEST_CASE("sign covariance matrices") {
  SUBCASE("k = 1 sign covariance") {
    CenterSpec c;
    c.kind = CenterSpec::Kind::kCompMedian;
    const Matrix m = oja_scm(column({1.0, 2.0, 3.0}), c);
    CHECK(m(0, 0) == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("symmetric and positive semidefinite") {
    Rng rng(46);
    const Matrix x = testutil::random_data(7, 2, rng);
    CenterSpec c;
    c.kind = CenterSpec::Kind::kMean;
    const Matrix m = oja_scm(x, c);
    CHECK(m(0, 1) == doctest::Approx(m(1, 0)));
    const SymEigen e = sym_eigen(m);
    for (double l : e.values) CHECK(l >= -1e-12);
  }
}

TEST_CASE("equivariance laws") {
  Rng rng(47);
  SUBCASE("sign transform") {
    for (int rep = 0; rep < 10; ++rep) {
      const int k = 2 + static_cast<int>(rng.below(2));
      const Matrix x = testutil::random_data(k + 4, k, rng);
      const Matrix a = testutil::random_nonsingular(k, rng);
      const Vec m = testutil::random_point(k, rng);
      const Vec p = testutil::random_point(k, rng, 1.2, 2.0);

      const Vec lhs = oja_sign(testutil::affine_apply(x, a, Vec(static_cast<std::size_t>(k), 0.0)),
                               matvec(a, p), matvec(a, m));
      Matrix a_inv(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) {
        Vec e(static_cast<std::size_t>(k), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        const auto col = solve(a, e);
        REQUIRE(col.has_value());
        for (int i = 0; i < k; ++i)
          a_inv(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = (*col)[static_cast<std::size_t>(i)];
      }
      Vec rhs = matvec(transpose(a_inv), oja_sign(x, p, m));
      const double det_a = det_lu(a);
      for (double& c : rhs) c *= det_a;

      for (int j = 0; j < k; ++j)
        CHECK(testutil::rel_err(lhs[static_cast<std::size_t>(j)], rhs[static_cast<std::size_t>(j)]) <= 1e-8);
    }
  }
  SUBCASE("negative-determinant transforms carry |det A|") {
    // k = 1, A = (-2): sgn(-2x + 2m) = -sgn(x - m); the factor is
    // |det A| (A^-1)^T = 2 * (-1/2) = -1
    const Matrix x = column({1.0, 2.0, 3.0});
    const Matrix ax = column({-2.0, -4.0, -6.0});
    CHECK(oja_sign(ax, Vec{-6.0}, Vec{-4.0})[0] == -oja_sign(x, Vec{3.0}, Vec{2.0})[0]);
  }
  SUBCASE("translation invariance") {
    for (int rep = 0; rep < 10; ++rep) {
      const Matrix x = testutil::random_data(6, 2, rng);
      const Vec b = testutil::random_point(2, rng, -3.0, 3.0);
      const Vec m = testutil::random_point(2, rng);
      const Vec p = testutil::random_point(2, rng, 1.2, 2.0);
      Vec pb = add(p, b), mb = add(m, b);
      const Vec lhs = oja_sign(testutil::affine_apply(x, Matrix::identity(2), b), pb, mb);
      const Vec rhs = oja_sign(x, p, m);
      CHECK(std::abs(lhs[0] - rhs[0]) <= 1e-10);
      CHECK(std::abs(lhs[1] - rhs[1]) <= 1e-10);
    }
  }
  SUBCASE("sign covariance transform") {
    for (int rep = 0; rep < 5; ++rep) {
      const int k = 2;
      const Matrix x = testutil::random_data(7, k, rng);
      const Matrix a = testutil::random_nonsingular(k, rng);
      const Vec m = testutil::random_point(k, rng);

      CenterSpec cs;
      cs.kind = CenterSpec::Kind::kExplicit;
      cs.point = m;
      const Matrix base = oja_scm(x, cs);

      CenterSpec cst;
      cst.kind = CenterSpec::Kind::kExplicit;
      cst.point = matvec(a, m);
      const Matrix lhs =
          oja_scm(testutil::affine_apply(x, a, Vec(static_cast<std::size_t>(k), 0.0)), cst);

      // det(A)^2 (A^-1)^T base A^-1, inverse via solves against unit vectors
      Matrix a_inv(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) {
        Vec e(static_cast<std::size_t>(k), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        const auto col = solve(a, e);
        REQUIRE(col.has_value());
        for (int i = 0; i < k; ++i)
          a_inv(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = (*col)[static_cast<std::size_t>(i)];
      }
      const double det_a = det_lu(a);
      Matrix rhs = matmul(transpose(a_inv), matmul(base, a_inv));
      for (std::size_t i = 0; i < rhs.rows(); ++i)
        for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) *= det_a * det_a;

      for (std::size_t i = 0; i < rhs.rows(); ++i)
        for (std::size_t j = 0; j < rhs.cols(); ++j)
          CHECK(testutil::rel_err(lhs(i, j), rhs(i, j)) <= 1e-8);
    }
  }
  SUBCASE("rank covariance transform") {
    for (int rep = 0; rep < 5; ++rep) {
      const int k = 2;
      const Matrix x = testutil::random_data(7, k, rng);
      const Matrix a = testutil::random_nonsingular(k, rng);
      const Matrix base = oja_rcm(x);
      const Matrix lhs =
          oja_rcm(testutil::affine_apply(x, a, Vec(static_cast<std::size_t>(k), 0.0)));

      Matrix a_inv(k, k);
      for (int j = 0; j < k; ++j) {
        Vec e(static_cast<std::size_t>(k), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        const auto col = solve(a, e);
        REQUIRE(col.has_value());
        for (int i = 0; i < k; ++i)
          a_inv(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = (*col)[static_cast<std::size_t>(i)];
      }
      const double det_a = det_lu(a);
      Matrix rhs = matmul(transpose(a_inv), matmul(base, a_inv));
      for (std::size_t i = 0; i < rhs.rows(); ++i)
        for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) *= det_a * det_a;

      for (std::size_t i = 0; i < rhs.rows(); ++i)
        for (std::size_t j = 0; j < rhs.cols(); ++j)
          CHECK(testutil::rel_err(lhs(i, j), rhs(i, j)) <= 1e-8);
    }
  }
}

TEST_CASE("signs sum to zero at certified interior median points") {
  // instances whose minimizer set is full dimensional: the vertex mean is
  // strictly interior and centering there makes the data signs cancel
  Rng rng(50);
  int checked = 0;
  for (int rep = 0; rep < 40 && checked < 5; ++rep) {
    const Matrix x = testutil::random_data(7, 2, rng);
    const BruteForceResult bf = brute_force_median(x);
    if (bf.points.size() < 3) continue;
    double area = 0.0;
    for (std::size_t i = 2; i < bf.points.size() && area <= 1e-9; ++i)
      area = simplex_volume(testutil::from_rows({bf.points[0], bf.points[1], bf.points[i]}));
    if (area <= 1e-9) continue;
    ++checked;
    Vec interior(2, 0.0);
    for (const Vec& p : bf.points)
      axpy(interior, 1.0 / static_cast<double>(bf.points.size()), p);
    Vec total(2, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i)
      axpy(total, 1.0, oja_sign(x, x.row(i), interior));
    CHECK(norm2(total) <= 1e-9);
  }
  CHECK(checked > 0);
}

TEST_CASE("componentwise medians commute with monotone maps through order statistics") {
  Rng rng(51);
  const auto cube = [](double v) { return v * v * v; };
  SUBCASE("odd sample: the median order statistic maps along") {
    const Matrix x = testutil::random_data(7, 2, rng, -2.0, 2.0);
    Matrix mapped(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) mapped(i, j) = cube(x(i, j));
    const Vec direct = marginal_median(mapped);
    const Vec via = marginal_median(x);
    CHECK(direct[0] == cube(via[0]));
    CHECK(direct[1] == cube(via[1]));
  }
  SUBCASE("even sample: the interval endpoints map along") {
    Vec col(6);
    for (double& v : col) v = -2.0 + 4.0 * rng.uniform01();
    Vec mapped(col);
    for (double& v : mapped) v = cube(v);
    const MedianInterval a = univariate_median_interval(col);
    const MedianInterval b = univariate_median_interval(mapped);
    CHECK(b.lower == cube(a.lower));
    CHECK(b.upper == cube(a.upper));
  }
}

TEST_CASE("componentwise and Euclidean-norm scores") {
  SUBCASE("componentwise signs with an explicit origin center") {
    CenterSpec c;
    c.kind = CenterSpec::Kind::kExplicit;
    c.point = Vec{0.0, 0.0};
    const ScoreMatrix s = marginal_scores(from_rows({{1.0, 2.0}, {3.0, 4.0}}), ScoreKind::kSign, c);
    CHECK(s.scores(0, 0) == 1.0);
    CHECK(s.scores(0, 1) == 1.0);
    CHECK(s.scores(1, 0) == 1.0);
    CHECK(s.scores(1, 1) == 1.0);
  }
  SUBCASE("unit-norm direction score") {
    CHECK(spatial_sign(Vec{3.0, 4.0}, Vec{0.0, 0.0}) == Vec{0.6, 0.8});
    CHECK(spatial_sign(Vec{1.0, 1.0}, Vec{1.0, 1.0}) == Vec{0.0, 0.0});
  }
  SUBCASE("norm-score rank matches the direct formula") {
    Rng rng(48);
    const Matrix x = testutil::random_data(6, 2, rng);
    const ScoreMatrix s = spatial_scores(x, ScoreKind::kRank);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      Vec want(2, 0.0);
      for (std::size_t l = 0; l < x.rows(); ++l) axpy(want, 1.0, spatial_sign(x.row(i), x.row(l)));
      for (double& c : want) c /= static_cast<double>(x.rows());
      CHECK(s.scores(i, 0) == doctest::Approx(want[0]));
      CHECK(s.scores(i, 1) == doctest::Approx(want[1]));
    }
  }
  SUBCASE("norm-score signed rank averages reflections") {
    Rng rng(49);
    const Matrix x = testutil::random_data(5, 2, rng, -1.0, 1.0);
    const ScoreMatrix s = spatial_scores(x, ScoreKind::kSignedRank);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      Vec want(2, 0.0);
      for (std::size_t l = 0; l < x.rows(); ++l) {
        axpy(want, 1.0, spatial_sign(x.row(i), x.row(l)));
        axpy(want, 1.0, spatial_sign(x.row(i), scaled(x.row(l), -1.0)));
      }
      for (double& c : want) c /= 2.0 * static_cast<double>(x.rows());
      CHECK(s.scores(i, 0) == doctest::Approx(want[0]));
      CHECK(s.scores(i, 1) == doctest::Approx(want[1]));
    }
  }
  SUBCASE("componentwise signed rank is rejected") {
    CHECK_THROWS_AS(marginal_scores(triangle(), ScoreKind::kSignedRank, {}),
                    std::invalid_argument);
  }
}

TEST_CASE("score covariance basics") {
  SUBCASE("all-zero scores") {
    const Matrix z(4, 2, 0.0);
    const Matrix c = score_cov(z);
    CHECK(c(0, 0) == 0.0);
    CHECK(c(1, 1) == 0.0);
  }
  SUBCASE("single row gives the outer product") {
    Matrix s(1, 2);
    s(0, 0) = 2.0;
    s(0, 1) = -1.0;
    const Matrix c = score_cov(s);
    CHECK(c(0, 0) == 4.0);
    CHECK(c(0, 1) == -2.0);
    CHECK(c(1, 1) == 1.0);
  }
  SUBCASE("k = 1 signs") {
    Matrix s(3, 1);
    s(0, 0) = -1.0;
    s(1, 0) = 0.0;
    s(2, 0) = 1.0;
    CHECK(score_cov(s)(0, 0) == doctest::Approx(2.0 / 3.0));
  }
}
