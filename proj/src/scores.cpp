#include "scores.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "geometry.hpp"

namespace ojamed {

const char* score_kind_name(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kSign: return "sign";
    case ScoreKind::kRank: return "rank";
    case ScoreKind::kSignedRank: return "signedrank";
  }
  return "?";
}

const char* score_family_name(ScoreFamily family) {
  switch (family) {
    case ScoreFamily::kOja: return "oja";
    case ScoreFamily::kMarginal: return "marginal";
    case ScoreFamily::kSpatial: return "spatial";
  }
  return "?";
}

Vec oja_sign(const Matrix& x_data, std::span<const double> x, std::span<const double> m,
             std::uint64_t cap) {
  const int n = static_cast<int>(x_data.rows());
  const int k = static_cast<int>(x_data.cols());
  assert(x.size() == static_cast<std::size_t>(k) && m.size() == static_cast<std::size_t>(k));
  check_enumeration_cap(n, k - 1, cap, "sign score");

  Vec acc(k, 0.0);
  Matrix pts(k, k);
  for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) pts(0, j) = m[j];
  for_each_subset(n, k - 1, [&](const std::vector<int>& idx) {
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j)
        pts(r + 1, j) = x_data(static_cast<std::size_t>(idx[r]), j);
    const Hyperplane h = hyperplane_from_points(pts);
    axpy(acc, 1.0, abs_det_gradient(h, x));
  });
  const double norm = static_cast<double>(binomial(n, k - 1));
  return scaled(acc, 1.0 / norm);
}

Vec oja_rank(const Matrix& x_data, std::span<const double> x, std::uint64_t cap) {
  const int n = static_cast<int>(x_data.rows());
  const int k = static_cast<int>(x_data.cols());
  assert(x.size() == static_cast<std::size_t>(k));
  if (n <= k) throw DegenerateDataError("rank score needs more observations than dimensions");
  check_enumeration_cap(n, k, cap, "rank score");

  Vec acc(k, 0.0);
  for_each_subset(n, k, [&](const std::vector<int>& idx) {
    const Hyperplane h = hyperplane_from_points(gather_rows(x_data, idx));
    axpy(acc, 1.0, abs_det_gradient(h, x));
  });
  const double norm = static_cast<double>(binomial(n, k));
  return scaled(acc, 1.0 / norm);
}

Vec oja_rank_from_hyperplanes(std::span<const Hyperplane> hps, std::span<const double> x,
                              int n, int k) {
  Vec acc(k, 0.0);
  for (const Hyperplane& h : hps) {
    const int s = h.eval_sign(x);
    if (s != 0) axpy(acc, static_cast<double>(s), h.normal);
  }
  return scaled(acc, 1.0 / static_cast<double>(binomial(n, k)));
}

Vec oja_signed_rank(const Matrix& x_data, std::span<const double> x, std::uint64_t cap) {
  const int n = static_cast<int>(x_data.rows());
  const int k = static_cast<int>(x_data.cols());
  assert(x.size() == static_cast<std::size_t>(k));
  if (k > 10)
    throw std::invalid_argument("signed rank refused for k > 10 (2^k sign flips per tuple)");
  if (n < k) throw DegenerateDataError("signed rank needs at least k observations");
  const std::uint64_t tuples = binomial(n, k);
  const std::uint64_t flips = std::uint64_t{1} << k;
  if (tuples > cap / flips)
    throw EnumerationCapError("signed rank needs " + std::to_string(tuples) + " tuples x " +
                                  std::to_string(flips) + " sign flips, above the cap of " +
                                  std::to_string(cap),
                              tuples * flips, cap);

  Vec acc(k, 0.0);
  Matrix pts(k, k);
  for_each_subset(n, k, [&](const std::vector<int>& idx) {
    for (std::uint64_t mask = 0; mask < flips; ++mask) {
      for (std::size_t col = 0; col < static_cast<std::size_t>(k); ++col) {
        const double a = (mask >> col) & 1 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j)
          pts(col, j) = a * x_data(static_cast<std::size_t>(idx[col]), j);
      }
      const Hyperplane h = hyperplane_from_points(pts);
      axpy(acc, 1.0, abs_det_gradient(h, x));
    }
  });
  return scaled(acc, 1.0 / (static_cast<double>(flips) * static_cast<double>(tuples)));
}

namespace {

ScoreMatrix make_score_matrix(const Matrix& rows, ScoreKind kind, ScoreFamily family,
                              std::optional<Vec> center) {
  ScoreMatrix s;
  s.scores = rows;
  s.kind = kind;
  s.family = family;
  s.center = std::move(center);
  return s;
}

}  // namespace

ScoreMatrix oja_sign_matrix(const Matrix& x_data, const CenterSpec& center, std::uint64_t cap) {
  const Vec m = resolve_center(x_data, center, ScoreFamily::kOja, cap);
  Matrix rows(x_data.rows(), x_data.cols());
  for (std::size_t i = 0; i < x_data.rows(); ++i) {
    const Vec s = oja_sign(x_data, x_data.row(i), m, cap);
    for (std::size_t j = 0; j < x_data.cols(); ++j) rows(i, j) = s[j];
  }
  return make_score_matrix(rows, ScoreKind::kSign, ScoreFamily::kOja, m);
}

ScoreMatrix oja_rank_matrix(const Matrix& x_data, std::uint64_t cap) {
  Matrix rows(x_data.rows(), x_data.cols());
  for (std::size_t i = 0; i < x_data.rows(); ++i) {
    const Vec s = oja_rank(x_data, x_data.row(i), cap);
    for (std::size_t j = 0; j < x_data.cols(); ++j) rows(i, j) = s[j];
  }
  return make_score_matrix(rows, ScoreKind::kRank, ScoreFamily::kOja, std::nullopt);
}

ScoreMatrix oja_signed_rank_matrix(const Matrix& x_data, std::uint64_t cap) {
  Matrix rows(x_data.rows(), x_data.cols());
  for (std::size_t i = 0; i < x_data.rows(); ++i) {
    const Vec s = oja_signed_rank(x_data, x_data.row(i), cap);
    for (std::size_t j = 0; j < x_data.cols(); ++j) rows(i, j) = s[j];
  }
  return make_score_matrix(rows, ScoreKind::kSignedRank, ScoreFamily::kOja, std::nullopt);
}

Matrix oja_scm(const Matrix& x_data, const CenterSpec& center, std::uint64_t cap) {
  return score_cov(oja_sign_matrix(x_data, center, cap));
}

Matrix oja_rcm(const Matrix& x_data, std::uint64_t cap) {
  return score_cov(oja_rank_matrix(x_data, cap));
}

Vec marginal_sign(std::span<const double> x, std::span<const double> center) {
  Vec s(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - center[j];
    s[j] = (d > 0.0) - (d < 0.0);
  }
  return s;
}

Vec spatial_sign(std::span<const double> x, std::span<const double> center) {
  Vec d = sub(x, center);
  const double n2 = norm2(d);
  if (n2 == 0.0) return Vec(x.size(), 0.0);
  for (double& c : d) c /= n2;
  return d;
}

ScoreMatrix marginal_scores(const Matrix& x_data, ScoreKind kind, const CenterSpec& center) {
  const std::size_t n = x_data.rows();
  const std::size_t k = x_data.cols();
  Matrix rows(n, k);
  if (kind == ScoreKind::kSign) {
    const Vec c = resolve_center(x_data, center, ScoreFamily::kMarginal);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec s = marginal_sign(x_data.row(i), c);
      for (std::size_t j = 0; j < k; ++j) rows(i, j) = s[j];
    }
    return make_score_matrix(rows, kind, ScoreFamily::kMarginal, c);
  }
  if (kind != ScoreKind::kRank)
    throw std::invalid_argument("componentwise scores support sign and rank only");
  for (std::size_t i = 0; i < n; ++i) {
    Vec acc(k, 0.0);
    for (std::size_t l = 0; l < n; ++l) axpy(acc, 1.0, marginal_sign(x_data.row(i), x_data.row(l)));
    for (std::size_t j = 0; j < k; ++j) rows(i, j) = acc[j] / static_cast<double>(n);
  }
  return make_score_matrix(rows, kind, ScoreFamily::kMarginal, std::nullopt);
}

ScoreMatrix spatial_scores(const Matrix& x_data, ScoreKind kind, const CenterSpec& center) {
  const std::size_t n = x_data.rows();
  const std::size_t k = x_data.cols();
  Matrix rows(n, k);
  if (kind == ScoreKind::kSign) {
    const Vec c = resolve_center(x_data, center, ScoreFamily::kSpatial);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec s = spatial_sign(x_data.row(i), c);
      for (std::size_t j = 0; j < k; ++j) rows(i, j) = s[j];
    }
    return make_score_matrix(rows, kind, ScoreFamily::kSpatial, c);
  }
  const Vec origin(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Vec acc(k, 0.0);
    if (kind == ScoreKind::kRank) {
      for (std::size_t l = 0; l < n; ++l) axpy(acc, 1.0, spatial_sign(x_data.row(i), x_data.row(l)));
      for (std::size_t j = 0; j < k; ++j) rows(i, j) = acc[j] / static_cast<double>(n);
    } else {
      // signed rank: average the sign over each data point and its reflection
      for (std::size_t l = 0; l < n; ++l) {
        axpy(acc, 1.0, spatial_sign(x_data.row(i), x_data.row(l)));
        axpy(acc, 1.0, spatial_sign(x_data.row(i), scaled(x_data.row(l), -1.0)));
      }
      for (std::size_t j = 0; j < k; ++j) rows(i, j) = acc[j] / (2.0 * static_cast<double>(n));
    }
  }
  return make_score_matrix(rows, kind, ScoreFamily::kSpatial, std::nullopt);
}

ScoreMatrix score_matrix(const Matrix& x_data, ScoreFamily family, ScoreKind kind,
                         const CenterSpec& center, std::uint64_t cap) {
  switch (family) {
    case ScoreFamily::kOja:
      switch (kind) {
        case ScoreKind::kSign: return oja_sign_matrix(x_data, center, cap);
        case ScoreKind::kRank: return oja_rank_matrix(x_data, cap);
        case ScoreKind::kSignedRank: return oja_signed_rank_matrix(x_data, cap);
      }
      break;
    case ScoreFamily::kMarginal:
      return marginal_scores(x_data, kind, center);
    case ScoreFamily::kSpatial:
      return spatial_scores(x_data, kind, center);
  }
  throw std::invalid_argument("unknown score family/kind combination");
}

Matrix score_cov(const Matrix& scores) {
  const std::size_t n = scores.rows();
  const std::size_t k = scores.cols();
  Matrix s(k, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t q = 0; q < k; ++q) s(p, q) += scores(i, p) * scores(i, q);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q) s(p, q) /= static_cast<double>(n);
  return s;
}

}  // namespace ojamed
