#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "matrix.hpp"
#include "median_result.hpp"

namespace ojamed {

enum class ScoreKind { kSign, kRank, kSignedRank };
enum class ScoreFamily { kOja, kMarginal, kSpatial };

const char* score_kind_name(ScoreKind kind);
const char* score_family_name(ScoreFamily family);

// Center location the sign-type scores are computed against.
struct CenterSpec {
  enum class Kind {
    kDefault,        // per family: its own median (evolutionary-seeded for the
                     // simplex-volume median)
    kOjaMedian,
    kCompMedian,     // vector of marginal medians
    kSpatialMedian,
    kMean,
    kExplicit,
  };

  Kind kind = Kind::kDefault;
  Vec point;                                   // kExplicit
  MedianAlg median_alg = MedianAlg::kEvolutionary;  // kOjaMedian resolution
  std::uint64_t median_seed = 1;
};

struct ScoreMatrix {
  Matrix scores;  // one score row per observation
  ScoreKind kind = ScoreKind::kSign;
  ScoreFamily family = ScoreFamily::kOja;
  // resolved center for sign-type scores; rank-type scores carry none
  std::optional<Vec> center;
};

// ---- simplex-volume (hyperplane gradient) scores ----

// Average over all (k-1)-tuples of the gradient of |bordered det| for the
// hyperplane through the center m and the selected data points, evaluated at
// x. Reduces to sgn(x - m) for k = 1.
Vec oja_sign(const Matrix& x_data, std::span<const double> x, std::span<const double> m,
             std::uint64_t cap = kDefaultEnumCap);

// Average over all k-tuples of the gradient of |bordered det| of the
// data-spanned hyperplane at x.
Vec oja_rank(const Matrix& x_data, std::span<const double> x,
             std::uint64_t cap = kDefaultEnumCap);

// Same average from an already-enumerated hyperplane list (used by the
// solvers, which keep the full list around).
Vec oja_rank_from_hyperplanes(std::span<const Hyperplane> hps, std::span<const double> x,
                              int n, int k);

// Average over all k-tuples and all 2^k column sign flips; the flip a_j
// scales the j-th selected data column of the bordered matrix. Refuses k > 10
// (the 2^k factor).
Vec oja_signed_rank(const Matrix& x_data, std::span<const double> x,
                    std::uint64_t cap = kDefaultEnumCap);

ScoreMatrix oja_sign_matrix(const Matrix& x_data, const CenterSpec& center = {},
                            std::uint64_t cap = kDefaultEnumCap);
ScoreMatrix oja_rank_matrix(const Matrix& x_data, std::uint64_t cap = kDefaultEnumCap);
ScoreMatrix oja_signed_rank_matrix(const Matrix& x_data, std::uint64_t cap = kDefaultEnumCap);

// Gram matrices (1/n) sum s_i s_i^T of the sign / rank scores.
Matrix oja_scm(const Matrix& x_data, const CenterSpec& center = {},
               std::uint64_t cap = kDefaultEnumCap);
Matrix oja_rcm(const Matrix& x_data, std::uint64_t cap = kDefaultEnumCap);

// ---- componentwise and Euclidean-norm scores ----

Vec marginal_sign(std::span<const double> x, std::span<const double> center);
Vec spatial_sign(std::span<const double> x, std::span<const double> center);

// kind: kSign or kRank (ranks are center-free averages over data
// differences).
ScoreMatrix marginal_scores(const Matrix& x_data, ScoreKind kind,
                            const CenterSpec& center = {});

// kind: kSign, kRank or kSignedRank.
ScoreMatrix spatial_scores(const Matrix& x_data, ScoreKind kind,
                           const CenterSpec& center = {});

ScoreMatrix score_matrix(const Matrix& x_data, ScoreFamily family, ScoreKind kind,
                         const CenterSpec& center = {}, std::uint64_t cap = kDefaultEnumCap);

// (1/n) sum of the outer products of the score rows.
Matrix score_cov(const Matrix& scores);
inline Matrix score_cov(const ScoreMatrix& s) { return score_cov(s.scores); }

// Resolve a center specification against the data (may run a median
// computation). `family` selects the per-definition default.
Vec resolve_center(const Matrix& x_data, const CenterSpec& spec,
                   ScoreFamily family = ScoreFamily::kOja,
                   std::uint64_t cap = kDefaultEnumCap);

}  // namespace ojamed
