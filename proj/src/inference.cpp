#include "inference.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>

#include "rng.hpp"

namespace ojamed {

namespace {

// regularized incomplete gamma functions P(a,x), Q(a,x)
double gamma_series_p(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int i = 1; i < 1000; ++i) {
    term *= x / (a + i);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_cf_q(double a, double x) {
  // Lentz continued fraction
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_square_sf(double q, int df) {
  if (q < 0.0) throw std::domain_error("chi-square statistic must be nonnegative");
  if (df < 1) throw std::invalid_argument("chi-square needs df >= 1");
  if (q == 0.0) return 1.0;
  const double a = 0.5 * static_cast<double>(df);
  const double x = 0.5 * q;
  if (x < a + 1.0) return 1.0 - gamma_series_p(a, x);
  return gamma_cf_q(a, x);
}

double chi_square_quantile_upper(double p_upper, int df) {
  assert(p_upper > 0.0 && p_upper < 1.0);
  double lo = 0.0;
  double hi = 1.0;
  while (chi_square_sf(hi, df) > p_upper) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi_square_sf(mid, df) > p_upper)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

struct QForm {
  Matrix cov_pinv;
  int rank = 0;
};

QForm score_cov_pinv(const Matrix& scores) {
  QForm q;
  q.cov_pinv = pseudo_inverse_psd(score_cov(scores), &q.rank);
  return q;
}

double quad_form(const Matrix& pinv, std::span<const double> v) {
  return dot(v, matvec(pinv, v));
}

}  // namespace

TestResult one_sample_test(const Matrix& x_data, std::span<const double> mu0, ScoreKind kind,
                           TestMethod method, int replications, std::uint64_t seed,
                           std::uint64_t cap) {
  validate_data(x_data);
  const std::size_t n = x_data.rows();
  const std::size_t k = x_data.cols();
  if (mu0.size() != k) throw std::invalid_argument("tested location has wrong dimension");
  if (kind != ScoreKind::kSign && kind != ScoreKind::kSignedRank)
    throw std::invalid_argument("one-sample test supports sign and signedrank scores");

  Matrix shifted(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) shifted(i, j) = x_data(i, j) - mu0[j];

  Matrix scores(n, k);
  const Vec origin(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec s = kind == ScoreKind::kSign ? oja_sign(shifted, shifted.row(i), origin, cap)
                                           : oja_signed_rank(shifted, shifted.row(i), cap);
    for (std::size_t j = 0; j < k; ++j) scores(i, j) = s[j];
  }

  const QForm qf = score_cov_pinv(scores);
  const Vec sbar = column_means(scores);
  const double q_obs = static_cast<double>(n) * quad_form(qf.cov_pinv, sbar);

  TestResult res;
  res.statistic = q_obs;
  res.df = qf.rank;
  res.method = method;
  res.seed = seed;
  res.score_kind = kind;
  res.null_value.assign(mu0.begin(), mu0.end());
  res.singular_score_cov = qf.rank < static_cast<int>(k);

  if (method == TestMethod::kAsymptotic) {
    res.p_value = chi_square_sf(q_obs, std::max(res.df, 1));
    return res;
  }

  // sign-flip permutation distribution; the score covariance is flip
  // invariant, so only the mean is redrawn
  if (replications < 1) throw std::invalid_argument("permutation needs replications >= 1");
  res.replications = replications;
  int geq = 0;
  for (int b = 0; b < replications; ++b) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(b)));
    Vec flipped(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
      axpy(flipped, sign, scores.row(i));
    }
    for (double& c : flipped) c /= static_cast<double>(n);
    const double q_b = static_cast<double>(n) * quad_form(qf.cov_pinv, flipped);
    if (q_b >= q_obs) ++geq;
  }
  res.p_value = (1.0 + geq) / (static_cast<double>(replications) + 1.0);
  return res;
}

TestResult c_sample_test(const Matrix& x_data, std::span<const int> labels, ScoreKind kind,
                         TestMethod method, int replications, std::uint64_t seed,
                         std::uint64_t cap, const std::optional<CenterSpec>& center) {
  validate_data(x_data);
  const std::size_t n = x_data.rows();
  const std::size_t k = x_data.cols();
  if (labels.size() != n) throw std::invalid_argument("one group label per observation required");
  if (kind != ScoreKind::kSign && kind != ScoreKind::kRank)
    throw std::invalid_argument("C-sample test supports sign and rank scores");

  // group ids in sorted label order
  std::map<int, int> group_of;
  for (int l : labels) group_of.emplace(l, 0);
  int c_count = 0;
  for (auto& [label, id] : group_of) id = c_count++;
  if (c_count < 2) throw std::invalid_argument("C-sample test needs at least two groups");

  std::vector<int> gid(n);
  std::vector<double> gsize(static_cast<std::size_t>(c_count), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    gid[i] = group_of[labels[i]];
    gsize[static_cast<std::size_t>(gid[i])] += 1.0;
  }

  // scores on the combined sample w.r.t. its own location
  Matrix scores(n, k);
  if (kind == ScoreKind::kRank) {
    const ScoreMatrix sm = oja_rank_matrix(x_data, cap);
    scores = sm.scores;
  } else {
    const CenterSpec spec = center.value_or(CenterSpec{});
    const Vec m = resolve_center(x_data, spec, ScoreFamily::kOja, cap);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec s = oja_sign(x_data, x_data.row(i), m, cap);
      for (std::size_t j = 0; j < k; ++j) scores(i, j) = s[j];
    }
  }

  const QForm qf = score_cov_pinv(scores);

  const auto statistic = [&](std::span<const int> assignment) {
    Matrix means(static_cast<std::size_t>(c_count), k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j)
        means(static_cast<std::size_t>(assignment[i]), j) += scores(i, j);
    double q = 0.0;
    for (int c = 0; c < c_count; ++c) {
      Vec mbar(k);
      for (std::size_t j = 0; j < k; ++j)
        mbar[j] = means(static_cast<std::size_t>(c), j) / gsize[static_cast<std::size_t>(c)];
      q += gsize[static_cast<std::size_t>(c)] * quad_form(qf.cov_pinv, mbar);
    }
    return q;
  };

  const double q_obs = statistic(gid);

  TestResult res;
  res.statistic = q_obs;
  res.df = qf.rank * (c_count - 1);
  res.method = method;
  res.seed = seed;
  res.score_kind = kind;
  res.groups = c_count;
  res.singular_score_cov = qf.rank < static_cast<int>(k);

  if (method == TestMethod::kAsymptotic) {
    res.p_value = chi_square_sf(q_obs, std::max(res.df, 1));
    return res;
  }

  if (replications < 1) throw std::invalid_argument("permutation needs replications >= 1");
  res.replications = replications;
  int geq = 0;
  std::vector<int> perm(gid);
  for (int b = 0; b < replications; ++b) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(b)));
    perm = gid;
    for (std::size_t i = n; i-- > 1;) {
      const std::size_t j = rng.below(i + 1);
      std::swap(perm[i], perm[j]);
    }
    if (statistic(perm) >= q_obs) ++geq;
  }
  res.p_value = (1.0 + geq) / (static_cast<double>(replications) + 1.0);
  return res;
}

}  // namespace ojamed
