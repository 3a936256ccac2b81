#include "approx.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "exact.hpp"
#include "inference.hpp"
#include "oracle.hpp"
#include "rng.hpp"

namespace ojamed {

KnotTest knot_test(std::span<const Hyperplane> sample, std::span<const double> g,
                   double chi2_upper) {
  const std::size_t k = g.size();
  if (sample.size() < k + 1)
    throw std::invalid_argument("knot test needs at least k+1 sampled hyperplanes");

  const double m = static_cast<double>(sample.size());
  Vec mean(k, 0.0);
  Matrix second(k, k);
  bool any_nonzero = false;
  for (const Hyperplane& h : sample) {
    const Vec v = abs_det_gradient(h, g);
    for (std::size_t p = 0; p < k; ++p) {
      if (v[p] != 0.0) any_nonzero = true;
      mean[p] += v[p];
      for (std::size_t q = 0; q < k; ++q) second(p, q) += v[p] * v[q];
    }
  }
  if (!any_nonzero) return {KnotDecision::kKeep, 0.0};  // degenerate sample

  for (double& c : mean) c /= m;
  Matrix cov(k, k);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q) cov(p, q) = second(p, q) / m - mean[p] * mean[q];

  const Matrix pinv = pseudo_inverse_psd(cov);
  const Vec t = matvec(pinv, mean);
  const double q_stat = m * dot(mean, t);
  return {q_stat > chi2_upper ? KnotDecision::kReject : KnotDecision::kKeep, q_stat};
}

namespace detail {

std::vector<std::size_t> grid_iteration(const std::vector<Vec>& knots,
                                        const std::vector<std::size_t>& survivors,
                                        std::span<const Hyperplane> sample, double chi2_upper,
                                        std::vector<double>& stats) {
  std::vector<std::size_t> next;
  std::vector<double> next_stats;
  for (std::size_t idx : survivors) {
    const KnotTest t = knot_test(sample, knots[idx], chi2_upper);
    if (t.decision == KnotDecision::kKeep) {
      next.push_back(idx);
      next_stats.push_back(t.statistic);
    }
  }
  if (next.empty()) {
    // the round rejected everything: keep the previous set, re-scored
    stats.clear();
    for (std::size_t idx : survivors)
      stats.push_back(knot_test(sample, knots[idx], chi2_upper).statistic);
    return survivors;
  }
  stats = std::move(next_stats);
  return next;
}

}  // namespace detail

namespace {

// fresh batch of data-spanned hyperplanes; degenerate draws are retried
std::vector<Hyperplane> sample_hyperplanes(const Matrix& x_data, int count, Rng& rng) {
  const int n = static_cast<int>(x_data.rows());
  const int k = static_cast<int>(x_data.cols());
  std::vector<Hyperplane> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Hyperplane h;
    for (int attempt = 0; attempt < 64; ++attempt) {
      h = hyperplane_from_points(gather_rows(x_data, sample_subset(n, k, rng)));
      if (!h.degenerate()) break;
    }
    out.push_back(std::move(h));
  }
  return out;
}

struct GridLevel {
  std::vector<Vec> knots;
};

GridLevel initial_grid(const Vec& lo, const Vec& hi, double h, std::uint64_t max_knots) {
  const std::size_t k = lo.size();
  std::vector<std::size_t> counts(k);
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < k; ++j) {
    counts[j] = static_cast<std::size_t>(std::ceil((hi[j] - lo[j]) / h)) + 1;
    total *= counts[j];
    if (total > max_knots)
      throw GridTooLargeError("grid over the data bounding box needs more than " +
                              std::to_string(max_knots) + " knots");
  }
  GridLevel level;
  level.knots.reserve(total);
  std::vector<std::size_t> odo(k, 0);
  while (true) {
    Vec p(k);
    for (std::size_t j = 0; j < k; ++j) p[j] = lo[j] + static_cast<double>(odo[j]) * h;
    level.knots.push_back(std::move(p));
    std::size_t j = 0;
    for (; j < k; ++j) {
      if (++odo[j] < counts[j]) break;
      odo[j] = 0;
    }
    if (j == k) break;
  }
  return level;
}

GridLevel refined_grid(const Vec& center, double h, std::uint64_t max_knots) {
  // spacing h/2 over +/- 2h per axis: covers well beyond the previous knot
  // cell, so a coarse-level pick one cell off stays recoverable
  const std::size_t k = center.size();
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < k; ++j) {
    total *= 9;
    if (total > max_knots)
      throw GridTooLargeError("refined grid needs more than " + std::to_string(max_knots) +
                              " knots");
  }
  GridLevel level;
  level.knots.reserve(total);
  std::vector<int> odo(k, -4);
  while (true) {
    Vec p(k);
    for (std::size_t j = 0; j < k; ++j) p[j] = center[j] + 0.5 * h * static_cast<double>(odo[j]);
    level.knots.push_back(std::move(p));
    std::size_t j = 0;
    for (; j < k; ++j) {
      if (++odo[j] <= 4) break;
      odo[j] = -4;
    }
    if (j == k) break;
  }
  return level;
}

void finish_objective(MedianResult& res, const Matrix& x_data, const EvoConfig* evo_cfg,
                      std::uint64_t cap) {
  const int n = static_cast<int>(x_data.rows());
  const int k = static_cast<int>(x_data.cols());
  if (binomial(n, k) <= cap) {
    res.objective = oja_objective(x_data, res.point, cap);
    res.objective_sampled = false;
    return;
  }
  // over the cap: score on a fresh tuple sample and flag it
  const std::uint64_t want =
      evo_cfg && evo_cfg->n_subsets_used > 0 ? evo_cfg->n_subsets_used : 1000;
  Rng rng(Rng::derive(res.seed, 0x0b2ec7));
  const std::vector<Hyperplane> sample =
      sample_hyperplanes(x_data, static_cast<int>(want), rng);
  res.objective = objective_from_hyperplanes(sample, res.point, k);
  res.objective_sampled = true;
  if (std::find(res.notes.begin(), res.notes.end(), "objective_sampled") == res.notes.end())
    res.notes.push_back("objective_sampled");
}

}  // namespace

MedianResult grid_median(const Matrix& x_data, const GridConfig& cfg) {
  validate_data(x_data);
  if (x_data.rows() <= x_data.cols())
    throw std::invalid_argument("median computation needs more observations than dimensions");
  if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0)
    throw std::invalid_argument("knot test level must lie strictly between 0 and 1");
  if (cfg.spacing_divisor < 1 || cfg.spacing_threshold < 0.0)
    throw std::invalid_argument("invalid grid spacing configuration");
  const int k = static_cast<int>(x_data.cols());

  Vec lo(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
  Vec hi(static_cast<std::size_t>(k), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < x_data.rows(); ++i)
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
      lo[j] = std::min(lo[j], x_data(i, j));
      hi[j] = std::max(hi[j], x_data(i, j));
    }
  double range = 0.0;
  for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) range = std::max(range, hi[j] - lo[j]);

  MedianResult res;
  res.algorithm = "grid";
  res.seed = cfg.seed;

  if (range <= 0.0) {  // all observations coincide
    res.point = Vec(x_data.row(0).begin(), x_data.row(0).end());
    res.objective = 0.0;
    return res;
  }

  const double threshold = cfg.spacing_threshold > 0.0 ? cfg.spacing_threshold : 1e-3 * range;
  const double chi2_upper = chi_square_quantile_upper(cfg.alpha, k);

  Rng rng(cfg.seed);
  double h = range / static_cast<double>(cfg.spacing_divisor);
  GridLevel level = initial_grid(lo, hi, h, cfg.max_knots);

  // small enumerations are ranked by the exact criterion at advancement time
  std::vector<Hyperplane> full_list;
  if (binomial(static_cast<int>(x_data.rows()), k) <=
      static_cast<std::uint64_t>(cfg.pool_max)) {
    for_each_subset(static_cast<int>(x_data.rows()), k, [&](const std::vector<int>& idx) {
      full_list.push_back(hyperplane_from_points(gather_rows(x_data, idx)));
    });
  }

  int iteration_cap = cfg.max_inner_iterations;
  int total_rounds = 0;
  std::uint64_t hyperplanes_drawn = 0;
  Vec best_knot;
  int levels = 0;

  while (true) {
    ++levels;
    std::vector<std::size_t> survivors(level.knots.size());
    for (std::size_t i = 0; i < survivors.size(); ++i) survivors[i] = i;
    std::vector<double> stats(survivors.size(), 0.0);

    // evidence accumulates: the pool grows geometrically up to the ceiling,
    // so persistent ties meet a high-power test within a few rounds
    const int batch = std::max(cfg.hyperplanes_per_round, k + 1);
    std::vector<Hyperplane> pool = sample_hyperplanes(x_data, batch, rng);
    hyperplanes_drawn += pool.size();

    int iter = 0;
    while (survivors.size() > 1 && iter < iteration_cap) {
      ++iter;
      ++total_rounds;
      const std::vector<std::size_t> prev = survivors;
      survivors = detail::grid_iteration(level.knots, survivors, pool, chi2_upper, stats);
      if (static_cast<int>(pool.size()) < cfg.pool_max) {
        const int grow = std::min(std::max(batch, static_cast<int>(pool.size())),
                                  cfg.pool_max - static_cast<int>(pool.size()));
        const std::vector<Hyperplane> more = sample_hyperplanes(x_data, grow, rng);
        hyperplanes_drawn += more.size();
        pool.insert(pool.end(), more.begin(), more.end());
      } else if (survivors == prev) {
        break;  // frozen pool and stable set: re-testing cannot change anything
      }
    }
    if (iter >= iteration_cap && survivors.size() > 1) iteration_cap = 100;

    // Advance the criterion-best knot (exact list when small, pool estimate
    // otherwise). The knot test is blind within a sign cell of the
    // arrangement and for single-point medians the lone survivor is a lottery
    // winner among equal-power cells, so the elimination loop narrows the
    // field but the centering itself follows the criterion.
    const std::vector<Hyperplane>& ranking = full_list.empty() ? pool : full_list;
    std::size_t best = survivors.empty() ? 0 : survivors.front();
    double best_est = std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < level.knots.size(); ++idx) {
      const double est = objective_from_hyperplanes(ranking, level.knots[idx], k);
      if (est < best_est) {
        best_est = est;
        best = idx;
      }
    }
    best_knot = level.knots[best];

    if (h <= threshold) break;
    h *= 0.5;
    level = refined_grid(best_knot, h, cfg.max_knots);
  }

  res.point = std::move(best_knot);
  res.iterations = total_rounds;
  res.hyperplanes_used = hyperplanes_drawn;
  res.diagnostics.emplace_back("levels", static_cast<double>(levels));
  res.diagnostics.emplace_back("final_spacing", h);
  finish_objective(res, x_data, nullptr, cfg.enum_cap);
  return res;
}

MedianResult evolutionary_median_raw(const Matrix& x_data, const EvoConfig& cfg,
                                     SolveTrace* trace) {
  validate_data(x_data);
  if (x_data.rows() <= x_data.cols())
    throw std::invalid_argument("median computation needs more observations than dimensions");
  if (cfg.ada_factor <= 1.0)
    throw std::invalid_argument("variance adaptation factor must exceed 1");
  if (cfg.mutations_per_step < 1 || cfg.sigma_ada < 1 || cfg.sigma_init <= 0.0)
    throw std::invalid_argument("invalid mutation configuration");
  const int n = static_cast<int>(x_data.rows());
  const int k = static_cast<int>(x_data.cols());

  Rng rng(cfg.seed);

  // fixed criterion sample for the whole run, so the minimized function does
  // not drift between steps
  const std::uint64_t total_tuples = binomial(n, k);
  std::vector<Hyperplane> sample;
  bool sample_is_all = false;
  std::uint64_t want = cfg.n_subsets_used > 0 ? cfg.n_subsets_used : 1000;
  want = std::min<std::uint64_t>(want, total_tuples);
  if (cfg.use_all_subsets || total_tuples <= want) {
    check_enumeration_cap(n, k, cfg.enum_cap, "criterion sample");
    sample.reserve(total_tuples);
    for_each_subset(n, k, [&](const std::vector<int>& idx) {
      sample.push_back(hyperplane_from_points(gather_rows(x_data, idx)));
    });
    sample_is_all = true;
  } else {
    sample = sample_hyperplanes(x_data, static_cast<int>(want), rng);
  }
  const auto sampled_objective = [&](std::span<const double> p) {
    return objective_from_hyperplanes(sample, p, k);
  };

  // start from the best of 10 random observations
  const int starters = std::min(n, 10);
  const std::vector<int> start_idx = sample_subset(n, starters, rng);
  Vec candidate;
  double cand_obj = std::numeric_limits<double>::infinity();
  for (int idx : start_idx) {
    const auto row = x_data.row(static_cast<std::size_t>(idx));
    const double obj = sampled_objective(row);
    if (obj < cand_obj) {
      cand_obj = obj;
      candidate = Vec(row.begin(), row.end());
    }
  }
  if (trace) trace->objectives.push_back(cand_obj);

  double variance = cfg.sigma_init;
  int successes = 0;
  int trials = 0;
  int steps = 0;
  std::string termination = "max_steps";

  for (int step = 1; step <= cfg.max_steps; ++step) {
    steps = step;
    const double sigma = std::sqrt(variance);

    Vec best_mut;
    double best_mut_obj = std::numeric_limits<double>::infinity();
    for (int mi = 0; mi < cfg.mutations_per_step; ++mi) {
      Vec z(static_cast<std::size_t>(k));
      for (double& c : z) c = rng.normal(sigma);
      const double len = std::abs(rng.normal(sigma));
      const double zn = norm2(z);
      Vec mut = candidate;
      if (zn > 0.0) axpy(mut, len / zn, z);
      const double obj = sampled_objective(mut);
      if (obj < cand_obj) ++successes;
      ++trials;
      if (obj < best_mut_obj) {
        best_mut_obj = obj;
        best_mut = std::move(mut);
      }
    }
    if (best_mut_obj < cand_obj) {
      candidate = std::move(best_mut);
      cand_obj = best_mut_obj;
    }
    if (trace) trace->objectives.push_back(cand_obj);

    if (step % cfg.sigma_ada == 0) {
      const double r = trials > 0 ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
      variance = r > 0.2 ? variance * cfg.ada_factor : variance / cfg.ada_factor;
      successes = 0;
      trials = 0;
    }
    if (std::log10(cfg.sigma_init) - std::log10(variance) > cfg.sigma_log10_dec) {
      termination = "sigma_dec";
      break;
    }
  }

  MedianResult res;
  res.point = std::move(candidate);
  res.algorithm = "evolutionary";
  res.iterations = steps;
  res.hyperplanes_used = sample.size();
  res.seed = cfg.seed;
  res.diagnostics.emplace_back("final_variance", variance);
  res.diagnostics.emplace_back("subset_sample", static_cast<double>(sample.size()));
  res.diagnostics.emplace_back("whitened", 0.0);
  res.notes.push_back(termination);
  if (sample_is_all) {
    res.objective = objective_from_hyperplanes(sample, res.point, k);
  } else {
    finish_objective(res, x_data, &cfg, cfg.enum_cap);
  }
  return res;
}

MedianResult evolutionary_median(const Matrix& x_data, const EvoConfig& cfg, SolveTrace* trace) {
  validate_data(x_data);
  if (x_data.rows() <= x_data.cols())
    throw std::invalid_argument("median computation needs more observations than dimensions");

  Matrix r_inv_sqrt;
  try {
    r_inv_sqrt = inverse_sqrt_psd(covariance(x_data));
  } catch (const SingularScatterError&) {
    MedianResult res = evolutionary_median_raw(x_data, cfg, trace);
    res.notes.push_back("singular_scatter_fallback");
    return res;
  }

  const Vec mean = column_means(x_data);
  Matrix whitened(x_data.rows(), x_data.cols());
  for (std::size_t i = 0; i < x_data.rows(); ++i) {
    const Vec c = matvec(r_inv_sqrt, sub(x_data.row(i), mean));
    for (std::size_t j = 0; j < x_data.cols(); ++j) whitened(i, j) = c[j];
  }

  MedianResult res = evolutionary_median_raw(whitened, cfg, trace);
  const Matrix back = sqrt_psd(covariance(x_data));
  res.point = add(mean, matvec(back, res.point));
  for (auto& [name, value] : res.diagnostics)
    if (name == "whitened") value = 1.0;
  finish_objective(res, x_data, &cfg, cfg.enum_cap);
  return res;
}

MedianResult compute_median(const Matrix& x_data, const MedianOptions& opts) {
  if (opts.sp < 1) throw std::invalid_argument("sp must be at least 1");
  if (opts.sp > 1) return median_averaged(x_data, opts);

  switch (opts.algorithm) {
    case MedianAlg::kExact: {
      SolverOptions s;
      s.enum_cap = opts.enum_cap;
      s.max_rounds = opts.max_rounds;
      s.line_search = opts.line_search;
      s.seed = opts.seed;
      return exact_median(x_data, s);
    }
    case MedianAlg::kBoundedExact: {
      SolverOptions s;
      s.enum_cap = opts.enum_cap;
      s.max_rounds = opts.max_rounds;
      s.line_search = opts.line_search;
      s.seed = opts.seed;
      s.volume_ratio = opts.volume_ratio;
      return bounded_exact_median(x_data, s);
    }
    case MedianAlg::kGrid: {
      GridConfig g = opts.grid;
      g.seed = opts.seed;
      g.enum_cap = opts.enum_cap;
      return grid_median(x_data, g);
    }
    case MedianAlg::kEvolutionary: {
      EvoConfig e = opts.evo;
      e.seed = opts.seed;
      e.enum_cap = opts.enum_cap;
      return opts.raw ? evolutionary_median_raw(x_data, e) : evolutionary_median(x_data, e);
    }
    case MedianAlg::kOracle: {
      const BruteForceResult bf = brute_force_median(x_data, 10'000'000, opts.enum_cap);
      MedianResult res;
      res.point = bf.points.front();
      res.objective = bf.objective;
      res.algorithm = "oracle";
      res.iterations = 1;
      res.hyperplanes_used = bf.candidates;
      res.seed = opts.seed;
      res.diagnostics.emplace_back("minimizers", static_cast<double>(bf.points.size()));
      return res;
    }
  }
  throw std::invalid_argument("unknown algorithm");
}

MedianResult median_averaged(const Matrix& x_data, const MedianOptions& opts) {
  if (opts.sp < 1) throw std::invalid_argument("sp must be at least 1");
  const std::size_t k = x_data.cols();

  MedianOptions single = opts;
  single.sp = 1;

  Vec mean_point(k, 0.0);
  MedianResult last;
  for (int run = 0; run < opts.sp; ++run) {
    single.seed = opts.sp == 1 ? opts.seed : Rng::derive(opts.seed, static_cast<std::uint64_t>(run));
    last = compute_median(x_data, single);
    axpy(mean_point, 1.0 / static_cast<double>(opts.sp), last.point);
  }
  if (opts.sp == 1) return last;

  MedianResult res = std::move(last);
  res.point = std::move(mean_point);
  res.seed = opts.seed;
  res.iterations = opts.sp;
  res.diagnostics.emplace_back("averaged_runs", static_cast<double>(opts.sp));
  finish_objective(res, x_data, &opts.evo, opts.enum_cap);
  return res;
}

const char* median_alg_name(MedianAlg alg) {
  switch (alg) {
    case MedianAlg::kExact: return "exact";
    case MedianAlg::kBoundedExact: return "bounded_exact";
    case MedianAlg::kGrid: return "grid";
    case MedianAlg::kEvolutionary: return "evolutionary";
    case MedianAlg::kOracle: return "oracle";
  }
  return "?";
}

}  // namespace ojamed
