#include "exact.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "rng.hpp"

namespace ojamed {

namespace {

constexpr double kThroughTol = 1e-9;

// magnitude of the functional's terms at x; tolerances derived from it stay
// scale invariant (no absolute floor: offsets and normals of tiny-scale data
// are themselves tiny)
double hyperplane_scale(const Hyperplane& h, std::span<const double> x) {
  return std::abs(h.offset) + norm2(h.normal) * norm2(x);
}

bool passes_through(const Hyperplane& h, std::span<const double> x) {
  return std::abs(h.signed_eval(x)) <= kThroughTol * hyperplane_scale(h, x);
}

// quantized scale- and orientation-free key of the functional, for grouping
// coincident hyperplanes
std::vector<long long> coincidence_key(const Hyperplane& h) {
  Vec v;
  v.reserve(h.normal.size() + 1);
  v.push_back(h.offset);
  v.insert(v.end(), h.normal.begin(), h.normal.end());
  double n2 = 0.0;
  for (double c : v) n2 += c * c;
  n2 = std::sqrt(n2);
  double sign = 1.0;
  for (double c : v)
    if (std::abs(c) > 1e-12 * n2) {
      sign = c > 0.0 ? 1.0 : -1.0;
      break;
    }
  std::vector<long long> key(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    key[i] = static_cast<long long>(std::llround(sign * v[i] / n2 * 1e9));
  return key;
}

}  // namespace

HyperplaneSet enumerate_hyperplanes(const Matrix& x_data, std::uint64_t cap) {
  validate_data(x_data);
  const int n = static_cast<int>(x_data.rows());
  const int k = static_cast<int>(x_data.cols());
  check_enumeration_cap(n, k, cap, "hyperplane enumeration");

  HyperplaneSet out;
  out.all.reserve(static_cast<std::size_t>(binomial(n, k)));
  for_each_subset(n, k, [&](const std::vector<int>& idx) {
    Hyperplane h = hyperplane_from_points(gather_rows(x_data, idx));
    h.source = idx;
    if (h.degenerate()) ++out.degenerate;
    out.all.push_back(std::move(h));
  });

  // coincidence diagnostic: group the nondegenerate functionals after
  // normalizing scale and orientation
  std::map<std::vector<long long>, std::uint64_t> groups;
  for (const Hyperplane& h : out.all)
    if (!h.degenerate()) ++groups[coincidence_key(h)];
  out.distinct = groups.size();
  for (const auto& [key, count] : groups) out.max_multiplicity = std::max(out.max_multiplicity, count);
  return out;
}

Region region_init_bbox(const Matrix& x_data) {
  validate_data(x_data);
  const std::size_t k = x_data.cols();
  Vec lo(k, std::numeric_limits<double>::infinity());
  Vec hi(k, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < x_data.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) {
      lo[j] = std::min(lo[j], x_data(i, j));
      hi[j] = std::max(hi[j], x_data(i, j));
    }

  Region r;
  for (std::size_t j = 0; j < k; ++j) {
    if (hi[j] - lo[j] <= 0.0) r.flat = true;
    Hyperplane lower;  // x_j - lo_j >= 0
    lower.normal.assign(k, 0.0);
    lower.normal[j] = 1.0;
    lower.offset = -lo[j];
    Hyperplane upper;  // hi_j - x_j >= 0
    upper.normal.assign(k, 0.0);
    upper.normal[j] = -1.0;
    upper.offset = hi[j];
    r.halfspaces.bounds.push_back(std::move(lower));
    r.halfspaces.bounds.push_back(std::move(upper));
    r.scale = std::max({r.scale, std::abs(lo[j]), std::abs(hi[j])});
  }

  // box corners
  const std::size_t corners = std::size_t{1} << k;
  r.vertices.reserve(corners);
  for (std::size_t mask = 0; mask < corners; ++mask) {
    Vec v(k);
    for (std::size_t j = 0; j < k; ++j) v[j] = (mask >> j) & 1 ? hi[j] : lo[j];
    r.vertices.push_back(std::move(v));
  }
  if (r.flat) {
    std::sort(r.vertices.begin(), r.vertices.end());
    r.vertices.erase(std::unique(r.vertices.begin(), r.vertices.end()), r.vertices.end());
  }
  return r;
}

std::vector<Vec> region_vertices(const std::vector<Hyperplane>& bounds, double scale) {
  if (bounds.empty()) return {};
  const int k = static_cast<int>(bounds.front().normal.size());
  const int m = static_cast<int>(bounds.size());
  if (m < k) return {};

  Halfspaces hs{bounds};
  std::vector<Vec> vertices;
  for_each_subset(m, k, [&](const std::vector<int>& idx) {
    Matrix a(k, k);
    Vec b(k);
    for (int r = 0; r < k; ++r) {
      const Hyperplane& h = bounds[static_cast<std::size_t>(idx[r])];
      for (int j = 0; j < k; ++j) a(r, j) = h.normal[static_cast<std::size_t>(j)];
      b[static_cast<std::size_t>(r)] = -h.offset;
    }
    const std::optional<Vec> x = solve(std::move(a), std::move(b));
    if (!x || !hs.contains(*x)) return;
    for (const Vec& v : vertices)
      if (norm2(sub(*x, v)) <= 1e-9 * (scale + 1.0)) return;  // duplicate
    vertices.push_back(*x);
  });
  return vertices;
}

double region_bbox_volume(const Region& r) {
  if (r.vertices.empty()) return 0.0;
  const std::size_t k = r.vertices.front().size();
  double vol = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Vec& v : r.vertices) {
      lo = std::min(lo, v[j]);
      hi = std::max(hi, v[j]);
    }
    vol *= hi - lo;
  }
  return vol;
}

std::variant<Region, MedianFound, EmptyRegion> region_cut(const Region& r,
                                                          std::span<const Hyperplane> hps,
                                                          int n, int k, Hyperplane* cut_out,
                                                          Vec* center_out) {
  assert(!r.vertices.empty());
  Vec center(static_cast<std::size_t>(k), 0.0);
  for (const Vec& v : r.vertices) axpy(center, 1.0, v);
  for (double& c : center) c /= static_cast<double>(r.vertices.size());
  if (center_out) *center_out = center;

  const Vec rank = oja_rank_from_hyperplanes(hps, center, n, k);
  Vec g = scaled(rank, -1.0);
  // zero-rank detection relative to the rank's own magnitude scale (the mean
  // normal length); an absolute test would read float residue as a direction
  // on large-scale data and cut straight through the median set
  double rank_scale = 0.0;
  for (const Hyperplane& h : hps) rank_scale += norm2(h.normal);
  rank_scale /= static_cast<double>(binomial(n, k));
  if (norm2(g) <= 1e-12 * std::max(rank_scale, 1e-300))
    return MedianFound{std::move(center)};

  Hyperplane cut;  // g.(x - center) >= 0 keeps the median side
  cut.normal = g;
  cut.offset = -dot(g, center);
  if (cut_out) *cut_out = cut;

  Region next;
  next.flat = r.flat;
  next.scale = r.scale;
  next.halfspaces.bounds = r.halfspaces.bounds;
  next.halfspaces.bounds.push_back(cut);
  next.vertices = region_vertices(next.halfspaces.bounds, next.scale);
  if (next.vertices.empty()) {
    // float-error fallback: relax the cut by a sliver and retry once
    next.halfspaces.bounds.back().offset += 1e-9 * hyperplane_scale(cut, center);
    next.vertices = region_vertices(next.halfspaces.bounds, next.scale);
    if (next.vertices.empty()) return EmptyRegion{};
  }

  // drop bounds that no longer touch any vertex
  std::vector<Hyperplane> kept;
  for (const Hyperplane& b : next.halfspaces.bounds) {
    bool touches = false;
    for (const Vec& v : next.vertices)
      if (passes_through(b, v)) {
        touches = true;
        break;
      }
    if (touches) kept.push_back(b);
  }
  if (static_cast<int>(kept.size()) >= k) next.halfspaces.bounds = std::move(kept);
  return next;
}

namespace {

// Visit (k-1)-subsets of `pool` until fn returns true; exhaustive in
// lexicographic order when the count fits the cap, otherwise `cap` sampled
// draws. Returns true when fn asked to stop.
bool try_line_subsets(const std::vector<std::size_t>& pool, int k, std::uint64_t cap, Rng& rng,
                      const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  const int m = static_cast<int>(pool.size());
  const int want = k - 1;
  if (want > m) return false;
  std::vector<std::size_t> pick(static_cast<std::size_t>(want));
  if (binomial(m, want) <= cap) {
    if (want == 0) return fn(pick);
    std::vector<int> idx(static_cast<std::size_t>(want));
    for (int i = 0; i < want; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      for (int i = 0; i < want; ++i) pick[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      if (fn(pick)) return true;
      int pos = want - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - want + pos) --pos;
      if (pos < 0) return false;
      ++idx[static_cast<std::size_t>(pos)];
      for (int j = pos + 1; j < want; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  for (std::uint64_t t = 0; t < cap; ++t) {
    const std::vector<int> s = sample_subset(m, want, rng);
    for (int i = 0; i < want; ++i) pick[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])];
    if (fn(pick)) return true;
  }
  return false;
}

std::optional<Line> line_from(const std::vector<Hyperplane>& cross,
                              const std::vector<std::size_t>& subset, std::span<const double> anchor,
                              int k) {
  Matrix constraints(subset.size(), static_cast<std::size_t>(k));
  for (std::size_t r = 0; r < subset.size(); ++r)
    for (int j = 0; j < k; ++j)
      constraints(r, static_cast<std::size_t>(j)) = cross[subset[r]].normal[static_cast<std::size_t>(j)];
  std::optional<Vec> dir = null_direction(std::move(constraints));
  if (!dir) return std::nullopt;
  return Line{Vec(anchor.begin(), anchor.end()), std::move(*dir)};
}

struct WalkOutcome {
  Vec point;
  double objective = 0.0;
  int rounds = 0;
  bool degenerate_start = false;
  // final no-improvement pass had to sample lines instead of trying them all
  bool sampled_certificate = false;
};

WalkOutcome candidate_walk(const std::vector<Hyperplane>& cross,
                           const std::vector<Hyperplane>& obj_hps, int k, Vec start,
                           const Halfspaces* region, int max_rounds, const SolverOptions& opts,
                           Rng& rng, SolveTrace* trace) {
  WalkOutcome out;
  out.point = std::move(start);
  out.objective = objective_from_hyperplanes(obj_hps, out.point, k);
  if (trace) trace->objectives.push_back(out.objective);

  std::set<Vec> visited;
  visited.insert(out.point);

  for (int round = 1; round <= max_rounds; ++round) {
    out.rounds = round;

    // hyperplanes through the candidate, one representative per coincidence
    // class: duplicated observations produce stacks of identical functionals
    // whose subsets would all span the same lines
    std::vector<std::size_t> through;
    std::set<std::vector<long long>> seen;
    for (std::size_t i = 0; i < cross.size(); ++i) {
      if (cross[i].degenerate() || !passes_through(cross[i], out.point)) continue;
      if (seen.insert(coincidence_key(cross[i])).second) through.push_back(i);
    }

    // Exhaustive passes take the best move over every line through the
    // candidate (one candidate update per round, so the round budget is spent
    // on maximal steps). Oversized pools fall back to sampled lines with an
    // early exit at the first improvement; the sampled budget is kept small
    // because it is pure certificate work once no improvement exists.
    const std::uint64_t line_count = binomial(static_cast<int>(through.size()), k - 1);
    const bool exhaustive = line_count <= opts.max_lines_per_candidate;
    const std::uint64_t budget =
        exhaustive ? opts.max_lines_per_candidate
                   : std::min<std::uint64_t>(opts.max_lines_per_candidate, 2000);

    bool had_line = false;
    std::optional<LineMinimum> best;
    try_line_subsets(through, k, budget, rng,
                     [&](const std::vector<std::size_t>& subset) {
                       const std::optional<Line> line = line_from(cross, subset, out.point, k);
                       if (!line) return false;
                       had_line = true;
                       const std::optional<LineMinimum> lm = minimize_on_line(
                           cross, obj_hps, k, *line, region, opts.line_search);
                       if (!lm || lm->objective >= out.objective) return false;
                       if (!best || lm->objective < best->objective) best = lm;
                       return !exhaustive;  // sampled mode: move immediately
                     });

    if (round == 1 && !had_line && k > 1) out.degenerate_start = true;
    if (!best) {
      out.sampled_certificate = !exhaustive;
      break;
    }
    out.point = best->point;
    out.objective = best->objective;
    if (trace) trace->objectives.push_back(out.objective);
    if (!visited.insert(out.point).second) break;  // cycling guard
  }
  return out;
}

Vec initial_candidate(const Matrix& x_data) {
  const Vec mean = column_means(x_data);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x_data.rows(); ++i) {
    const double d = norm2(sub(x_data.row(i), mean));
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return Vec(x_data.row(best).begin(), x_data.row(best).end());
}

std::vector<Hyperplane> nondegenerate(const std::vector<Hyperplane>& all) {
  std::vector<Hyperplane> out;
  out.reserve(all.size());
  for (const Hyperplane& h : all)
    if (!h.degenerate()) out.push_back(h);
  return out;
}

void require_median_input(const Matrix& x_data) {
  validate_data(x_data);
  if (x_data.rows() <= x_data.cols())
    throw std::invalid_argument("median computation needs more observations than dimensions");
}

}  // namespace

MedianResult exact_median(const Matrix& x_data, const SolverOptions& opts, SolveTrace* trace) {
  require_median_input(x_data);
  const int n = static_cast<int>(x_data.rows());
  const int k = static_cast<int>(x_data.cols());
  const HyperplaneSet hs = enumerate_hyperplanes(x_data, opts.enum_cap);
  const std::vector<Hyperplane> cross = nondegenerate(hs.all);

  Rng rng(Rng::derive(opts.seed, 0x0e01));
  const int max_rounds = opts.max_rounds > 0 ? opts.max_rounds : n;
  WalkOutcome walk = candidate_walk(cross, cross, k, initial_candidate(x_data), nullptr,
                                    max_rounds, opts, rng, trace);
  if (walk.degenerate_start)
    throw DegenerateDataError("no intersection line through the starting candidate");

  MedianResult res;
  res.point = std::move(walk.point);
  res.objective = walk.objective;
  res.algorithm = "exact";
  res.iterations = walk.rounds;
  res.hyperplanes_used = hs.all.size();
  res.seed = opts.seed;
  res.diagnostics.emplace_back("degenerate_tuples", static_cast<double>(hs.degenerate));
  if (walk.sampled_certificate) res.notes.push_back("sampled_line_certificate");
  return res;
}

MedianResult bounded_exact_median(const Matrix& x_data, const SolverOptions& opts,
                                  SolveTrace* trace) {
  require_median_input(x_data);
  const int n = static_cast<int>(x_data.rows());
  const int k = static_cast<int>(x_data.cols());
  const HyperplaneSet hs = enumerate_hyperplanes(x_data, opts.enum_cap);
  const std::vector<Hyperplane> data_hps = nondegenerate(hs.all);

  Rng rng(Rng::derive(opts.seed, 0x0e02));

  Region region = region_init_bbox(x_data);
  const double v0 = region_bbox_volume(region);
  double ratio = 1.0;
  int cuts = 0;
  bool rank_zero_center = false;
  bool empty_region_stop = false;

  if (v0 > 0.0) {
    double prev_ratio = 1.0;
    int stall = 0;
    while (ratio > opts.volume_ratio && cuts < opts.max_cuts) {
      Hyperplane cut_hp;
      Vec cut_center;
      auto next = region_cut(region, data_hps, n, k, &cut_hp, &cut_center);
      if (std::holds_alternative<MedianFound>(next)) {
        rank_zero_center = true;
        break;
      }
      if (std::holds_alternative<EmptyRegion>(next)) {
        empty_region_stop = true;
        break;
      }
      region = std::move(std::get<Region>(next));
      ++cuts;
      ratio = region_bbox_volume(region) / v0;
      if (trace) {
        trace->cuts.push_back({std::move(cut_hp), std::move(cut_center)});
        trace->volume_ratios.push_back(ratio);
      }
      if (ratio >= prev_ratio * (1.0 - 1e-6)) {
        if (++stall >= 5) break;
      } else {
        stall = 0;
      }
      prev_ratio = ratio;
    }
  }

  // crossing set: data hyperplanes plus the surviving bounds
  std::vector<Hyperplane> cross = data_hps;
  for (const Hyperplane& b : region.halfspaces.bounds) cross.push_back(b);

  // random initial line on the region border: a vertex plus k-1 incident
  // bounds
  Vec start;
  std::optional<Line> init_line;
  if (!region.vertices.empty()) {
    const Vec& v = region.vertices[rng.below(region.vertices.size())];
    start = v;
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < region.halfspaces.bounds.size(); ++i)
      if (passes_through(region.halfspaces.bounds[i], v)) active.push_back(i);
    for (int attempt = 0; attempt < 64 && !init_line; ++attempt) {
      if (static_cast<int>(active.size()) < k - 1) break;
      const std::vector<int> s = sample_subset(static_cast<int>(active.size()), k - 1, rng);
      std::vector<std::size_t> subset(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) subset[i] = active[static_cast<std::size_t>(s[i])];
      init_line = line_from(region.halfspaces.bounds, subset, v, k);
    }
  } else {
    start = initial_candidate(x_data);
  }

  if (init_line) {
    const std::optional<LineMinimum> lm = minimize_on_line(cross, data_hps, k, *init_line,
                                                           &region.halfspaces, opts.line_search);
    if (lm) start = lm->point;
  }

  const int max_rounds = opts.max_rounds > 0 ? opts.max_rounds : n;
  WalkOutcome walk = candidate_walk(cross, data_hps, k, std::move(start), &region.halfspaces,
                                    max_rounds, opts, rng, trace);
  if (walk.degenerate_start)
    throw DegenerateDataError("no intersection line through the starting candidate");

  MedianResult res;
  res.point = std::move(walk.point);
  res.objective = walk.objective;
  res.algorithm = "bounded_exact";
  res.iterations = walk.rounds;
  res.hyperplanes_used = hs.all.size();
  res.region_volume_ratio = ratio;
  res.seed = opts.seed;
  res.diagnostics.emplace_back("cuts", static_cast<double>(cuts));
  res.diagnostics.emplace_back("bounds", static_cast<double>(region.halfspaces.bounds.size()));
  res.diagnostics.emplace_back("degenerate_tuples", static_cast<double>(hs.degenerate));
  if (walk.sampled_certificate) res.notes.push_back("sampled_line_certificate");
  if (rank_zero_center) res.notes.push_back("rank_zero_center");
  if (empty_region_stop) res.notes.push_back("empty_region_fallback");
  if (region.flat) res.notes.push_back("flat_bounding_box");
  return res;
}

std::vector<Vec> median_set_vertices(const Matrix& x_data, const SolverOptions& opts) {
  require_median_input(x_data);
  const int k = static_cast<int>(x_data.cols());
  const HyperplaneSet hs = enumerate_hyperplanes(x_data, opts.enum_cap);
  const std::vector<Hyperplane> cross = nondegenerate(hs.all);

  const MedianResult first = exact_median(x_data, opts);
  double best_obj = first.objective;
  const double obj_tol = 1e-9 * (1.0 + std::abs(best_obj));
  const double point_tol = 1e-9 * (1.0 + norm2(first.point));

  Rng rng(Rng::derive(opts.seed, 0x0e03));
  std::vector<Vec> out{first.point};
  std::vector<Vec> queue{first.point};

  const auto known = [&](const Vec& p) {
    for (const Vec& q : out)
      if (norm2(sub(p, q)) <= point_tol) return true;
    return false;
  };

  std::size_t pops = 0;
  while (!queue.empty() && pops < 4096) {
    ++pops;
    const Vec v = std::move(queue.back());
    queue.pop_back();

    std::vector<std::size_t> through;
    std::set<std::vector<long long>> seen;
    for (std::size_t i = 0; i < cross.size(); ++i) {
      if (!passes_through(cross[i], v)) continue;
      if (seen.insert(coincidence_key(cross[i])).second) through.push_back(i);
    }

    try_line_subsets(through, k, opts.max_lines_per_candidate, rng,
                     [&](const std::vector<std::size_t>& subset) {
                       const std::optional<Line> line = line_from(cross, subset, v, k);
                       if (!line) return false;
                       const std::optional<LineMinimum> lm =
                           minimize_on_line(cross, cross, k, *line, nullptr,
                                            LineSearch::kEvaluateEach, obj_tol);
                       if (!lm) return false;
                       if (lm->objective < best_obj - obj_tol) {
                         // the walk missed a better vertex; restart collection
                         best_obj = lm->objective;
                         out.clear();
                         queue.clear();
                       } else if (lm->objective > best_obj + obj_tol) {
                         return false;
                       }
                       std::vector<Vec> found = lm->tied_points;
                       found.push_back(lm->point);
                       for (Vec& p : found) {
                         if (known(p)) continue;
                         out.push_back(p);
                         queue.push_back(std::move(p));
                       }
                       return false;  // keep exploring every line
                     });
  }

  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ojamed
