#include "objective.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace ojamed {

double objective_from_hyperplanes(std::span<const Hyperplane> hps, std::span<const double> x,
                                  int k) {
  double s = 0.0;
  for (const Hyperplane& h : hps) s += std::abs(h.signed_eval(x));
  return s / factorial(k);
}

double oja_objective(const Matrix& x_data, std::span<const double> x, std::uint64_t cap) {
  const int n = static_cast<int>(x_data.rows());
  const int k = static_cast<int>(x_data.cols());
  assert(x.size() == static_cast<std::size_t>(k));
  check_enumeration_cap(n, k, cap, "criterion evaluation");
  double s = 0.0;
  for_each_subset(n, k, [&](const std::vector<int>& idx) {
    const Hyperplane h = hyperplane_from_points(gather_rows(x_data, idx));
    s += std::abs(h.signed_eval(x));
  });
  return s / factorial(k);
}

double oja_objective(const Matrix& x_data, std::span<const double> x,
                     std::span<const std::vector<int>> subsets) {
  const int k = static_cast<int>(x_data.cols());
  double s = 0.0;
  for (const std::vector<int>& idx : subsets) {
    assert(static_cast<int>(idx.size()) == k);
    const Hyperplane h = hyperplane_from_points(gather_rows(x_data, idx));
    s += std::abs(h.signed_eval(x));
  }
  return s / factorial(k);
}

double oja_depth(const Matrix& x_data, std::span<const double> x, std::uint64_t cap) {
  const double obj = oja_objective(x_data, x, cap);
  const double combos =
      static_cast<double>(binomial(static_cast<int>(x_data.rows()), static_cast<int>(x_data.cols())));
  return 1.0 / (1.0 + obj / combos);
}

namespace {

Vec point_at(const Line& line, double t) {
  Vec p = line.anchor;
  axpy(p, t, line.direction);
  return p;
}

// Region clip of the line parameter; returns false when the line misses the
// region entirely.
bool clip_to_region(const Line& line, const Halfspaces& region, double& t_lo, double& t_hi) {
  const double dscale = norm2(line.direction);
  for (const Hyperplane& b : region.bounds) {
    const double fa = b.signed_eval(line.anchor);
    const double db = dot(b.normal, line.direction);
    const double bscale = norm2(b.normal) * dscale;
    if (std::abs(db) <= 1e-14 * bscale) {
      const double scale = std::abs(b.offset) + norm2(b.normal) * norm2(line.anchor);
      if (fa < -1e-9 * scale) return false;  // parallel and outside
      continue;
    }
    const double t = -fa / db;
    if (db > 0.0)
      t_lo = std::max(t_lo, t);
    else
      t_hi = std::min(t_hi, t);
  }
  return t_lo <= t_hi + 1e-12;
}

std::optional<LineMinimum> minimize_evaluate_each(std::span<const Hyperplane> crossings,
                                                  std::span<const Hyperplane> objective_hps,
                                                  int k, const Line& line,
                                                  const Halfspaces* region, double tie_tol) {
  const double dscale = norm2(line.direction);
  std::vector<double> ts;
  ts.reserve(crossings.size());
  for (const Hyperplane& h : crossings) {
    if (h.degenerate()) continue;
    const double db = dot(h.normal, line.direction);
    if (std::abs(db) <= 1e-14 * norm2(h.normal) * dscale) continue;  // parallel
    ts.push_back(-h.signed_eval(line.anchor) / db);
  }
  std::sort(ts.begin(), ts.end());

  std::optional<LineMinimum> best;
  for (double t : ts) {
    Vec p = point_at(line, t);
    if (region && !region->contains(p)) continue;
    const double obj = objective_from_hyperplanes(objective_hps, p, k);
    if (!best || obj < best->objective) {
      best = LineMinimum{std::move(p), obj, t, {}};
    } else if (tie_tol >= 0.0 && obj <= best->objective + tie_tol) {
      best->tied_points.push_back(std::move(p));
    }
  }
  if (best && tie_tol >= 0.0) {
    // keep only ties of the final minimum
    std::erase_if(best->tied_points, [&](const Vec& p) {
      return objective_from_hyperplanes(objective_hps, p, k) > best->objective + tie_tol;
    });
  }
  return best;
}

// The sweep needs no crossing list: the minimizer of the convex piecewise
// linear restriction is itself a breakpoint (or a region boundary point,
// which the bounded solver also carries as a crossing hyperplane). Only the
// breakpoints inside the region window are sorted; everything outside enters
// through the starting slope, so a tight region makes the search cheap.
std::optional<LineMinimum> minimize_prefix_sweep(std::span<const Hyperplane> objective_hps,
                                                 int k, const Line& line,
                                                 const Halfspaces* region, double tie_tol) {
  double t_lo = -std::numeric_limits<double>::infinity();
  double t_hi = std::numeric_limits<double>::infinity();
  if (region && !clip_to_region(line, *region, t_lo, t_hi)) return std::nullopt;

  const double dscale = norm2(line.direction);
  struct Breakpoint {
    double t;
    double weight;  // |slope| of the term
  };
  std::vector<Breakpoint> window;
  window.reserve(objective_hps.size());
  double slope = 0.0;  // derivative just above t_lo, before any window flip
  bool any_term = false;
  for (const Hyperplane& h : objective_hps) {
    const double b = dot(h.normal, line.direction);
    if (std::abs(b) <= 1e-14 * norm2(h.normal) * dscale) continue;
    any_term = true;
    const double w = std::abs(b);
    const double t = -h.signed_eval(line.anchor) / b;
    if (t < t_lo) {
      slope += w;  // this term already flipped below the window
    } else {
      slope -= w;
      if (t <= t_hi) window.push_back({t, w});
    }
  }
  if (!any_term) return std::nullopt;  // criterion flat along this line
  std::sort(window.begin(), window.end(),
            [](const Breakpoint& a, const Breakpoint& b) { return a.t < b.t; });

  // first point where the derivative turns nonnegative
  double t_star;
  if (slope >= 0.0) {
    t_star = t_lo;  // decreasing already ended before the window
  } else {
    t_star = t_hi;  // fallback: still decreasing at the window end
    for (const Breakpoint& bp : window) {
      slope += 2.0 * bp.weight;
      if (slope >= 0.0) {
        t_star = bp.t;
        break;
      }
    }
  }
  if (!std::isfinite(t_star)) return std::nullopt;

  Vec p = point_at(line, t_star);
  if (region && !region->contains(p)) return std::nullopt;
  const double obj = objective_from_hyperplanes(objective_hps, p, k);
  LineMinimum out{std::move(p), obj, t_star, {}};

  if (tie_tol >= 0.0) {
    for (const Breakpoint& bp : window) {
      if (bp.t <= t_star) continue;
      Vec q = point_at(line, bp.t);
      if (region && !region->contains(q)) continue;
      if (objective_from_hyperplanes(objective_hps, q, k) <= out.objective + tie_tol)
        out.tied_points.push_back(std::move(q));
    }
  }
  return out;
}

}  // namespace

std::optional<LineMinimum> minimize_on_line(std::span<const Hyperplane> crossings,
                                            std::span<const Hyperplane> objective_hps, int k,
                                            const Line& line, const Halfspaces* region,
                                            LineSearch mode, double tie_tol) {
  assert(norm2(line.direction) > 0.0);
  if (mode == LineSearch::kPrefixSweep)
    return minimize_prefix_sweep(objective_hps, k, line, region, tie_tol);
  return minimize_evaluate_each(crossings, objective_hps, k, line, region, tie_tol);
}

}  // namespace ojamed
