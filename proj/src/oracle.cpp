#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exact.hpp"
#include "objective.hpp"

namespace ojamed {

BruteForceResult brute_force_median(const Matrix& x_data, std::uint64_t max_solves,
                                    std::uint64_t enum_cap) {
  validate_data(x_data);
  if (x_data.rows() <= x_data.cols())
    throw std::invalid_argument("median computation needs more observations than dimensions");
  const int k = static_cast<int>(x_data.cols());

  const HyperplaneSet hs = enumerate_hyperplanes(x_data, enum_cap);
  std::vector<Hyperplane> planes;
  planes.reserve(hs.all.size());
  for (const Hyperplane& h : hs.all)
    if (!h.degenerate()) planes.push_back(h);

  const int m = static_cast<int>(planes.size());
  const std::uint64_t solves = binomial(m, k);
  if (solves > max_solves)
    throw EnumerationCapError("brute force needs " + std::to_string(solves) +
                                  " vertex solves, above the cap of " + std::to_string(max_solves),
                              solves, max_solves);

  double scale = 0.0;
  for (std::size_t i = 0; i < x_data.rows(); ++i) scale = std::max(scale, norm_inf(x_data.row(i)));

  BruteForceResult out;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Vec> keep;

  for_each_subset(m, k, [&](const std::vector<int>& idx) {
    Matrix a(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    Vec b(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
      const Hyperplane& h = planes[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])];
      for (int j = 0; j < k; ++j) a(static_cast<std::size_t>(r), static_cast<std::size_t>(j)) = h.normal[static_cast<std::size_t>(j)];
      b[static_cast<std::size_t>(r)] = -h.offset;
    }
    const std::optional<Vec> x = solve(std::move(a), std::move(b));
    if (!x) return;
    ++out.candidates;
    const double obj = objective_from_hyperplanes(planes, *x, k);
    const double tol = 1e-9 * (1.0 + std::abs(best));
    if (obj < best - tol) {
      best = obj;
      keep.clear();
      keep.push_back(*x);
    } else if (obj <= best + tol) {
      best = std::min(best, obj);
      keep.push_back(*x);
    }
  });

  if (keep.empty()) throw DegenerateDataError("no intersection vertex exists");

  // drop stragglers of earlier, slightly larger minima and merge duplicates
  const double obj_tol = 1e-9 * (1.0 + std::abs(best));
  const double point_tol = 1e-9 * (scale + 1.0);
  std::sort(keep.begin(), keep.end());
  for (Vec& p : keep) {
    if (objective_from_hyperplanes(planes, p, k) > best + obj_tol) continue;
    bool dup = false;
    for (const Vec& q : out.points)
      if (norm2(sub(p, q)) <= point_tol) {
        dup = true;
        break;
      }
    if (!dup) out.points.push_back(std::move(p));
  }
  out.objective = best;
  return out;
}

}  // namespace ojamed
