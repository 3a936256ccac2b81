#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace ojamed {

// Every randomized code path draws through this wrapper so that a given seed
// reproduces bit-identical results regardless of platform or standard
// library: the engine (mt19937_64) is fully specified by the standard, and
// the distributions are implemented here instead of <random>.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [0, n), n > 0; rejection keeps the draw exactly uniform
  std::uint64_t below(std::uint64_t n) {
    assert(n > 0);
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  // uniform integer in [lo, hi], inclusive
  int uniform_int(int lo, int hi) {
    assert(lo <= hi);
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // standard normal via Box-Muller; the spare keeps call counts even
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double stddev) { return stddev * normal(); }

  // Independent child seed for stream `index`; used for permutation
  // replicates and repeated solver runs so results do not depend on
  // evaluation order.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ojamed
