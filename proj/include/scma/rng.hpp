#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace scma {

/// Small deterministic PRNG (splitmix64). Used everywhere instead of the
/// standard distributions so that results are identical across platforms.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  /// Standard normal pair via Box-Muller.
  void gaussian_pair(double& g1, double& g2) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * uniform();
    g1 = r * std::cos(a);
    g2 = r * std::sin(a);
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double g1, g2;
    gaussian_pair(g1, g2);
    spare_ = g2;
    have_spare_ = true;
    return g1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Stream derivation for counter-based parallel RNG (hash of seed and index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 s(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  return s.next();
}

}  // namespace scma
