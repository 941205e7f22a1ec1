#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "scma/lppam.hpp"

namespace scma {

using cplx = std::complex<double>;

/// N x M mother constellation: row n is a permutation of the one-dimensional
/// multiset, rescaled to unit average codeword energy ((1/M) sum_m ||col m||^2 = 1).
struct MotherConstellation {
  int N = 0, M = 0;
  std::vector<std::vector<double>> rows;  // N x M
  std::vector<std::vector<int>> perms;    // perms[n][m] indexes into the base multiset
  double med = 0.0;                       // minimum column distance after normalization

  std::vector<double> column(int m) const {
    std::vector<double> c(N);
    for (int n = 0; n < N; ++n) c[n] = rows[n][m];
    return c;
  }
};

struct PermutationSearchConfig {
  int restarts = 8;
  int max_sweeps = 200;
  std::uint64_t rng_seed = 1;
};

/// Minimum pairwise Euclidean distance over a point set; 0 when duplicated.
double med(const std::vector<std::vector<cplx>>& points);
double med_real(const std::vector<std::vector<double>>& points);

/// Steepest-ascent transposition search over per-dimension permutations
/// (pi_1 fixed to identity), maximizing (MED, second-smallest distance) with
/// lexicographic permutation order as the final tie-break. Best over restarts.
MotherConstellation binary_switching(const PamMultiset& cm, int N,
                                     const PermutationSearchConfig& cfg);

struct DistinctnessResult {
  bool distinct = true;
  std::vector<std::pair<int, int>> offending;  // duplicated column index pairs
};
DistinctnessResult codeword_distinctness_check(const MotherConstellation& mc);

}  // namespace scma
