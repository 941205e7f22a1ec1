#include "scma/mother.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "scma/rng.hpp"

namespace scma {

namespace {

// Two smallest squared pairwise distances of the columns implied by perms.
struct DistKey {
  double d1 = 0.0, d2 = 0.0;
  bool operator>(const DistKey& o) const {
    if (d1 != o.d1) return d1 > o.d1;
    return d2 > o.d2;
  }
  bool operator==(const DistKey& o) const { return d1 == o.d1 && d2 == o.d2; }
};

DistKey column_key(const std::vector<double>& base, const std::vector<std::vector<int>>& perms,
                   int N, int M) {
  double d1 = std::numeric_limits<double>::infinity();
  double d2 = d1;
  for (int a = 0; a < M; ++a)
    for (int b = a + 1; b < M; ++b) {
      double d = 0.0;
      for (int n = 0; n < N; ++n) {
        const double t = base[perms[n][a]] - base[perms[n][b]];
        d += t * t;
      }
      if (d < d1) {
        d2 = d1;
        d1 = d;
      } else if (d < d2) {
        d2 = d;
      }
    }
  return {d1, d2};
}

bool perms_less(const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b) {
  return a < b;
}

}  // namespace

double med(const std::vector<std::vector<cplx>>& points) {
  if (points.size() < 2) throw std::invalid_argument("med: need at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < points.size(); ++a)
    for (size_t b = a + 1; b < points.size(); ++b) {
      double d = 0.0;
      for (size_t n = 0; n < points[a].size(); ++n) d += std::norm(points[a][n] - points[b][n]);
      best = std::min(best, d);
    }
  return std::sqrt(best);
}

double med_real(const std::vector<std::vector<double>>& points) {
  std::vector<std::vector<cplx>> c(points.size());
  for (size_t i = 0; i < points.size(); ++i) c[i].assign(points[i].begin(), points[i].end());
  return med(c);
}

MotherConstellation binary_switching(const PamMultiset& cm, int N,
                                     const PermutationSearchConfig& cfg) {
  if (N < 1) throw std::invalid_argument("binary_switching: N must be >= 1");
  if (cfg.restarts < 1) throw std::invalid_argument("binary_switching: restarts must be >= 1");
  const int M = cm.size();
  const std::vector<double>& base = cm.values;

  std::vector<int> identity(M);
  std::iota(identity.begin(), identity.end(), 0);

  std::vector<std::vector<int>> best_perms;
  DistKey best_key{-1.0, -1.0};

  SplitMix64 rng(cfg.rng_seed);
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::vector<std::vector<int>> perms(N, identity);
    // Restart 0 starts from the identity so the result can never fall
    // below the identity-permutation MED.
    if (restart > 0)
      for (int n = 1; n < N; ++n) rng.shuffle(perms[n]);

    DistKey key = column_key(base, perms, N, M);
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
      DistKey cand_key = key;
      int cand_n = -1, cand_p = -1, cand_q = -1;
      std::vector<std::vector<int>> cand_perms;
      for (int n = 1; n < N; ++n)
        for (int p = 0; p < M; ++p)
          for (int q = p + 1; q < M; ++q) {
            if (base[perms[n][p]] == base[perms[n][q]]) continue;  // no-op swap
            std::swap(perms[n][p], perms[n][q]);
            const DistKey k = column_key(base, perms, N, M);
            if (k > cand_key || (cand_n >= 0 && k == cand_key && perms_less(perms, cand_perms))) {
              cand_key = k;
              cand_n = n;
              cand_p = p;
              cand_q = q;
              cand_perms = perms;
            }
            std::swap(perms[n][p], perms[n][q]);
          }
      if (cand_n < 0) break;
      std::swap(perms[cand_n][cand_p], perms[cand_n][cand_q]);
      key = cand_key;
    }

    if (key > best_key) {
      best_key = key;
      best_perms = perms;
    }
  }

  MotherConstellation mc;
  mc.N = N;
  mc.M = M;
  mc.perms = best_perms;
  mc.rows.assign(N, std::vector<double>(M));
  const double avg_codeword_energy = N * cm.average_energy();
  const double scale = 1.0 / std::sqrt(avg_codeword_energy);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < M; ++m) mc.rows[n][m] = base[best_perms[n][m]] * scale;
  mc.med = std::sqrt(best_key.d1) * scale;
  return mc;
}

DistinctnessResult codeword_distinctness_check(const MotherConstellation& mc) {
  DistinctnessResult res;
  for (int a = 0; a < mc.M; ++a)
    for (int b = a + 1; b < mc.M; ++b) {
      bool same = true;
      for (int n = 0; n < mc.N && same; ++n) same = (mc.rows[n][a] == mc.rows[n][b]);
      if (same) {
        res.distinct = false;
        res.offending.emplace_back(a, b);
      }
    }
  return res;
}

}  // namespace scma
