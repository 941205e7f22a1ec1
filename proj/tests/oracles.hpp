// Independent reference implementations used to validate the library. These
// deliberately avoid the library's closed forms: moments come from Monte
// Carlo through the linearized signal model, distances from brute force, and
// error rates from two-hypothesis simulation of the full channel.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "scma/codebook.hpp"
#include "scma/lppam.hpp"
#include "scma/pnmetrics.hpp"
#include "scma/rng.hpp"

namespace oracles {

using scma::cplx;

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;  // standard error of the sample mean
  double se_var = 0.0;   // standard error of the sample variance
};

/// Sample moments of eta = L_w - L_w^ under the linearized (small-angle)
/// model: in w's rotated frame the received signal is (|w_k| + x_k, y_k)
/// with x ~ N(0, N0/2) and y ~ N(0, sigma_p^2 |w_k|^2 + N0/2) per resource.
inline Moments eta_moments_mc(const std::vector<cplx>& w, const std::vector<cplx>& what,
                              double sigma_p2, double n0, std::uint64_t draws,
                              std::uint64_t seed) {
  const size_t K = w.size();
  const double hn = 0.5 * n0;

  struct Res {
    double aw, ah, cd, sd, sw, sh, log_ratio;
    bool same;
  };
  std::vector<Res> res(K);
  for (size_t k = 0; k < K; ++k) {
    const double aw = std::abs(w[k]);
    const double ah = std::abs(what[k]);
    const double argw = aw > 0.0 ? std::arg(w[k]) : 0.0;
    const double argh = ah > 0.0 ? std::arg(what[k]) : 0.0;
    const double delta = argw - argh;
    res[k] = {aw,
              ah,
              std::cos(delta),
              std::sin(delta),
              sigma_p2 * aw * aw + hn,
              sigma_p2 * ah * ah + hn,
              std::log((sigma_p2 * aw * aw + hn) / (sigma_p2 * ah * ah + hn)),
              w[k] == what[k]};
  }

  scma::SplitMix64 rng(seed);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (std::uint64_t t = 0; t < draws; ++t) {
    double eta = 0.0;
    for (const Res& r : res) {
      if (r.same) continue;
      double gx, gy;
      rng.gaussian_pair(gx, gy);
      const double x = gx * std::sqrt(hn);
      const double y = gy * std::sqrt(r.sw);
      // Rotate the frame-of-w sample into the frame of w^.
      const double re_h = (r.aw + x) * r.cd - y * r.sd;
      const double im_h = (r.aw + x) * r.sd + y * r.cd;
      eta += r.log_ratio + x * x / hn + y * y / r.sw -
             (re_h - r.ah) * (re_h - r.ah) / hn - im_h * im_h / r.sh;
    }
    s1 += eta;
    s2 += eta * eta;
    s3 += eta * eta * eta;
    s4 += eta * eta * eta * eta;
  }
  const double n = static_cast<double>(draws);
  Moments m;
  m.mean = s1 / n;
  m.variance = s2 / n - m.mean * m.mean;
  // Central fourth moment for the variance's standard error.
  const double mu = m.mean;
  const double m4 =
      s4 / n - 4 * mu * s3 / n + 6 * mu * mu * s2 / n - 3 * mu * mu * mu * mu;
  m.se_mean = std::sqrt(m.variance / n);
  m.se_var = std::sqrt(std::max(m4 - m.variance * m.variance, 0.0) / n);
  return m;
}

struct PepMc {
  double rate = 0.0;
  double se = 0.0;
  std::uint64_t errors = 0, trials = 0;
};

/// Restricted two-hypothesis test through the full (non-linearized) channel:
/// transmit w, decide by comparing the Eq.-style decision metric at w and w^.
inline PepMc two_hypothesis_pep_mc(const std::vector<cplx>& w, const std::vector<cplx>& what,
                                   const scma::PnChannelParams& p, std::uint64_t trials,
                                   std::uint64_t seed) {
  const size_t K = w.size();
  scma::SplitMix64 rng(seed);
  std::vector<cplx> r(K);
  const double ns = std::sqrt(0.5 * p.n0);
  const double ps = std::sqrt(p.sigma_p2);
  PepMc out;
  out.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (size_t k = 0; k < K; ++k) {
      const double theta = ps > 0.0 ? ps * rng.gaussian() : 0.0;
      double n1, n2;
      rng.gaussian_pair(n1, n2);
      r[k] = w[k] * std::polar(1.0, theta) + cplx(ns * n1, ns * n2);
    }
    if (scma::pn_decision_metric(r, what, p) < scma::pn_decision_metric(r, w, p))
      ++out.errors;
  }
  out.rate = static_cast<double>(out.errors) / trials;
  out.se = std::sqrt(out.rate * (1.0 - out.rate) / trials);
  return out;
}

/// Exhaustive N=2 permutation search: the true maximum MED over all M!
/// second-row permutations of the (normalized) mother constellation.
inline double exhaustive_best_med_n2(const scma::PamMultiset& cm) {
  const int M = static_cast<int>(cm.values.size());
  std::vector<int> perm(M);
  std::iota(perm.begin(), perm.end(), 0);
  const double scale = 1.0 / std::sqrt(2.0 * cm.average_energy());
  double best = 0.0;
  do {
    double mind2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < M && mind2 > 0.0; ++i)
      for (int j = i + 1; j < M; ++j) {
        const double d1 = cm.values[i] - cm.values[j];
        const double d2 = cm.values[perm[i]] - cm.values[perm[j]];
        mind2 = std::min(mind2, d1 * d1 + d2 * d2);
      }
    best = std::max(best, mind2);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best) * scale;
}

/// Minimum average energy over every symmetric multiplicity assignment of
/// the M - T overlapped points (exhaustive, small M only).
inline double min_symmetric_overlap_energy(const std::vector<double>& ct, int M) {
  const int T = static_cast<int>(ct.size());
  std::vector<double> positives;
  bool has_zero = false;
  for (double v : ct) {
    if (v == 0.0) has_zero = true;
    else if (v > 0.0) positives.push_back(v);
  }
  const int npos = static_cast<int>(positives.size());
  const int extra = M - T;

  double best = std::numeric_limits<double>::infinity();
  // Extras on symmetric pairs come two at a time; the remainder must sit on
  // the zero point if one exists.
  std::vector<int> add(npos, 0);
  auto energy = [&] {
    double e = 0.0;
    for (int i = 0; i < npos; ++i) e += 2.0 * (1 + add[i]) * positives[i] * positives[i];
    return e / M;
  };
  auto rec = [&](auto&& self, int idx, int left) -> void {
    if (idx == npos) {
      // Whatever is not assigned to a symmetric pair must land on the zero
      // point; without one, every extra has to be paired up.
      if (left != 0 && !has_zero) return;
      best = std::min(best, energy());
      return;
    }
    for (int pairs = 0; 2 * pairs <= left; ++pairs) {
      add[idx] = pairs;  // per-side additional multiplicity
      self(self, idx + 1, left - 2 * pairs);
    }
    add[idx] = 0;
  };
  if (!has_zero && extra % 2 == 1) return best;  // infeasible
  rec(rec, 0, extra);
  return best;
}

/// Classical AWGN union bound of the superimposed constellation, computed
/// from raw Euclidean distances only (valid at sigma_p2 = 0).
inline double awgn_union_bound(const scma::SuperimposedConstellation& sc, double n0) {
  double sum = 0.0;
  for (std::uint64_t i = 0; i < sc.size; ++i) {
    const std::vector<cplx> wi = sc.codeword(sc.labels_of(i));
    for (std::uint64_t j = 0; j < sc.size; ++j) {
      if (i == j) continue;
      const std::vector<cplx> wj = sc.codeword(sc.labels_of(j));
      double d2 = 0.0;
      for (size_t k = 0; k < wi.size(); ++k) d2 += std::norm(wi[k] - wj[k]);
      // Tuples mapping to the same codeword can differ by summation-order
      // roundoff; treat those as identical rather than as distance ~1e-16.
      if (d2 > 1e-16) sum += scma::q_function(std::sqrt(d2 / (2.0 * n0)));
    }
  }
  return sum / static_cast<double>(sc.size);
}

/// Uniform random complex K-vector pairs for metric spot checks.
inline void random_pair(int K, scma::SplitMix64& rng, std::vector<cplx>& w,
                        std::vector<cplx>& what) {
  w.resize(K);
  what.resize(K);
  for (int k = 0; k < K; ++k) {
    w[k] = cplx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    what[k] = cplx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
  }
}

}  // namespace oracles
