#include "scma/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace scma {

namespace {

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// Per-resource, per-combo negative decision metric or log-likelihood.
void resource_metric(const SuperimposedConstellation& sc, int k, const cplx& rk,
                     const PnChannelParams& p, bool pn_aware, bool as_loglik,
                     std::vector<double>& out) {
  const auto& alpha = sc.alphabet[k];
  out.resize(alpha.size());
  const double hn = 0.5 * p.n0;
  for (size_t c = 0; c < alpha.size(); ++c) {
    const cplx v = alpha[c];
    if (!pn_aware) {
      const double d2 = std::norm(rk - v);
      out[c] = as_loglik ? -d2 / p.n0 : d2;
      continue;
    }
    const double av = std::abs(v);
    const cplx rot = av > 0.0 ? rk * std::conj(v) / av : rk;
    const double sv = p.sigma_p2 * av * av + hn;
    const double re = rot.real() - av;
    const double im = rot.imag();
    const double l = re * re / hn + im * im / sv + std::log(sv);
    out[c] = as_loglik ? -0.5 * l : l;
  }
}

}  // namespace

const char* detector_name(DetectorKind d) {
  switch (d) {
    case DetectorKind::ml_pn_aware: return "ml-pn-aware";
    case DetectorKind::ml_euclidean: return "ml-euclidean";
    case DetectorKind::mpa_standard: return "mpa-standard";
    case DetectorKind::mpa_pn_aware: return "mpa-pn-aware";
  }
  return "?";
}

DetectorKind detector_from_name(const std::string& name) {
  if (name == "ml-pn-aware") return DetectorKind::ml_pn_aware;
  if (name == "ml-euclidean") return DetectorKind::ml_euclidean;
  if (name == "mpa-standard") return DetectorKind::mpa_standard;
  if (name == "mpa-pn-aware") return DetectorKind::mpa_pn_aware;
  throw std::invalid_argument("unknown detector: " + name);
}

ChannelDraw draw_channel(int K, const PnChannelParams& p, SplitMix64& rng) {
  ChannelDraw d;
  d.theta.resize(K);
  d.noise.resize(K);
  const double sp = std::sqrt(p.sigma_p2);
  const double sn = std::sqrt(0.5 * p.n0);
  for (int k = 0; k < K; ++k) d.theta[k] = sp * rng.gaussian();
  for (int k = 0; k < K; ++k) {
    double g1, g2;
    rng.gaussian_pair(g1, g2);
    d.noise[k] = cplx(sn * g1, sn * g2);
  }
  return d;
}

std::vector<cplx> transmit(const SuperimposedConstellation& sc, std::span<const int> labels,
                           const PnChannelParams& p, SplitMix64& rng) {
  for (int m : labels)
    if (m < 0 || m >= sc.M) throw std::invalid_argument("transmit: label out of range");
  const ChannelDraw d = draw_channel(sc.K, p, rng);
  std::vector<cplx> r(sc.K);
  for (int k = 0; k < sc.K; ++k) {
    const cplx w = sc.alphabet[k][sc.combo_index(k, labels)];
    r[k] = w * std::polar(1.0, d.theta[k]) + d.noise[k];
  }
  return r;
}

std::vector<int> detect_ml(std::span<const cplx> r, const SuperimposedConstellation& sc,
                           const PnChannelParams& p, MlMetric metric,
                           std::uint64_t max_codewords) {
  if (sc.size > max_codewords) throw EnumerationBudgetError(sc.size, max_codewords);
  std::vector<std::vector<double>> met(sc.K);
  for (int k = 0; k < sc.K; ++k)
    resource_metric(sc, k, r[k], p, metric == MlMetric::pn_aware, false, met[k]);

  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_idx = 0;
  std::vector<int> labels(sc.J, 0);
  for (std::uint64_t i = 0; i < sc.size; ++i) {
    double total = 0.0;
    for (int k = 0; k < sc.K; ++k) total += met[k][sc.combo_index(k, labels)];
    if (total < best) {
      best = total;
      best_idx = i;
    }
    // Odometer over labels keeps combo_index cheap to recompute.
    for (int j = 0; j < sc.J; ++j) {
      if (++labels[j] < sc.M) break;
      labels[j] = 0;
    }
  }
  return sc.labels_of(best_idx);
}

MpaResult detect_mpa(std::span<const cplx> r, const SuperimposedConstellation& sc,
                     const PnChannelParams& p, int iterations, MpaVariant variant,
                     double damping) {
  if (iterations < 1) throw std::invalid_argument("detect_mpa: iterations must be >= 1");
  const int M = sc.M;
  const int df = sc.df;
  const std::uint32_t A = static_cast<std::uint32_t>(sc.alphabet[0].size());

  // Function-node log-likelihoods.
  std::vector<std::vector<double>> fl(sc.K);
  for (int k = 0; k < sc.K; ++k)
    resource_metric(sc, k, r[k], p, variant == MpaVariant::pn_aware, true, fl[k]);

  // Position of user j within resource k's user list, and the reverse map.
  std::vector<std::vector<int>> pos(sc.K, std::vector<int>(sc.J, -1));
  std::vector<std::vector<int>> ures(sc.J);
  for (int k = 0; k < sc.K; ++k)
    for (size_t i = 0; i < sc.users[k].size(); ++i) {
      pos[k][sc.users[k][i]] = static_cast<int>(i);
      ures[sc.users[k][i]].push_back(k);
    }

  // Messages, log domain, normalized per edge.
  // r2u[k][i][m]: resource k -> its i-th user; u2r[k][i][m]: the reverse edge.
  auto edges = [&](int) { return std::vector<std::vector<double>>(df, std::vector<double>(M, 0.0)); };
  std::vector<std::vector<std::vector<double>>> r2u(sc.K, edges(0)), u2r(sc.K, edges(0));

  std::vector<int> radix(df);
  for (int i = 0; i < df; ++i) radix[i] = 1;
  for (int i = 1; i < df; ++i) radix[i] = radix[i - 1] * M;

  std::vector<double> acc(M);
  for (int it = 0; it < iterations; ++it) {
    // Resource -> user.
    for (int k = 0; k < sc.K; ++k) {
      for (int i = 0; i < df; ++i) {
        std::fill(acc.begin(), acc.end(), -std::numeric_limits<double>::infinity());
        for (std::uint32_t c = 0; c < A; ++c) {
          double s = fl[k][c];
          for (int i2 = 0; i2 < df; ++i2) {
            if (i2 == i) continue;
            s += u2r[k][i2][(c / radix[i2]) % M];
          }
          const int m = (c / radix[i]) % M;
          acc[m] = log_sum_exp(acc[m], s);
        }
        double norm = -std::numeric_limits<double>::infinity();
        for (int m = 0; m < M; ++m) norm = log_sum_exp(norm, acc[m]);
        for (int m = 0; m < M; ++m) {
          double msg = acc[m] - norm;
          if (!std::isfinite(msg)) throw std::runtime_error("detect_mpa: non-finite message");
          r2u[k][i][m] = damping * r2u[k][i][m] + (1.0 - damping) * msg;
        }
      }
    }
    // User -> resource.
    for (int j = 0; j < sc.J; ++j) {
      for (int k : ures[j]) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int k2 : ures[j]) {
          if (k2 == k) continue;
          for (int m = 0; m < M; ++m) acc[m] += r2u[k2][pos[k2][j]][m];
        }
        double norm = -std::numeric_limits<double>::infinity();
        for (int m = 0; m < M; ++m) norm = log_sum_exp(norm, acc[m]);
        for (int m = 0; m < M; ++m) {
          double msg = acc[m] - norm;
          if (!std::isfinite(msg)) throw std::runtime_error("detect_mpa: non-finite message");
          u2r[k][pos[k][j]][m] = damping * u2r[k][pos[k][j]][m] + (1.0 - damping) * msg;
        }
      }
    }
  }

  MpaResult out;
  out.labels.resize(sc.J);
  out.posteriors.assign(sc.J, std::vector<double>(M, 0.0));
  for (int j = 0; j < sc.J; ++j) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int k : ures[j])
      for (int m = 0; m < M; ++m) acc[m] += r2u[k][pos[k][j]][m];
    double norm = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < M; ++m) norm = log_sum_exp(norm, acc[m]);
    double best = -std::numeric_limits<double>::infinity();
    int bm = 0;
    for (int m = 0; m < M; ++m) {
      out.posteriors[j][m] = std::exp(acc[m] - norm);
      if (acc[m] > best) {
        best = acc[m];
        bm = m;
      }
    }
    out.labels[j] = bm;
  }
  return out;
}

std::vector<int> detect(std::span<const cplx> r, const SuperimposedConstellation& sc,
                        const PnChannelParams& p, const SimConfig& cfg) {
  switch (cfg.detector) {
    case DetectorKind::ml_pn_aware:
      return detect_ml(r, sc, p, MlMetric::pn_aware);
    case DetectorKind::ml_euclidean:
      return detect_ml(r, sc, p, MlMetric::euclidean);
    case DetectorKind::mpa_standard:
      return detect_mpa(r, sc, p, cfg.mpa_iterations, MpaVariant::standard).labels;
    case DetectorKind::mpa_pn_aware:
      return detect_mpa(r, sc, p, cfg.mpa_iterations, MpaVariant::pn_aware).labels;
  }
  throw std::logic_error("detect: bad detector");
}

namespace {

struct BatchCounters {
  std::uint64_t frames = 0, bit_errors = 0, tuple_errors = 0, w_errors = 0;
  std::vector<std::uint64_t> user_bit_errors;

  void merge(const BatchCounters& o) {
    frames += o.frames;
    bit_errors += o.bit_errors;
    tuple_errors += o.tuple_errors;
    w_errors += o.w_errors;
    if (user_bit_errors.size() < o.user_bit_errors.size())
      user_bit_errors.resize(o.user_bit_errors.size(), 0);
    for (size_t j = 0; j < o.user_bit_errors.size(); ++j)
      user_bit_errors[j] += o.user_bit_errors[j];
  }
};

BatchCounters simulate_batch(const SuperimposedConstellation& sc, const PnChannelParams& p,
                             const SimConfig& cfg, std::uint64_t first_frame,
                             std::uint64_t count) {
  BatchCounters c;
  c.user_bit_errors.assign(sc.J, 0);
  std::vector<int> labels(sc.J);
  for (std::uint64_t f = first_frame; f < first_frame + count; ++f) {
    SplitMix64 rng(derive_seed(cfg.rng_seed, f));
    for (int j = 0; j < sc.J; ++j) labels[j] = static_cast<int>(rng.below(sc.M));
    const std::vector<cplx> r = transmit(sc, labels, p, rng);
    const std::vector<int> hat = detect(r, sc, p, cfg);
    bool tuple_err = false, w_err = false;
    for (int j = 0; j < sc.J; ++j) {
      const int x = labels[j] ^ hat[j];
      if (x) tuple_err = true;
      const int be = __builtin_popcount(static_cast<unsigned>(x));
      c.bit_errors += be;
      c.user_bit_errors[j] += be;
    }
    for (int k = 0; k < sc.K && !w_err; ++k)
      w_err = sc.value_id[k][sc.combo_index(k, labels)] !=
              sc.value_id[k][sc.combo_index(k, hat)];
    c.tuple_errors += tuple_err;
    c.w_errors += w_err;
    ++c.frames;
  }
  return c;
}

}  // namespace

SimResult run_ber(const SuperimposedConstellation& sc, const PnChannelParams& p,
                  const SimConfig& cfg) {
  if (cfg.workers < 1) throw std::invalid_argument("run_ber: workers must be >= 1");
  if ((cfg.detector == DetectorKind::ml_pn_aware || cfg.detector == DetectorKind::ml_euclidean) &&
      sc.size > (1u << 16))
    throw EnumerationBudgetError(sc.size, 1u << 16);

  const auto t0 = std::chrono::steady_clock::now();
  int bits_per_user = 0;
  while ((1 << (bits_per_user + 1)) <= sc.M) ++bits_per_user;
  const std::uint64_t bits_per_frame = static_cast<std::uint64_t>(sc.J) * bits_per_user;

  BatchCounters total;
  total.user_bit_errors.assign(sc.J, 0);
  std::uint64_t next_frame = 0;
  // Rounds of `workers` batches keep counters independent of scheduling.
  while (true) {
    const std::uint64_t done_bits = total.frames * bits_per_frame;
    if (total.bit_errors >= cfg.stop.min_errors || done_bits >= cfg.stop.max_bits) break;
    std::vector<BatchCounters> parts(cfg.workers);
    if (cfg.workers == 1) {
      parts[0] = simulate_batch(sc, p, cfg, next_frame, cfg.batch_frames);
    } else {
      std::vector<std::thread> pool;
      for (int wkr = 0; wkr < cfg.workers; ++wkr)
        pool.emplace_back([&, wkr] {
          parts[wkr] = simulate_batch(sc, p, cfg, next_frame + wkr * cfg.batch_frames,
                                      cfg.batch_frames);
        });
      for (auto& t : pool) t.join();
    }
    for (const auto& part : parts) total.merge(part);
    next_frame += static_cast<std::uint64_t>(cfg.workers) * cfg.batch_frames;
  }

  SimResult res;
  res.frames = total.frames;
  res.bits_simulated = total.frames * bits_per_frame;
  res.bit_errors = total.bit_errors;
  res.user_bit_errors = total.user_bit_errors;
  res.tuple_errors = total.tuple_errors;
  res.w_errors = total.w_errors;
  res.ber = res.bits_simulated ? static_cast<double>(res.bit_errors) / res.bits_simulated : 0.0;
  res.ser = res.frames ? static_cast<double>(res.tuple_errors) / res.frames : 0.0;
  res.w_ser = res.frames ? static_cast<double>(res.w_errors) / res.frames : 0.0;
  res.ber_ci95 =
      res.bits_simulated
          ? 1.96 * std::sqrt(std::max(res.ber * (1.0 - res.ber), 0.0) / res.bits_simulated)
          : 0.0;
  res.censored = (res.bit_errors == 0);
  res.detector = cfg.detector;
  res.rng_seed = cfg.rng_seed;
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

SimResult run_ber(const CodebookSet& cbs, const PnChannelParams& p, const SimConfig& cfg) {
  return run_ber(enumerate_superimposed(cbs), p, cfg);
}

}  // namespace scma
