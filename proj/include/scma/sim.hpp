#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scma/codebook.hpp"
#include "scma/pnmetrics.hpp"
#include "scma/rng.hpp"

namespace scma {

/// One realization of the phase-noise AWGN channel.
struct ChannelDraw {
  std::vector<double> theta;  // i.i.d. N(0, sigma_p2) per resource
  std::vector<cplx> noise;    // circular complex Gaussian, power N0
};

ChannelDraw draw_channel(int K, const PnChannelParams& p, SplitMix64& rng);

/// r_k = w_k e^{j theta_k} + n_k for the superimposed codeword of `labels`.
std::vector<cplx> transmit(const SuperimposedConstellation& sc, std::span<const int> labels,
                           const PnChannelParams& p, SplitMix64& rng);

enum class MlMetric { pn_aware, euclidean };

/// Exhaustive ML over the M^J superimposed codewords. Refuses when the
/// enumeration exceeds max_codewords.
std::vector<int> detect_ml(std::span<const cplx> r, const SuperimposedConstellation& sc,
                           const PnChannelParams& p, MlMetric metric,
                           std::uint64_t max_codewords = 1u << 16);

enum class MpaVariant { standard, pn_aware };

struct MpaResult {
  std::vector<int> labels;
  std::vector<std::vector<double>> posteriors;  // per user, sums to 1
};

/// Log-domain sum-product message passing on the factor graph.
MpaResult detect_mpa(std::span<const cplx> r, const SuperimposedConstellation& sc,
                     const PnChannelParams& p, int iterations, MpaVariant variant,
                     double damping = 0.0);

enum class DetectorKind { ml_pn_aware, ml_euclidean, mpa_standard, mpa_pn_aware };

const char* detector_name(DetectorKind d);
DetectorKind detector_from_name(const std::string& name);

struct StoppingRule {
  std::uint64_t min_errors = 400;        // aggregate bit errors
  std::uint64_t max_bits = 20'000'000;
};

struct SimConfig {
  DetectorKind detector = DetectorKind::ml_euclidean;
  int mpa_iterations = 8;
  StoppingRule stop;
  std::uint64_t rng_seed = 1;
  int workers = 1;
  std::uint64_t batch_frames = 1024;
};

struct SimResult {
  std::uint64_t frames = 0;
  std::uint64_t bits_simulated = 0;
  std::uint64_t bit_errors = 0;
  std::vector<std::uint64_t> user_bit_errors;
  std::uint64_t tuple_errors = 0;  // label-tuple mismatches
  std::uint64_t w_errors = 0;      // superimposed-vector mismatches
  double ber = 0.0;
  double ber_ci95 = 0.0;  // normal-approximation half width
  double ser = 0.0;       // tuple error rate
  double w_ser = 0.0;     // superimposed-codeword error rate
  bool censored = false;  // budget hit with zero errors
  DetectorKind detector = DetectorKind::ml_euclidean;
  std::uint64_t rng_seed = 0;
  double wall_seconds = 0.0;
};

/// Monte-Carlo BER/SER run. Deterministic for fixed (seed, worker count).
SimResult run_ber(const CodebookSet& cbs, const PnChannelParams& p, const SimConfig& cfg);
SimResult run_ber(const SuperimposedConstellation& sc, const PnChannelParams& p,
                  const SimConfig& cfg);

/// Detect a single frame with the configured detector (shared by tests).
std::vector<int> detect(std::span<const cplx> r, const SuperimposedConstellation& sc,
                        const PnChannelParams& p, const SimConfig& cfg);

}  // namespace scma
