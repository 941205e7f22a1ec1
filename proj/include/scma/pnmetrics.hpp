#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "scma/codebook.hpp"

namespace scma {

/// Operating point of the phase-noise AWGN channel.
struct PnChannelParams {
  double sigma_p2 = 0.0;   // phase-noise variance, rad^2
  double n0 = 1.0;         // complex noise power, linear
  double eb_n0_db = 0.0;   // operating point the n0 was derived from

  static PnChannelParams from_n0(double sigma_p2, double n0);
};

/// Eb/N0 -> N0 with Eb = (average superimposed codeword energy) / (J log2 M).
PnChannelParams params_from_ebn0(const CodebookSet& cbs, double sigma_p2, double eb_n0_db);
PnChannelParams params_from_ebn0(double avg_energy, int J, int bits_per_user, double sigma_p2,
                                 double eb_n0_db);

/// Gaussian tail probability Q(t) = 0.5 erfc(t / sqrt(2)).
double q_function(double t);

/// Negative log-likelihood decision metric of the small-angle bivariate
/// Gaussian approximation. Lower is better.
double pn_decision_metric(std::span<const cplx> r, std::span<const cplx> w,
                          const PnChannelParams& p);

/// Closed-form mean/variance of the per-resource decision-metric difference
/// for magnitudes (aw, ah) and phase offset delta = arg w_k - arg w^_k.
void eta_resource_moments(double aw, double ah, double delta, double sigma_p2, double n0,
                          double& mean_out, double& var_out);

struct ResourcePairTerm {
  double delta_w = 0.0;
  double ev1 = 0.0, ev2 = 0.0;
  double mean = 0.0, variance = 0.0;
  double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0, g = 0, h = 0, i = 0;
};

struct PairStats {
  double mean = 0.0;
  double variance = 0.0;
  double q_arg = 0.0;  // -mean / sqrt(variance)
  std::vector<ResourcePairTerm> per_resource;
};

/// Statistics of eta = L_w - L_w^ conditioned on w transmitted. Throws if the
/// total variance is non-positive (which would indicate w == w^ or a fault).
PairStats pair_stats(std::span<const cplx> w, std::span<const cplx> what,
                     const PnChannelParams& p);

/// Q(q_arg) of the pair.
double pairwise_pep(std::span<const cplx> w, std::span<const cplx> what,
                    const PnChannelParams& p);

struct MpnmOptions {
  enum class Mode { exact, pruned };
  Mode mode = Mode::exact;
  int q = 2;                       // pruned: max number of differing users
  std::uint64_t samples = 0;       // pruned: extra random ordered pairs
  std::uint64_t rng_seed = 1;      // pruned sampling seed
  std::uint64_t max_exact_pairs = 40'000'000;  // exact-mode budget (ordered pairs)
};

/// Exact enumeration would exceed the configured pair budget.
class EnumerationBudgetError : public std::runtime_error {
public:
  EnumerationBudgetError(std::uint64_t required, std::uint64_t budget);
  std::uint64_t required, budget;
};

struct MetricReport {
  double mpnm = 0.0;
  double med = 0.0;        // minimum distance of the superimposed constellation
  double pep_bound = 0.0;  // union bound over the same enumeration
  std::vector<int> argmin_w, argmin_what;  // label tuples of the minimizing pair
  std::string mode;                        // "exact" or "pruned(q=..,samples=..)"
  std::uint64_t pairs_enumerated = 0;      // ordered pairs covered by enumeration
  std::uint64_t pairs_total = 0;           // M^J (M^J - 1)
  std::uint64_t identical_pairs = 0;       // tuple pairs mapping to the same w
  double sigma_p2 = 0.0, eb_n0_db = 0.0, n0 = 0.0;
};

/// Minimum Q-argument over ordered codeword pairs plus the union bound and
/// superimposed MED, under exact or pruned enumeration.
MetricReport mpnm(const CodebookSet& cbs, const PnChannelParams& p, const MpnmOptions& opt);
MetricReport mpnm(const SuperimposedConstellation& sc, const PnChannelParams& p,
                  const MpnmOptions& opt);

/// The union-bound component alone.
double pep_union_bound(const CodebookSet& cbs, const PnChannelParams& p, const MpnmOptions& opt);

/// Cheap lower-cost objective used inside design loops: minimum Q-argument
/// restricted to ordered pairs differing in at most q users, computed without
/// building full per-resource tables. Returns -infinity when the superimposed
/// constellation has colliding codeword tuples.
double mpnm_objective(const SuperimposedConstellation& sc, const PnChannelParams& p, int q);

nlohmann::json metric_report_to_json(const MetricReport& r);

}  // namespace scma
