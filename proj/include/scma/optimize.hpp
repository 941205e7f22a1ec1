#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scma/codebook.hpp"
#include "scma/lppam.hpp"
#include "scma/pnmetrics.hpp"

namespace scma {

/// Free parameters of a codebook design: rotation angles and energy factors
/// per psi slot, plus the scattering ratios of the one-dimensional multiset.
struct DesignSpace {
  std::vector<double> theta;   // d_f angles in [0, pi]
  std::vector<double> energy;  // d_f amplitudes, sum == power budget
  std::vector<double> alpha;   // scattering ratios in [1, alpha_max]

  std::vector<double> flatten() const;
  static DesignSpace unflatten(std::span<const double> v, int df, int n_alpha);
};

struct DesignProblem {
  FactorGraph fg;
  int M = 4;
  int T = 2;
  double alpha_max = 4.0;
  double power_budget = 0.0;  // 0 -> M J / K

  double budget() const {
    return power_budget > 0.0 ? power_budget
                              : static_cast<double>(M) * fg.J() / fg.K();
  }
  int n_alpha() const { return alpha_count(T); }
  DesignSpace default_corner() const;  // theta = 0, equal E, alpha = 1
};

/// Clamp boxes and rescale the energy vector onto the budget simplex.
DesignSpace project(DesignSpace x, const DesignProblem& pb);

struct ObjectiveConfig {
  double sigma_p2 = 0.01;
  double eb_n0_db = 14.0;
  int q = 0;  // pruned depth of the objective; 0 = auto by problem size
  int bsa_restarts = 4;
  std::uint64_t bsa_seed = 7;
};

/// Deterministic design -> MPNM objective. The binary-switching seed is
/// frozen so the outer search sees a pure function of the design vector.
class DesignObjective {
public:
  DesignObjective(DesignProblem pb, ObjectiveConfig cfg);

  /// -infinity when the realized mother constellation has duplicate
  /// codewords or the superimposed constellation collides.
  double operator()(const DesignSpace& x) const;

  /// Build the codebook set for a design (optionally with a stronger
  /// permutation search than the objective uses).
  CodebookSet realize(const DesignSpace& x, int bsa_restarts = 0) const;

  const DesignProblem& problem() const { return pb_; }
  const ObjectiveConfig& config() const { return cfg_; }
  int effective_q() const { return q_; }

private:
  MotherConstellation mother_for(const std::vector<double>& alpha, int restarts) const;
  DesignProblem pb_;
  ObjectiveConfig cfg_;
  int q_;
  std::optional<MotherConstellation> fixed_mc_;  // cached when alpha is empty
};

struct OptimizerConfig {
  enum class Strategy { differential_evolution, multistart_local };
  Strategy strategy = Strategy::differential_evolution;
  int population = 24;
  std::uint64_t max_evaluations = 10'000;
  std::uint64_t rng_seed = 1;
  ObjectiveConfig objective;
  double de_weight = 0.7;       // differential weight F
  double de_crossover = 0.9;    // crossover rate CR
  double polish_fraction = 0.25;  // budget share of the Nelder-Mead polish
  int final_bsa_restarts = 16;
  MpnmOptions report;  // enumeration mode of the final report
};

struct TracePoint {
  std::uint64_t evaluation;
  double best;
};

struct OptimizeResult {
  DesignSpace best;
  double best_objective = 0.0;
  CodebookSet codebooks;
  MetricReport report;
  std::vector<TracePoint> trace;  // best-so-far, non-decreasing
  std::uint64_t evaluations = 0;
  bool budget_exhausted = false;
};

OptimizeResult optimize(const OptimizerConfig& cfg, const DesignProblem& pb);

}  // namespace scma
