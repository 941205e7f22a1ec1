#pragma once

#include <vector>

namespace scma {

/// One-dimensional PAM multiset with T distinct values and M total values.
/// Values are sorted ascending; symmetric (multiplicity(v) == multiplicity(-v))
/// and zero mean by construction.
struct PamMultiset {
  std::vector<double> values;  // sorted, size M

  int size() const { return static_cast<int>(values.size()); }
  double average_energy() const;
  int distinct_count() const;
};

struct LpPamSpec {
  int M = 4;
  int T = 2;
  std::vector<double> alpha;  // scattering ratios r_{m+1}/r_1, each >= 1
};

/// Number of free scattering ratios for a given T:
/// T/2 - 1 for even T, (T-1)/2 - 1 for odd T.
int alpha_count(int T);

/// The T distinct PAM levels with r_1 = 1: even T gives {+-r_1, ..., +-r_{T/2}}
/// with r_{m+1} = alpha_m; odd T is the even construction on T-1 points plus 0.
std::vector<double> build_ct(int T, const std::vector<double>& alpha);

/// Overlap M-T extra multiplicities onto ct. Multiplicity is assigned to the
/// lowest-|value| points first under the symmetry constraint, which minimizes
/// the average energy of the resulting multiset. M-T odd without a zero point
/// cannot be placed symmetrically and is rejected.
PamMultiset overlap_to_cm(const std::vector<double>& ct, int M);

/// Rescale so that (1/M) * sum v^2 == 1. Returns the applied amplitude factor
/// through *scale_out when non-null.
PamMultiset normalize_unit_energy(const PamMultiset& pm, double* scale_out = nullptr);

/// build_ct -> overlap_to_cm -> normalize_unit_energy.
PamMultiset build_lppam(const LpPamSpec& spec);

}  // namespace scma
