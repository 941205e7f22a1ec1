#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scma/factor_graph.hpp"
#include "scma/mother.hpp"

namespace scma {

/// Per-slot operator scalars psi_i = E_i * exp(j theta_i), one per resource
/// degree d_f. theta in [0, pi], E > 0, sum E_i equal to the power budget.
struct OperatorSet {
  std::vector<double> energy;  // amplitude factors E_i
  std::vector<double> theta;   // rotation angles

  int slots() const { return static_cast<int>(energy.size()); }
  cplx psi(int i) const { return std::polar(energy[i], theta[i]); }
};

/// J sparse K x M codebooks sharing one factor graph.
struct CodebookSet {
  FactorGraph fg;
  int M = 0;
  std::vector<std::vector<cplx>> X;  // per user, row-major K x M

  int K() const { return fg.K(); }
  int J() const { return fg.J(); }
  cplx entry(int j, int k, int m) const { return X[j][static_cast<size_t>(k) * M + m]; }
  int bits_per_user() const;
  std::uint64_t codeword_count() const;  // M^J
  std::string name;                      // optional metadata
};

/// Sum of the labelled codewords, one per user.
std::vector<cplx> superimpose(const CodebookSet& cbs, std::span<const int> labels);

/// X_j = V_j Psi_j C_MC with the slot placement carried by the factor graph.
CodebookSet build_codebooks(const MotherConstellation& mc, const OperatorSet& ops,
                            const FactorGraph& fg);

/// Exact mean of ||w||^2 over uniform independent labels.
double average_superimposed_energy(const CodebookSet& cbs);

struct NormalizeResult {
  CodebookSet cbs;
  double scale;  // amplitude factor applied to every entry
};
/// Rescale so the average superimposed codeword energy equals budget.
NormalizeResult normalize_power(const CodebookSet& cbs, double budget);

/// Lazy view of the M^J superimposed constellation: per-resource alphabet
/// tables indexed by the mixed-radix combination of the colliding users'
/// labels. Never materializes dense K-vectors.
struct SuperimposedConstellation {
  int K = 0, J = 0, M = 0, df = 0;
  std::uint64_t size = 0;                   // M^J
  std::vector<std::vector<int>> users;      // per resource, colliding users (ascending)
  std::vector<std::vector<cplx>> alphabet;  // per resource, M^df values
  std::vector<std::vector<int>> value_id;   // per resource, id after tolerance dedup

  int alphabet_size() const { return static_cast<int>(alphabet[0].size()); }
  std::uint32_t combo_index(int k, std::span<const int> labels) const;
  std::vector<int> labels_of(std::uint64_t codeword_index) const;  // user 0 least significant
  std::uint64_t index_of(std::span<const int> labels) const;
  std::vector<cplx> codeword(std::span<const int> labels) const;
};

SuperimposedConstellation enumerate_superimposed(const CodebookSet& cbs);

}  // namespace scma
