#include "scma/codebook.hpp"

#include <cmath>
#include <stdexcept>

namespace scma {

int CodebookSet::bits_per_user() const {
  int b = 0;
  while ((1 << (b + 1)) <= M) ++b;
  return b;
}

std::uint64_t CodebookSet::codeword_count() const {
  std::uint64_t n = 1;
  for (int j = 0; j < J(); ++j) n *= static_cast<std::uint64_t>(M);
  return n;
}

std::vector<cplx> superimpose(const CodebookSet& cbs, std::span<const int> labels) {
  if (static_cast<int>(labels.size()) != cbs.J())
    throw std::invalid_argument("superimpose: need one label per user");
  for (int m : labels)
    if (m < 0 || m >= cbs.M) throw std::invalid_argument("superimpose: label out of range");
  std::vector<cplx> w(cbs.K(), cplx(0.0, 0.0));
  for (int j = 0; j < cbs.J(); ++j)
    for (int k = 0; k < cbs.K(); ++k) w[k] += cbs.entry(j, k, labels[j]);
  return w;
}

CodebookSet build_codebooks(const MotherConstellation& mc, const OperatorSet& ops,
                            const FactorGraph& fg) {
  if (mc.N != fg.N())
    throw std::invalid_argument("build_codebooks: mother constellation rows != user degree N");
  if (ops.slots() != fg.df())
    throw std::invalid_argument("build_codebooks: operator set must supply d_f slots");
  if (ops.theta.size() != ops.energy.size())
    throw std::invalid_argument("build_codebooks: operator set theta/energy size mismatch");

  CodebookSet cbs;
  cbs.fg = fg;
  cbs.M = mc.M;
  cbs.X.assign(fg.J(), std::vector<cplx>(static_cast<size_t>(fg.K()) * mc.M, cplx(0, 0)));
  for (int j = 0; j < fg.J(); ++j) {
    const auto& res = fg.user_resources(j);
    for (int n = 0; n < fg.N(); ++n) {
      const int k = res[n];
      const cplx psi = ops.psi(fg.slot(k, j));
      for (int m = 0; m < mc.M; ++m)
        cbs.X[j][static_cast<size_t>(k) * mc.M + m] = psi * mc.rows[n][m];
    }
  }
  return cbs;
}

double average_superimposed_energy(const CodebookSet& cbs) {
  // E||w||^2 = sum_k E|w_k|^2, evaluated exactly per resource over the
  // d_f colliding users' label combinations.
  double total = 0.0;
  for (int k = 0; k < cbs.K(); ++k) {
    const auto& users = cbs.fg.resource_users(k);
    const int df = static_cast<int>(users.size());
    std::vector<int> labels(df, 0);
    double acc = 0.0;
    std::uint64_t combos = 1;
    for (int i = 0; i < df; ++i) combos *= cbs.M;
    for (std::uint64_t c = 0; c < combos; ++c) {
      std::uint64_t t = c;
      cplx v(0, 0);
      for (int i = 0; i < df; ++i) {
        v += cbs.entry(users[i], k, static_cast<int>(t % cbs.M));
        t /= cbs.M;
      }
      acc += std::norm(v);
    }
    total += acc / static_cast<double>(combos);
  }
  return total;
}

NormalizeResult normalize_power(const CodebookSet& cbs, double budget) {
  if (budget <= 0.0) throw std::invalid_argument("normalize_power: budget must be positive");
  const double e = average_superimposed_energy(cbs);
  if (e <= 0.0) throw std::invalid_argument("normalize_power: zero-energy codebook set");
  const double s = std::sqrt(budget / e);
  NormalizeResult out{cbs, s};
  for (auto& x : out.cbs.X)
    for (auto& v : x) v *= s;
  return out;
}

std::uint32_t SuperimposedConstellation::combo_index(int k, std::span<const int> labels) const {
  std::uint32_t c = 0, r = 1;
  for (int u : users[k]) {
    c += static_cast<std::uint32_t>(labels[u]) * r;
    r *= M;
  }
  return c;
}

std::vector<int> SuperimposedConstellation::labels_of(std::uint64_t idx) const {
  std::vector<int> labels(J);
  for (int j = 0; j < J; ++j) {
    labels[j] = static_cast<int>(idx % M);
    idx /= M;
  }
  return labels;
}

std::uint64_t SuperimposedConstellation::index_of(std::span<const int> labels) const {
  std::uint64_t idx = 0;
  for (int j = J - 1; j >= 0; --j) idx = idx * M + labels[j];
  return idx;
}

std::vector<cplx> SuperimposedConstellation::codeword(std::span<const int> labels) const {
  std::vector<cplx> w(K);
  for (int k = 0; k < K; ++k) w[k] = alphabet[k][combo_index(k, labels)];
  return w;
}

SuperimposedConstellation enumerate_superimposed(const CodebookSet& cbs) {
  SuperimposedConstellation sc;
  sc.K = cbs.K();
  sc.J = cbs.J();
  sc.M = cbs.M;
  sc.df = cbs.fg.df();
  sc.size = cbs.codeword_count();
  sc.users.resize(sc.K);
  sc.alphabet.resize(sc.K);
  sc.value_id.resize(sc.K);
  for (int k = 0; k < sc.K; ++k) {
    sc.users[k] = cbs.fg.resource_users(k);
    const int df = static_cast<int>(sc.users[k].size());
    std::uint64_t combos = 1;
    for (int i = 0; i < df; ++i) combos *= cbs.M;
    sc.alphabet[k].resize(combos);
    for (std::uint64_t c = 0; c < combos; ++c) {
      std::uint64_t t = c;
      cplx v(0, 0);
      for (int i = 0; i < df; ++i) {
        v += cbs.entry(sc.users[k][i], k, static_cast<int>(t % cbs.M));
        t /= cbs.M;
      }
      sc.alphabet[k][c] = v;
    }
    // Tolerance dedup so numerically coincident superimposed values share an id.
    sc.value_id[k].assign(combos, -1);
    std::vector<cplx> reps;
    const double tol = 1e-9;
    for (std::uint64_t c = 0; c < combos; ++c) {
      const cplx v = sc.alphabet[k][c];
      int id = -1;
      for (size_t r = 0; r < reps.size(); ++r)
        if (std::abs(v - reps[r]) <= tol) {
          id = static_cast<int>(r);
          break;
        }
      if (id < 0) {
        id = static_cast<int>(reps.size());
        reps.push_back(v);
      }
      sc.value_id[k][c] = id;
    }
  }
  return sc;
}

}  // namespace scma
