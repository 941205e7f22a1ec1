#include "scma/factor_graph.hpp"

#include <stdexcept>

namespace scma {

FactorGraph::FactorGraph(int K, int J, std::vector<std::uint8_t> incidence)
    : k_(K), j_(J), f_(std::move(incidence)) {
  if (K <= 0 || J <= 0) throw std::invalid_argument("factor graph: K and J must be positive");
  if (f_.size() != static_cast<size_t>(K) * J)
    throw std::invalid_argument("factor graph: incidence size mismatch");

  resource_users_.resize(K);
  user_resources_.resize(J);
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < J; ++j)
      if (edge(k, j)) {
        resource_users_[k].push_back(j);
        user_resources_[j].push_back(k);
      }

  n_ = static_cast<int>(user_resources_[0].size());
  df_ = static_cast<int>(resource_users_[0].size());
  for (int j = 0; j < J; ++j)
    if (static_cast<int>(user_resources_[j].size()) != n_)
      throw std::invalid_argument("factor graph: users must have equal degree N");
  for (int k = 0; k < K; ++k)
    if (static_cast<int>(resource_users_[k].size()) != df_)
      throw std::invalid_argument("factor graph: resources must have equal degree d_f");
  if (n_ == 0) throw std::invalid_argument("factor graph: empty user support");

  // Default slot assignment: rank of the user within its resource.
  slot_.assign(f_.size(), -1);
  for (int k = 0; k < K; ++k)
    for (size_t i = 0; i < resource_users_[k].size(); ++i)
      slot_[static_cast<size_t>(k) * J + resource_users_[k][i]] = static_cast<int>(i);
}

void FactorGraph::set_slots(std::vector<int> slots) {
  if (slots.size() != f_.size())
    throw std::invalid_argument("factor graph: slot matrix size mismatch");
  for (int k = 0; k < k_; ++k) {
    std::vector<bool> seen(df_, false);
    for (int j = 0; j < j_; ++j) {
      const int s = slots[static_cast<size_t>(k) * j_ + j];
      if (!edge(k, j)) {
        if (s != -1) throw std::invalid_argument("factor graph: slot on non-edge");
        continue;
      }
      if (s < 0 || s >= df_ || seen[s])
        throw std::invalid_argument("factor graph: slots must be distinct per resource");
      seen[s] = true;
    }
  }
  slot_ = std::move(slots);
}

FactorGraph FactorGraph::preset_4x6() {
  // Resource occupancy: r0:{0,2,4} r1:{1,2,5} r2:{0,3,5} r3:{1,3,4}.
  const std::vector<std::uint8_t> f = {
      1, 0, 1, 0, 1, 0,  //
      0, 1, 1, 0, 0, 1,  //
      1, 0, 0, 1, 0, 1,  //
      0, 1, 0, 1, 1, 0,  //
  };
  FactorGraph fg(4, 6, f);
  const int x = -1;
  fg.set_slots({
      0, x, 1, x, 2, x,  //
      x, 0, 1, x, x, 2,  //
      2, x, x, 1, x, 0,  //
      x, 2, x, 1, 0, x,  //
  });
  return fg;
}

FactorGraph FactorGraph::preset_5x10() {
  std::vector<std::uint8_t> f(5 * 10, 0);
  int j = 0;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) {
      f[static_cast<size_t>(a) * 10 + j] = 1;
      f[static_cast<size_t>(b) * 10 + j] = 1;
      ++j;
    }
  return FactorGraph(5, 10, f);
}

}  // namespace scma
