#pragma once

#include <cstdint>
#include <vector>

namespace scma {

/// Binary incidence structure of a K-resource, J-user SCMA system.
/// Each user occupies N resources, each resource carries df users.
/// Every edge (resource, user) additionally carries a "slot" index in
/// [0, df): the index of the operator scalar psi applied to that edge.
/// Slots are distinct among the users sharing a resource.
class FactorGraph {
public:
  FactorGraph() = default;  // empty placeholder, K == J == 0

  // incidence is row-major K x J with 0/1 entries. Slots default to the
  // rank of the user within its resource; use set_slots to override.
  FactorGraph(int K, int J, std::vector<std::uint8_t> incidence);

  // The K=4, J=6 graph with the slot placement of its six mapping
  // matrices (resource 1 carries users {1,3,5} with slots psi_1..psi_3).
  static FactorGraph preset_4x6();

  // The K=5, J=10 graph where each user occupies a distinct resource pair.
  static FactorGraph preset_5x10();

  int K() const { return k_; }
  int J() const { return j_; }
  int N() const { return n_; }
  int df() const { return df_; }
  double overload() const { return static_cast<double>(j_) / k_; }

  bool edge(int k, int j) const { return f_[static_cast<size_t>(k) * j_ + j] != 0; }
  const std::vector<std::uint8_t>& incidence() const { return f_; }

  const std::vector<int>& resource_users(int k) const { return resource_users_[k]; }
  const std::vector<int>& user_resources(int j) const { return user_resources_[j]; }

  /// Slot of edge (k, j); -1 when the edge does not exist.
  int slot(int k, int j) const { return slot_[static_cast<size_t>(k) * j_ + j]; }
  /// Slot of user j's n-th dimension (n-th occupied resource, ascending k).
  int slot_for_dim(int j, int n) const { return slot(user_resources_[j][n], j); }

  // Row-major K x J, -1 on non-edges. Must be distinct per resource.
  void set_slots(std::vector<int> slots);

  bool operator==(const FactorGraph& o) const {
    return k_ == o.k_ && j_ == o.j_ && f_ == o.f_ && slot_ == o.slot_;
  }

private:
  int k_ = 0, j_ = 0, n_ = 0, df_ = 0;
  std::vector<std::uint8_t> f_;
  std::vector<int> slot_;
  std::vector<std::vector<int>> resource_users_;
  std::vector<std::vector<int>> user_resources_;
};

}  // namespace scma
