#pragma once

#include "lotwassmap/common.hpp"

#include <vector>

namespace lotwassmap::detail {

/// Primal network simplex on the complete bipartite transportation network.
///
/// Nodes 0..m-1 are sources with supply a_i, nodes m..m+k-1 are sinks with
/// demand b_j, and node m+k is an artificial root. Real arcs i -> m+j are
/// uncapacitated and stored implicitly (arc id i*k + j); each node also owns
/// one artificial arc to or from the root, which starts as the initial
/// spanning tree. The spanning tree is kept as parent/thread/rev_thread
/// lists with subtree sizes and last successors, and entering arcs are
/// chosen by block search.
class TransportNetworkSimplex {
public:
  enum class Status { Optimal, Infeasible };

  TransportNetworkSimplex(const RowMatrix& cost, const Vector& supply, const Vector& demand);

  Status run();

  /// Flow on real arc (i, j).
  double flow(Index i, Index j) const { return flow_[static_cast<std::size_t>(i * k_ + j)]; }
  /// Node potential; reduced cost of arc (i, j) is C_ij + pi(i) - pi(m + j).
  double potential(Index node) const { return pi_[static_cast<std::size_t>(node)]; }
  long long pivots() const noexcept { return pivots_; }

  /// Walks the tree arrays and returns false on any structural inconsistency.
  bool check_tree() const;

private:
  static constexpr signed char kStateLower = 1;
  static constexpr signed char kStateTree = 0;

  int source(int e) const { return e < arc_num_ ? e / k_ : art_source_[e - arc_num_]; }
  int target(int e) const { return e < arc_num_ ? m_ + e % k_ : art_target_[e - arc_num_]; }
  double arc_cost(int e) const { return e < arc_num_ ? cost_[e] : art_cost_[e - arc_num_]; }

  bool find_entering_arc();
  void find_join_node();
  bool find_leaving_arc();
  void change_flow();
  void update_tree_structure();
  void update_potential();

  int m_;
  int k_;
  int node_num_;
  int arc_num_;
  int root_;
  const double* cost_;

  std::vector<double> supply_;
  std::vector<double> flow_;
  std::vector<signed char> state_;
  std::vector<int> art_source_;
  std::vector<int> art_target_;
  std::vector<double> art_cost_;

  std::vector<int> parent_;
  std::vector<int> pred_;
  std::vector<int> thread_;
  std::vector<int> rev_thread_;
  std::vector<int> succ_num_;
  std::vector<int> last_succ_;
  std::vector<int> dirty_revs_;
  std::vector<char> forward_;
  std::vector<double> pi_;

  int block_size_ = 10;
  int next_arc_ = 0;

  int in_arc_ = -1;
  int join_ = -1;
  int u_in_ = -1;
  int v_in_ = -1;
  int u_out_ = -1;
  int v_out_ = -1;
  double delta_ = 0.0;
  long long pivots_ = 0;
};

}  // namespace lotwassmap::detail
