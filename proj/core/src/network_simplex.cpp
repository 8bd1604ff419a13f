#include "network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lotwassmap::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative pricing tolerance; keeps rounding noise in the potentials from
// producing spurious entering arcs.
constexpr double kPriceEps = 2.2204460492503131e-15;
}  // namespace

TransportNetworkSimplex::TransportNetworkSimplex(const RowMatrix& cost, const Vector& supply,
                                                 const Vector& demand)
    : m_(static_cast<int>(cost.rows())),
      k_(static_cast<int>(cost.cols())),
      node_num_(m_ + k_),
      arc_num_(m_ * k_),
      root_(m_ + k_),
      cost_(cost.data()) {
  const auto nodes = static_cast<std::size_t>(node_num_);
  supply_.resize(nodes + 1);
  for (int i = 0; i < m_; ++i) supply_[static_cast<std::size_t>(i)] = supply(i);
  for (int j = 0; j < k_; ++j) supply_[static_cast<std::size_t>(m_ + j)] = -demand(j);

  flow_.assign(static_cast<std::size_t>(arc_num_) + nodes, 0.0);
  state_.assign(static_cast<std::size_t>(arc_num_) + nodes, kStateLower);
  art_source_.resize(nodes);
  art_target_.resize(nodes);
  art_cost_.resize(nodes);

  parent_.resize(nodes + 1);
  pred_.resize(nodes + 1);
  thread_.resize(nodes + 1);
  rev_thread_.resize(nodes + 1);
  succ_num_.resize(nodes + 1);
  last_succ_.resize(nodes + 1);
  forward_.resize(nodes + 1);
  pi_.resize(nodes + 1);

  double max_cost = 0.0;
  for (int e = 0; e < arc_num_; ++e) max_cost = std::max(max_cost, std::abs(cost_[e]));
  const double art_cost = (max_cost + 1.0) * static_cast<double>(node_num_);

  block_size_ = std::max(10, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(arc_num_)))));

  // Initial tree: a star of artificial arcs around the root.
  parent_[nodes] = -1;
  pred_[nodes] = -1;
  thread_[nodes] = 0;
  rev_thread_[0] = root_;
  succ_num_[nodes] = node_num_ + 1;
  last_succ_[nodes] = root_ - 1;
  pi_[nodes] = 0.0;
  forward_[nodes] = 0;

  for (int u = 0; u < node_num_; ++u) {
    const auto su = static_cast<std::size_t>(u);
    const int e = arc_num_ + u;
    const auto se = static_cast<std::size_t>(e);
    parent_[su] = root_;
    pred_[su] = e;
    thread_[su] = u + 1;
    rev_thread_[su + 1] = u;
    succ_num_[su] = 1;
    last_succ_[su] = u;
    state_[se] = kStateTree;
    if (supply_[su] >= 0.0) {
      forward_[su] = 1;
      pi_[su] = 0.0;
      art_source_[su] = u;
      art_target_[su] = root_;
      flow_[se] = supply_[su];
      art_cost_[su] = 0.0;
    } else {
      forward_[su] = 0;
      pi_[su] = art_cost;
      art_source_[su] = root_;
      art_target_[su] = u;
      flow_[se] = -supply_[su];
      art_cost_[su] = art_cost;
    }
  }
}

bool TransportNetworkSimplex::find_entering_arc() {
  double best = 0.0;
  int cnt = block_size_;
  int e = next_arc_;

  auto price = [&](int e_begin, int e_end) -> bool {
    int i = e_begin / k_;
    int j = e_begin - i * k_;
    const double* pi_sink = pi_.data() + m_;
    for (e = e_begin; e != e_end; ++e) {
      if (state_[static_cast<std::size_t>(e)] == kStateLower) {
        const double ps = pi_[static_cast<std::size_t>(i)];
        const double pt = pi_sink[j];
        const double c = cost_[e] + ps - pt;
        if (c < best) {
          const double scale = std::max({std::abs(ps), std::abs(pt), std::abs(cost_[e])});
          if (c < -kPriceEps * scale) {
            best = c;
            in_arc_ = e;
          }
        }
      }
      if (++j == k_) {
        j = 0;
        ++i;
      }
      if (--cnt == 0) {
        if (best < 0.0) {
          ++e;
          return true;
        }
        cnt = block_size_;
      }
    }
    return false;
  };

  if (price(next_arc_, arc_num_) || price(0, next_arc_)) {
    next_arc_ = e == arc_num_ ? 0 : e;
    return true;
  }
  if (best >= 0.0) return false;
  next_arc_ = e == arc_num_ ? 0 : e;
  return true;
}

void TransportNetworkSimplex::find_join_node() {
  int u = source(in_arc_);
  int v = target(in_arc_);
  while (u != v) {
    if (succ_num_[static_cast<std::size_t>(u)] < succ_num_[static_cast<std::size_t>(v)]) {
      u = parent_[static_cast<std::size_t>(u)];
    } else {
      v = parent_[static_cast<std::size_t>(v)];
    }
  }
  join_ = u;
}

bool TransportNetworkSimplex::find_leaving_arc() {
  // The entering arc is always at its lower bound: flow is pushed from its
  // source around the cycle, so arcs on the source side pointing up lose flow
  // and arcs on the target side pointing down lose flow.
  const int first = source(in_arc_);
  const int second = target(in_arc_);
  delta_ = kInf;
  int result = 0;
  for (int u = first; u != join_; u = parent_[static_cast<std::size_t>(u)]) {
    const auto su = static_cast<std::size_t>(u);
    const double d = forward_[su] ? flow_[static_cast<std::size_t>(pred_[su])] : kInf;
    if (d < delta_) {
      delta_ = d;
      u_out_ = u;
      result = 1;
    }
  }
  for (int u = second; u != join_; u = parent_[static_cast<std::size_t>(u)]) {
    const auto su = static_cast<std::size_t>(u);
    const double d = forward_[su] ? kInf : flow_[static_cast<std::size_t>(pred_[su])];
    if (d <= delta_) {
      delta_ = d;
      u_out_ = u;
      result = 2;
    }
  }
  if (result == 1) {
    u_in_ = first;
    v_in_ = second;
  } else {
    u_in_ = second;
    v_in_ = first;
  }
  return result != 0;
}

void TransportNetworkSimplex::change_flow() {
  if (delta_ > 0.0) {
    const double val = delta_;
    flow_[static_cast<std::size_t>(in_arc_)] += val;
    for (int u = source(in_arc_); u != join_; u = parent_[static_cast<std::size_t>(u)]) {
      const auto su = static_cast<std::size_t>(u);
      flow_[static_cast<std::size_t>(pred_[su])] += forward_[su] ? -val : val;
    }
    for (int u = target(in_arc_); u != join_; u = parent_[static_cast<std::size_t>(u)]) {
      const auto su = static_cast<std::size_t>(u);
      flow_[static_cast<std::size_t>(pred_[su])] += forward_[su] ? val : -val;
    }
  }
  state_[static_cast<std::size_t>(in_arc_)] = kStateTree;
  const auto leaving = static_cast<std::size_t>(pred_[static_cast<std::size_t>(u_out_)]);
  state_[leaving] = kStateLower;
  flow_[leaving] = 0.0;
}

void TransportNetworkSimplex::update_tree_structure() {
  auto at = [](std::vector<int>& vec, int idx) -> int& { return vec[static_cast<std::size_t>(idx)]; };

  const int old_rev_thread = at(rev_thread_, u_out_);
  const int old_succ_num = at(succ_num_, u_out_);
  const int old_last_succ = at(last_succ_, u_out_);
  v_out_ = at(parent_, u_out_);

  int u = at(last_succ_, u_in_);
  int right = at(thread_, u);

  // When old_rev_thread == v_in, join and v_out coincide.
  int last = old_rev_thread == v_in_ ? at(thread_, at(last_succ_, u_out_)) : at(thread_, v_in_);

  // Re-hang the stem (path from u_in up to u_out) under v_in, reversing parents.
  int stem = u_in_;
  at(thread_, v_in_) = stem;
  dirty_revs_.clear();
  dirty_revs_.push_back(v_in_);
  int par_stem = v_in_;
  while (stem != u_out_) {
    const int new_stem = at(parent_, stem);
    at(thread_, u) = new_stem;
    dirty_revs_.push_back(u);

    const int w = at(rev_thread_, stem);
    at(thread_, w) = right;
    at(rev_thread_, right) = w;

    at(parent_, stem) = par_stem;
    par_stem = stem;
    stem = new_stem;

    u = at(last_succ_, stem) == at(last_succ_, par_stem) ? at(rev_thread_, par_stem)
                                                        : at(last_succ_, stem);
    right = at(thread_, u);
  }
  at(parent_, u_out_) = par_stem;
  at(thread_, u) = last;
  at(rev_thread_, last) = u;
  at(last_succ_, u_out_) = u;

  if (old_rev_thread != v_in_) {
    at(thread_, old_rev_thread) = right;
    at(rev_thread_, right) = old_rev_thread;
  }

  for (int d : dirty_revs_) at(rev_thread_, at(thread_, d)) = d;

  // Stem nodes inherit the reversed predecessor arcs.
  int tmp_sc = 0;
  const int tmp_ls = at(last_succ_, u_out_);
  u = u_out_;
  while (u != u_in_) {
    const int w = at(parent_, u);
    at(pred_, u) = at(pred_, w);
    forward_[static_cast<std::size_t>(u)] = !forward_[static_cast<std::size_t>(w)];
    tmp_sc += at(succ_num_, u) - at(succ_num_, w);
    at(succ_num_, u) = tmp_sc;
    at(last_succ_, w) = tmp_ls;
    u = w;
  }
  at(pred_, u_in_) = in_arc_;
  forward_[static_cast<std::size_t>(u_in_)] = u_in_ == source(in_arc_);
  at(succ_num_, u_in_) = old_succ_num;

  int up_limit_in = -1;
  int up_limit_out = -1;
  if (at(last_succ_, join_) == v_in_) {
    up_limit_out = join_;
  } else {
    up_limit_in = join_;
  }

  for (u = v_in_; u != up_limit_in && at(last_succ_, u) == v_in_; u = at(parent_, u)) {
    at(last_succ_, u) = at(last_succ_, u_out_);
  }
  if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
    for (u = v_out_; u != up_limit_out && at(last_succ_, u) == old_last_succ; u = at(parent_, u)) {
      at(last_succ_, u) = old_rev_thread;
    }
  } else {
    for (u = v_out_; u != up_limit_out && at(last_succ_, u) == old_last_succ; u = at(parent_, u)) {
      at(last_succ_, u) = at(last_succ_, u_out_);
    }
  }

  for (u = v_in_; u != join_; u = at(parent_, u)) at(succ_num_, u) += old_succ_num;
  for (u = v_out_; u != join_; u = at(parent_, u)) at(succ_num_, u) -= old_succ_num;
}

void TransportNetworkSimplex::update_potential() {
  const auto su = static_cast<std::size_t>(u_in_);
  const int e = pred_[su];
  const double c = arc_cost(e);
  const double sigma = forward_[su] ? pi_[static_cast<std::size_t>(v_in_)] - pi_[su] - c
                                    : pi_[static_cast<std::size_t>(v_in_)] - pi_[su] + c;
  const int end = thread_[static_cast<std::size_t>(last_succ_[su])];
  for (int u = u_in_; u != end; u = thread_[static_cast<std::size_t>(u)]) {
    pi_[static_cast<std::size_t>(u)] += sigma;
  }
}

TransportNetworkSimplex::Status TransportNetworkSimplex::run() {
  while (find_entering_arc()) {
    find_join_node();
    if (!find_leaving_arc()) break;  // unreachable: costs are bounded below
    change_flow();
    update_tree_structure();
    update_potential();
    ++pivots_;
  }
  for (int u = 0; u < node_num_; ++u) {
    if (flow_[static_cast<std::size_t>(arc_num_ + u)] > 1e-12) return Status::Infeasible;
  }
  return Status::Optimal;
}

bool TransportNetworkSimplex::check_tree() const {
  const auto total = static_cast<std::size_t>(node_num_) + 1;
  // Thread must be one cycle through every node starting at the root.
  std::vector<char> seen(total, 0);
  int u = root_;
  for (std::size_t step = 0; step < total; ++step) {
    const auto su = static_cast<std::size_t>(u);
    if (seen[su]) return false;
    seen[su] = 1;
    if (rev_thread_[static_cast<std::size_t>(thread_[su])] != u) return false;
    u = thread_[su];
  }
  if (u != root_) return false;

  for (int v = 0; v < node_num_; ++v) {
    const auto sv = static_cast<std::size_t>(v);
    const int e = pred_[sv];
    const int p = parent_[sv];
    if (state_[static_cast<std::size_t>(e)] != kStateTree) return false;
    const bool fwd = source(e) == v && target(e) == p;
    const bool bwd = target(e) == v && source(e) == p;
    if (!(fwd || bwd) || static_cast<bool>(forward_[sv]) != fwd) return false;
    const double reduced = arc_cost(e) + pi_[static_cast<std::size_t>(source(e))] -
                           pi_[static_cast<std::size_t>(target(e))];
    if (std::abs(reduced) > 1e-6 * (1.0 + std::abs(arc_cost(e)))) return false;
    // The subtree occupies succ_num consecutive thread positions ending at last_succ.
    int w = v;
    for (int s = 1; s < succ_num_[sv]; ++s) {
      w = thread_[static_cast<std::size_t>(w)];
      int a = w;
      while (a != v && a != root_) a = parent_[static_cast<std::size_t>(a)];
      if (a != v) return false;
    }
    if (w != last_succ_[sv]) return false;
  }
  return true;
}

}  // namespace lotwassmap::detail
