// Copyright 2026 The revassign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "revassign/lp/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "revassign/errors.hpp"

namespace revassign::lp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int NetworkSimplex::add_node(double supply) {
  supply_.push_back(supply);
  return static_cast<int>(supply_.size()) - 1;
}

int NetworkSimplex::add_arc(int from, int to, double capacity, double cost) {
  if (from < 0 || to < 0 || from >= num_nodes() || to >= num_nodes()) {
    throw std::out_of_range("arc endpoint out of range");
  }
  if (!(capacity >= 0.0) || !std::isfinite(capacity) || !std::isfinite(cost)) {
    throw std::invalid_argument("arc capacity must be finite and >= 0");
  }
  source_.push_back(from);
  target_.push_back(to);
  cap_.push_back(capacity);
  cost_.push_back(cost);
  return num_user_arcs_++;
}

double NetworkSimplex::total_cost() const {
  double total = 0.0;
  for (int a = 0; a < num_user_arcs_; ++a) total += cost_[a] * flow_[a];
  return total;
}

void NetworkSimplex::detach(int u) {
  const int p = parent_[u];
  if (prev_sibling_[u] >= 0) {
    next_sibling_[prev_sibling_[u]] = next_sibling_[u];
  } else {
    first_child_[p] = next_sibling_[u];
  }
  if (next_sibling_[u] >= 0) prev_sibling_[next_sibling_[u]] = prev_sibling_[u];
  next_sibling_[u] = prev_sibling_[u] = -1;
}

void NetworkSimplex::attach(int u, int p) {
  parent_[u] = p;
  prev_sibling_[u] = -1;
  next_sibling_[u] = first_child_[p];
  if (first_child_[p] >= 0) prev_sibling_[first_child_[p]] = u;
  first_child_[p] = u;
}

NetworkSimplex::Status NetworkSimplex::run(long long max_pivots) {
  const int n = num_nodes();
  root_ = n;
  unrouted_node_ = -1;
  pivots_ = 0;

  double imbalance = 0.0;
  double supply_scale = 1.0;
  for (double s : supply_) {
    imbalance += s;
    supply_scale = std::max(supply_scale, std::abs(s));
  }
  source_.resize(num_user_arcs_);
  target_.resize(num_user_arcs_);
  cap_.resize(num_user_arcs_);
  cost_.resize(num_user_arcs_);
  flow_.assign(num_user_arcs_, 0.0);
  state_.assign(num_user_arcs_, kLower);
  if (std::abs(imbalance) > 1e-9 * supply_scale) {
    unrouted_node_ = 0;
    return Status::kInfeasible;
  }

  double max_cost = 0.0;
  for (int a = 0; a < num_user_arcs_; ++a) max_cost = std::max(max_cost, std::abs(cost_[a]));
  const double art_cost = (max_cost + 1.0) * (n + 1);
  price_eps_ = 1e-9 * (max_cost + 1.0);
  flow_eps_ = 1e-12 * supply_scale;

  parent_.assign(n + 1, -1);
  pred_.assign(n + 1, -1);
  depth_.assign(n + 1, 0);
  pred_up_.assign(n + 1, 0);
  first_child_.assign(n + 1, -1);
  next_sibling_.assign(n + 1, -1);
  prev_sibling_.assign(n + 1, -1);
  pi_.assign(n + 1, 0.0);

  for (int u = 0; u < n; ++u) {
    const int a = static_cast<int>(source_.size());
    if (supply_[u] >= 0.0) {
      source_.push_back(u);
      target_.push_back(root_);
      flow_.push_back(supply_[u]);
      pred_up_[u] = 1;
      pi_[u] = -art_cost;
    } else {
      source_.push_back(root_);
      target_.push_back(u);
      flow_.push_back(-supply_[u]);
      pred_up_[u] = -1;
      pi_[u] = art_cost;
    }
    cap_.push_back(kInf);
    cost_.push_back(art_cost);
    state_.push_back(kTree);
    pred_[u] = a;
    depth_[u] = 1;
    attach(u, root_);
  }

  const int total_arcs = static_cast<int>(source_.size());
  block_size_ = std::max(10, static_cast<int>(std::sqrt(static_cast<double>(total_arcs))));
  next_arc_ = 0;

  while (find_entering_arc()) {
    if (max_pivots >= 0 && pivots_ >= max_pivots) return Status::kIterationLimit;
    join_ = find_join(source_[in_arc_], target_[in_arc_]);
    if (!find_leaving_arc()) {
      throw InternalError("network simplex: unbounded cycle");
    }
    change_flow();
    if (leaves_tree_) update_tree();
    ++pivots_;
  }

  for (int u = 0; u < n; ++u) {
    const int a = num_user_arcs_ + u;
    if (flow_[a] > 1e-9 * supply_scale) {
      unrouted_node_ = u;
      return Status::kInfeasible;
    }
  }
  return Status::kOptimal;
}

bool NetworkSimplex::find_entering_arc() {
  const int total = static_cast<int>(source_.size());
  double best = 0.0;
  int cnt = block_size_;
  int e = next_arc_;
  auto violation = [this](int a) {
    return state_[a] * (cost_[a] + pi_[source_[a]] - pi_[target_[a]]);
  };
  for (; e < total; ++e) {
    const double c = violation(e);
    if (c < best) {
      best = c;
      in_arc_ = e;
    }
    if (--cnt == 0) {
      if (best < -price_eps_) {
        next_arc_ = e;
        return true;
      }
      cnt = block_size_;
    }
  }
  for (e = 0; e < next_arc_; ++e) {
    const double c = violation(e);
    if (c < best) {
      best = c;
      in_arc_ = e;
    }
    if (--cnt == 0) {
      if (best < -price_eps_) {
        next_arc_ = e;
        return true;
      }
      cnt = block_size_;
    }
  }
  if (best < -price_eps_) {
    next_arc_ = e;
    return true;
  }
  return false;
}

int NetworkSimplex::find_join(int u, int v) const {
  while (u != v) {
    if (depth_[u] > depth_[v]) {
      u = parent_[u];
    } else if (depth_[v] > depth_[u]) {
      v = parent_[v];
    } else {
      u = parent_[u];
      v = parent_[v];
    }
  }
  return u;
}

bool NetworkSimplex::find_leaving_arc() {
  int first, second;
  if (state_[in_arc_] == kLower) {
    first = source_[in_arc_];
    second = target_[in_arc_];
  } else {
    first = target_[in_arc_];
    second = source_[in_arc_];
  }
  delta_ = cap_[in_arc_];
  int result = 0;
  for (int u = first; u != join_; u = parent_[u]) {
    const int e = pred_[u];
    const double d = pred_up_[u] == -1 ? cap_[e] - flow_[e] : flow_[e];
    if (d < delta_) {
      delta_ = d;
      u_out_ = u;
      result = 1;
    }
  }
  for (int u = second; u != join_; u = parent_[u]) {
    const int e = pred_[u];
    const double d = pred_up_[u] == 1 ? cap_[e] - flow_[e] : flow_[e];
    if (d <= delta_) {
      delta_ = d;
      u_out_ = u;
      result = 2;
    }
  }
  if (delta_ >= kInf) return false;
  if (result == 1) {
    u_in_ = first;
    v_in_ = second;
  } else {
    u_in_ = second;
    v_in_ = first;
  }
  leaves_tree_ = result != 0;
  return true;
}

void NetworkSimplex::change_flow() {
  auto snap = [this](int e) {
    if (std::abs(flow_[e]) <= flow_eps_) flow_[e] = 0.0;
    else if (std::abs(cap_[e] - flow_[e]) <= flow_eps_) flow_[e] = cap_[e];
  };
  if (delta_ > 0.0) {
    const double val = state_[in_arc_] * delta_;
    flow_[in_arc_] += val;
    snap(in_arc_);
    for (int u = source_[in_arc_]; u != join_; u = parent_[u]) {
      flow_[pred_[u]] -= pred_up_[u] * val;
      snap(pred_[u]);
    }
    for (int u = target_[in_arc_]; u != join_; u = parent_[u]) {
      flow_[pred_[u]] += pred_up_[u] * val;
      snap(pred_[u]);
    }
  }
  if (leaves_tree_) {
    state_[in_arc_] = kTree;
    const int out = pred_[u_out_];
    if (std::abs(flow_[out]) <= std::abs(cap_[out] - flow_[out])) {
      flow_[out] = 0.0;
      state_[out] = kLower;
    } else {
      flow_[out] = cap_[out];
      state_[out] = kUpper;
    }
  } else {
    state_[in_arc_] = static_cast<signed char>(-state_[in_arc_]);
    flow_[in_arc_] = state_[in_arc_] == kLower ? 0.0 : cap_[in_arc_];
  }
}

void NetworkSimplex::update_tree() {
  // Path from u_in_ up to u_out_; this subtree is re-hung below v_in_.
  std::vector<int> path;
  for (int u = u_in_;; u = parent_[u]) {
    path.push_back(u);
    if (u == u_out_) break;
  }
  const std::size_t k = path.size() - 1;
  std::vector<int> old_pred(k);
  std::vector<signed char> old_up(k);
  for (std::size_t i = 0; i < k; ++i) {
    old_pred[i] = pred_[path[i]];
    old_up[i] = pred_up_[path[i]];
  }
  for (int u : path) detach(u);

  attach(path[0], v_in_);
  pred_[path[0]] = in_arc_;
  pred_up_[path[0]] = source_[in_arc_] == path[0] ? 1 : -1;
  for (std::size_t i = 1; i <= k; ++i) {
    attach(path[i], path[i - 1]);
    pred_[path[i]] = old_pred[i - 1];
    pred_up_[path[i]] = static_cast<signed char>(-old_up[i - 1]);
  }
  recompute_subtree(path[0]);
}

void NetworkSimplex::recompute_subtree(int top) {
  std::vector<int> stack{top};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    const int p = parent_[u];
    const int a = pred_[u];
    depth_[u] = depth_[p] + 1;
    pi_[u] = pred_up_[u] == 1 ? pi_[p] - cost_[a] : pi_[p] + cost_[a];
    for (int c = first_child_[u]; c >= 0; c = next_sibling_[c]) stack.push_back(c);
  }
}

}  // namespace revassign::lp
