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

// Primal network simplex for min-cost flow with real-valued capacities and
// costs. Uses a big-M artificial root, strongly feasible spanning trees
// (leaving-arc rule of LEMON's implementation) and block-search pricing.
//
//   NetworkSimplex ns;
//   int s = ns.add_node(2.0), t = ns.add_node(-2.0);
//   int a = ns.add_arc(s, t, 5.0, -1.0);
//   if (ns.run() == NetworkSimplex::Status::kOptimal) use(ns.flow(a));

#ifndef REVASSIGN_LP_NETWORK_SIMPLEX_HPP_
#define REVASSIGN_LP_NETWORK_SIMPLEX_HPP_

#include <cstdint>
#include <vector>

namespace revassign::lp {

class NetworkSimplex {
 public:
  enum class Status { kOptimal, kInfeasible, kIterationLimit };

  // Positive supply is a source, negative a sink. Supplies must balance.
  int add_node(double supply);
  // Capacity must be finite and non-negative.
  int add_arc(int from, int to, double capacity, double cost);

  int num_nodes() const { return static_cast<int>(supply_.size()); }
  int num_arcs() const { return num_user_arcs_; }

  // max_pivots < 0 means unlimited.
  Status run(long long max_pivots = -1);

  double flow(int arc) const { return flow_[arc]; }
  double total_cost() const;
  long long pivots() const { return pivots_; }
  // After kInfeasible: a node whose supply could not be routed.
  int unrouted_node() const { return unrouted_node_; }

 private:
  enum : signed char { kUpper = -1, kTree = 0, kLower = 1 };

  bool find_entering_arc();
  int find_join(int u, int v) const;
  bool find_leaving_arc();
  void change_flow();
  void update_tree();
  void recompute_subtree(int top);
  void detach(int u);
  void attach(int u, int parent);

  std::vector<double> supply_;
  int num_user_arcs_ = 0;

  // Arc data (user arcs first, then one artificial arc per node).
  std::vector<int> source_, target_;
  std::vector<double> cap_, cost_, flow_;
  std::vector<signed char> state_;

  // Spanning tree, indexed by node (root = num_nodes()).
  std::vector<int> parent_, pred_, depth_;
  std::vector<signed char> pred_up_;  // +1: pred arc points to parent.
  std::vector<int> first_child_, next_sibling_, prev_sibling_;
  std::vector<double> pi_;

  int root_ = -1;
  int in_arc_ = -1, join_ = -1;
  int u_in_ = -1, v_in_ = -1, u_out_ = -1;
  bool leaves_tree_ = false;
  double delta_ = 0.0;
  double price_eps_ = 0.0;
  double flow_eps_ = 0.0;
  int block_size_ = 0, next_arc_ = 0;
  long long pivots_ = 0;
  int unrouted_node_ = -1;
};

}  // namespace revassign::lp

#endif  // REVASSIGN_LP_NETWORK_SIMPLEX_HPP_
