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

// Integer maximum flow by blocking flows on level graphs (Dinic).
//
//   MaxFlow g(4);
//   int e = g.add_edge(0, 1, 3);
//   long long value = g.run(0, 3);

#ifndef REVASSIGN_MAX_FLOW_HPP_
#define REVASSIGN_MAX_FLOW_HPP_

#include <vector>

namespace revassign {

class MaxFlow {
 public:
  explicit MaxFlow(int num_nodes);

  int add_node();
  // Returns the edge id; capacity must be >= 0.
  int add_edge(int from, int to, long long capacity);

  // Maximum s-t flow. May be called once.
  long long run(int source, int sink);

  long long flow(int edge) const;
  int num_nodes() const { return static_cast<int>(first_.size()); }

 private:
  struct Arc {
    int to;
    int next;
    long long residual;
  };

  bool build_levels(int source, int sink);
  long long augment(int u, int sink, long long limit);

  std::vector<int> first_;
  std::vector<Arc> arcs_;
  std::vector<long long> capacity_;
  std::vector<int> level_;
  std::vector<int> cursor_;
};

}  // namespace revassign

#endif  // REVASSIGN_MAX_FLOW_HPP_
