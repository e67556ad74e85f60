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

#include "revassign/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace revassign {

MaxFlow::MaxFlow(int num_nodes) : first_(num_nodes, -1) {}

int MaxFlow::add_node() {
  first_.push_back(-1);
  return num_nodes() - 1;
}

int MaxFlow::add_edge(int from, int to, long long capacity) {
  if (from < 0 || to < 0 || from >= num_nodes() || to >= num_nodes()) {
    throw std::out_of_range("max-flow edge endpoint out of range");
  }
  if (capacity < 0) throw std::invalid_argument("negative max-flow capacity");
  const int id = static_cast<int>(capacity_.size());
  arcs_.push_back({to, first_[from], capacity});
  first_[from] = 2 * id;
  arcs_.push_back({from, first_[to], 0});
  first_[to] = 2 * id + 1;
  capacity_.push_back(capacity);
  return id;
}

long long MaxFlow::flow(int edge) const { return arcs_[2 * edge + 1].residual; }

bool MaxFlow::build_levels(int source, int sink) {
  level_.assign(num_nodes(), -1);
  std::vector<int> queue{source};
  level_[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (int a = first_[u]; a >= 0; a = arcs_[a].next) {
      const int v = arcs_[a].to;
      if (arcs_[a].residual > 0 && level_[v] < 0) {
        level_[v] = level_[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return level_[sink] >= 0;
}

long long MaxFlow::augment(int u, int sink, long long limit) {
  if (u == sink) return limit;
  for (int& a = cursor_[u]; a >= 0; a = arcs_[a].next) {
    Arc& arc = arcs_[a];
    if (arc.residual <= 0 || level_[arc.to] != level_[u] + 1) continue;
    const long long pushed = augment(arc.to, sink, std::min(limit, arc.residual));
    if (pushed > 0) {
      arc.residual -= pushed;
      arcs_[a ^ 1].residual += pushed;
      return pushed;
    }
  }
  return 0;
}

long long MaxFlow::run(int source, int sink) {
  if (source == sink) return 0;
  long long total = 0;
  while (build_levels(source, sink)) {
    cursor_ = first_;
    while (const long long pushed =
               augment(source, sink, std::numeric_limits<long long>::max())) {
      total += pushed;
    }
  }
  return total;
}

}  // namespace revassign
