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

#ifndef REVASSIGN_SRC_FLOW_WALK_HPP_
#define REVASSIGN_SRC_FLOW_WALK_HPP_

#include <vector>

#include "revassign/flow_sampler.hpp"

namespace revassign::detail {

// Reusable scratch space for the fractional-cycle walk.
class CycleWalker {
 public:
  enum class Status { kCycle, kNoFractionalEdge, kDeadEnd };
  struct Result {
    Status status;
    int edge;    // kDeadEnd: the only fractional edge at `vertex`
    int vertex;
  };

  Result walk(const FlowState& state, AlternatingCycle& cycle);

 private:
  std::vector<int> position_;
  std::vector<int> path_vertices_;
  std::vector<int> path_edges_;
};

}  // namespace revassign::detail

#endif  // REVASSIGN_SRC_FLOW_WALK_HPP_
