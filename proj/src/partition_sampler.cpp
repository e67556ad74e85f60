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

#include "revassign/partition_sampler.hpp"

#include <cmath>

namespace revassign {

FlowState build_partitioned_flow(const FractionalAssignment& fractional,
                                 const ProblemInstance& instance,
                                 const ReviewerPartition& partition) {
  return FlowState(fractional, instance, &partition);
}

std::optional<GuardedCycle> find_guarded_cycle(const FlowState& state) {
  if (!state.partitioned()) throw InvalidInput("flow state was built without a partition");
  auto cycle = find_fractional_cycle(state);
  if (!cycle) return std::nullopt;
  GuardedCycle guarded{std::move(*cycle), {}, {}};
  const int d = state.n_papers();
  const int first_guard = state.guard_edge(0, 0);
  for (const auto& ce : guarded.cycle.edges) {
    if (state.kind(ce.edge) != FlowState::EdgeKind::kGuard) continue;
    const int subset = (ce.edge - first_guard) / d;
    const int paper = (ce.edge - first_guard) % d;
    const SubsetPaperLoad load{subset, paper, state.subset_load(subset, paper)};
    (ce.in_a ? guarded.d1 : guarded.d2).push_back(load);
  }
  return guarded;
}

DeterministicAssignment sample_partitioned(const FractionalAssignment& fractional,
                                           const ProblemInstance& instance,
                                           const ReviewerPartition& partition,
                                           RandomSource& rng, SampleStats* stats) {
  FlowState state(fractional, instance, &partition);
  detail::round_flow(state, rng, stats);
  DeterministicAssignment m = state.to_assignment();
  const auto report = validate_deterministic(m, instance);
  if (!report.ok()) throw InternalError("sampled assignment breaks the loads: " + report.summary());
  return m;
}

double two_point_second_moment(double mu) {
  const double c = std::ceil(mu);
  return -c * c + c - mu + 2.0 * c * mu;
}

double expected_pair_bound(const FractionalAssignment& fractional,
                           const ReviewerPartition& partition) {
  if (partition.n_reviewers() != fractional.n_reviewers()) {
    throw DimensionMismatch("partition covers " + std::to_string(partition.n_reviewers()) +
                            " reviewers but the assignment has " +
                            std::to_string(fractional.n_reviewers()));
  }
  double total = 0.0;
  for (int i = 0; i < partition.n_subsets(); ++i) {
    for (int p = 0; p < fractional.n_papers(); ++p) {
      double mu = 0.0;
      for (int r : partition.members(i)) mu += fractional(r, p);
      if (std::abs(mu - std::round(mu)) <= kLoadTolerance) mu = std::round(mu);
      total += 0.5 * (two_point_second_moment(mu) - mu);
    }
  }
  return total;
}

}  // namespace revassign
