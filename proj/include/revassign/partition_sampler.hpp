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

// Rounding that also respects reviewer subsets.
//
// Besides the marginals, every subset-paper load mu = sum_{r in I} F_rp is
// rounded to floor(mu) or ceil(mu), so a paper never receives two reviewers
// of a subset whose load on it is at most 1.
//
// The flow network gets one hub vertex per (subset, paper). A cycle that
// leaves a paper through the subset it arrived from never touches the hub's
// guard edge hub -> paper. A cycle that switches subsets at a paper crosses
// two guard edges, and the step sizes are limited so that both loads stay
// within their floor/ceil range.

#ifndef REVASSIGN_PARTITION_SAMPLER_HPP_
#define REVASSIGN_PARTITION_SAMPLER_HPP_

#include <vector>

#include "revassign/flow_sampler.hpp"

namespace revassign {

struct SubsetPaperLoad {
  int subset;
  int paper;
  double load;

  friend bool operator==(const SubsetPaperLoad&, const SubsetPaperLoad&) = default;
};

struct GuardedCycle {
  AlternatingCycle cycle;
  // Loads that shrink under the A-decreasing push (their guard edge is in
  // class A) and loads that grow under it.
  std::vector<SubsetPaperLoad> d1;
  std::vector<SubsetPaperLoad> d2;
};

FlowState build_partitioned_flow(const FractionalAssignment& fractional,
                                 const ProblemInstance& instance,
                                 const ReviewerPartition& partition);

// Returns nullopt when no fractional pair edge remains. Throws InternalError
// on a vertex without an eligible continuation.
std::optional<GuardedCycle> find_guarded_cycle(const FlowState& state);

DeterministicAssignment sample_partitioned(const FractionalAssignment& fractional,
                                           const ProblemInstance& instance,
                                           const ReviewerPartition& partition,
                                           RandomSource& rng, SampleStats* stats = nullptr);

// E[X^2] for the two-point law on {floor(mu), ceil(mu)} with mean mu.
double two_point_second_moment(double mu);

// Sum over subsets I and papers p of E[C(X,2)] with X two-point around the
// load mu = sum_{r in I} F_rp: the least expected number of same-subset
// pairs any implementation of F can have.
double expected_pair_bound(const FractionalAssignment& fractional,
                           const ReviewerPartition& partition);

}  // namespace revassign

#endif  // REVASSIGN_PARTITION_SAMPLER_HPP_
