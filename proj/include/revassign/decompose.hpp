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

// Explicit lotteries over deterministic assignments.
//
// A fractional assignment whose loads are met with equality is split as
// F = alpha0 * M0 + (1 - alpha0) * F', where M0 is an integral solution
// built from the entries equal to 1 plus a maximum matching of the
// fractional entries, and F' has fewer fractional entries than F. Repeating
// on F' yields the whole lottery. Reviewers with spare capacity are padded
// with unit-demand dummy papers first and the dummies are stripped again.

#ifndef REVASSIGN_DECOMPOSE_HPP_
#define REVASSIGN_DECOMPOSE_HPP_

#include <span>
#include <utility>
#include <vector>

#include "revassign/model.hpp"

namespace revassign {

using PairList = std::vector<std::pair<int, int>>;

// Maximum subset of the (reviewer, paper) pairs in which reviewer r appears
// at most reviewer_capacity[r] times and paper p at most paper_capacity[p]
// times. Pairs are returned in input order.
PairList max_capacitated_matching(const PairList& pairs, std::span<const int> reviewer_capacity,
                                  std::span<const int> paper_capacity);

struct DecomposeStep {
  Matrix<std::uint8_t> m0;
  double alpha0;
  // Meaningful only when alpha0 < 1.
  Matrix<double> remainder;
};

// One split of F, whose row sums equal reviewer_load and whose column sums
// equal paper_load. Throws InvalidInput when the fractional entries admit
// no perfect matching, i.e. F is not such a solution.
DecomposeStep decompose_step(const Matrix<double>& fractional,
                             std::span<const int> reviewer_load,
                             std::span<const int> paper_load);

struct DecomposeStats {
  long long initial_fractional_entries = 0;
  long long padded_fractional_entries = 0;
  long long dummy_papers = 0;
  long long steps = 0;
};

// The weights sum to 1 and sum_i weight_i * M_i reproduces F. Components
// are distinct.
AssignmentDistribution decompose(const FractionalAssignment& fractional,
                                 const ProblemInstance& instance,
                                 DecomposeStats* stats = nullptr);

}  // namespace revassign

#endif  // REVASSIGN_DECOMPOSE_HPP_
