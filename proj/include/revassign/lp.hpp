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

// Optimal fractional assignments.
//
// Every solver maximizes sum_{r,p} S[r][p] F[r][p] (or, for solve_fair, the
// minimum per-paper expected similarity) subject to
//
//   0 <= F[r][p] <= min(1, Q[r][p]),  sum_p F[r][p] <= k_r,  sum_r F[r][p] = l_p
//
// plus variant-specific constraints. Failures are reported as Infeasible
// (no feasible F), InvalidInput/DimensionMismatch (bad arguments) or
// InternalError (solver breakdown).

#ifndef REVASSIGN_LP_HPP_
#define REVASSIGN_LP_HPP_

#include "revassign/model.hpp"

namespace revassign {

enum class LpEngine {
  kAuto,     // network simplex when the program is a flow, dense otherwise
  kNetwork,  // min-cost flow; only for the pairwise and partition programs
  kDense,    // general bounded simplex
};

struct SolveOptions {
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-7;
  // Pivot limit; negative means unlimited.
  long long max_iterations = -1;
  LpEngine engine = LpEngine::kAuto;
};

struct FairSolution {
  FractionalAssignment assignment;
  // Largest achievable min_p sum_r S[r][p] F[r][p].
  double fairness_value;
};

FractionalAssignment solve_pairwise(const ProblemInstance& instance,
                                    const ProbabilityCap& caps,
                                    const SolveOptions& options = {});

// Adds sum_{r in I} F[r][p] <= subset_cap for every subset I and paper p.
// subset_cap must be >= 1.
FractionalAssignment solve_partition(const ProblemInstance& instance,
                                     const ProbabilityCap& caps,
                                     const ReviewerPartition& partition,
                                     double subset_cap,
                                     const SolveOptions& options = {});

FairSolution solve_fair(const ProblemInstance& instance, const ProbabilityCap& caps,
                        const SolveOptions& options = {});

// Q[r][p] = min(lambda / W[r][p], 1), with Q = 1 where W = 0.
ProbabilityCap bad_assignment_caps(const BadAssignmentProbabilities& bad, double lambda);

// Caps the joint bad-and-assigned probability W[r][p] F[r][p] by lambda.
FractionalAssignment solve_bad_pairwise(const ProblemInstance& instance,
                                        const BadAssignmentProbabilities& bad,
                                        double lambda,
                                        const SolveOptions& options = {});

// As solve_bad_pairwise with the partition constraint at subset_cap = 1.
FractionalAssignment solve_bad_partition(const ProblemInstance& instance,
                                         const BadAssignmentProbabilities& bad,
                                         double lambda,
                                         const ReviewerPartition& partition,
                                         const SolveOptions& options = {});

// Additionally caps the expected number of bad reviewers of every paper,
// sum_r W[r][p] F[r][p] <= mu.
FractionalAssignment solve_bad_expectation(const ProblemInstance& instance,
                                           const BadAssignmentProbabilities& bad,
                                           double lambda, double mu,
                                           const SolveOptions& options = {});

}  // namespace revassign

#endif  // REVASSIGN_LP_HPP_
