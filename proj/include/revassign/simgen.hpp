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

// Synthetic instances, bid models and the experiments built on them.

#ifndef REVASSIGN_SIMGEN_HPP_
#define REVASSIGN_SIMGEN_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "revassign/lp.hpp"
#include "revassign/model.hpp"
#include "revassign/random.hpp"

namespace revassign {

// Block-diagonal 0/1 similarities: reviewers i..i+g-1 match papers
// i..i+g-1 for i = 0, g, 2g, ... Requires n = d and g dividing n.
ProblemInstance community_similarities(int n, int d, int g, int reviewer_load = 3,
                                       int paper_load = 3);

// Entries i.i.d. uniform on [0, 1).
ProblemInstance uniform_similarities(int n, int d, RandomSource& rng, int reviewer_load = 3,
                                     int paper_load = 3);

enum class BidLevel : std::uint8_t { kNoResponse, kMaybe, kYes };

// "yes", "maybe", "no_response"; throws InvalidInput otherwise.
BidLevel parse_bid_level(std::string_view token);
// yes -> 4, maybe -> 2, no response -> 1.
double bid_level_similarity(BidLevel level);
ProblemInstance bids_to_similarities(const Matrix<BidLevel>& levels, int reviewer_load = 6,
                                     int paper_load = 3);

// Entries in {-1, 0, +1}.
using BidMatrix = Matrix<std::int8_t>;

// S'[r][p] = gamma^b[r][p] * S[r][p].
Matrix<double> apply_bids(const Matrix<double>& similarities, const BidMatrix& bids,
                          double gamma);

struct BidModelParams {
  double gamma = 2.0;
  std::array<double, 3> group_fractions{0.20, 0.50, 0.30};
  std::array<double, 3> bid_probabilities{0.0, 0.016, 0.24};
  double top_fraction = 0.10;

  // Throws InvalidInput on out-of-range values.
  void validate() const;
};

// Reviewers are shuffled and split into groups of floor(f0 n), floor(f1 n)
// and the rest. A reviewer of group g considers its floor(top_fraction d)
// (at least 1) most similar papers, lower index first on ties, and bids +1
// or -1 on each with probability bid_probabilities[g]. If `groups` is
// given it receives each reviewer's group.
BidMatrix honest_bids(const Matrix<double>& similarities, const BidModelParams& params,
                      RandomSource& rng, std::vector<int>* groups = nullptr);

// +1 on the target paper, -1 everywhere else.
std::vector<std::int8_t> malicious_bids(int target_paper, int n_papers);

// Reviewer with the rank-th highest similarity to `paper` (rank 1 is the
// best), lower index first on ties.
int reviewer_at_rank(const Matrix<double>& similarities, int paper, int rank);

struct ManipulationReport {
  int attacker_rank = 0;
  int trials = 0;
  // Mean probability that the attacker ends up on the target paper, with
  // the standard error of the mean over trials.
  double deterministic_success = 0.0;
  double deterministic_stderr = 0.0;
  double randomized_success = 0.0;
  double randomized_stderr = 0.0;
  // Same, when the attacker does not bid at all.
  double baseline_deterministic = 0.0;
  double baseline_deterministic_stderr = 0.0;
  double baseline_randomized = 0.0;
  double baseline_randomized_stderr = 0.0;
  // Empirical attack success frequency of sampled randomized assignments
  // (only when samples_per_trial > 0).
  double sampled_randomized_success = 0.0;
  long long samples = 0;
  // Largest attacker-target marginal over all trials.
  double max_randomized_marginal = 0.0;
};

struct ManipulationOptions {
  int samples_per_trial = 0;
  SolveOptions solve;
};

// For each trial: a uniformly random target paper, fresh honest bids, the
// rank-th reviewer of the target as attacker. Compares the deterministic
// optimum (Q = 1) with the randomized assignment at cap q0.
ManipulationReport manipulation_experiment(const ProblemInstance& instance,
                                           const BidModelParams& params, double q0,
                                           int attacker_rank, int trials, RandomSource& rng,
                                           const ManipulationOptions& options = {});

struct CurvePoint {
  double x = 0.0;
  // Objective as a percentage of the reference objective, averaged over
  // trials where the program was feasible.
  double mean_percent = 0.0;
  double stderr_percent = 0.0;
  int trials = 0;
  int feasible_trials = 0;
};

using InstanceFactory = std::function<ProblemInstance(RandomSource&)>;
using PartitionFactory =
    std::function<ReviewerPartition(const ProblemInstance&, RandomSource&)>;

// Objective at Q = q0 relative to the unconstrained (Q = 1) optimum.
std::vector<CurvePoint> tradeoff_curve(const InstanceFactory& make_instance,
                                       std::span<const double> q0_values, int trials,
                                       const RandomSource& rng,
                                       const SolveOptions& options = {});

// Objective with the partition constraint at each subset cap relative to
// the pairwise optimum at the same q0.
std::vector<CurvePoint> partition_sweep(const InstanceFactory& make_instance,
                                        const PartitionFactory& make_partition, double q0,
                                        std::span<const double> subset_caps, int trials,
                                        const RandomSource& rng,
                                        const SolveOptions& options = {});

// Reviewer r joins subset r / g.
ReviewerPartition block_partition(int n_reviewers, int g);
// Random subsets of `subset_size` reviewers; the remainder forms one more subset.
ReviewerPartition random_partition(int n_reviewers, int subset_size, RandomSource& rng);

// from, from + step, ... up to `to` (inclusive, up to rounding).
std::vector<double> grid(double from, double to, double step);

}  // namespace revassign

#endif  // REVASSIGN_SIMGEN_HPP_
