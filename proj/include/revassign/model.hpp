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

// Core domain types for randomized reviewer assignment.
//
// An instance has n reviewers and d papers. Reviewer r reviews at most
// reviewer_load[r] papers, paper p receives exactly paper_load[p] reviewers.
// A fractional assignment F holds marginal assignment probabilities, a
// deterministic assignment M is a 0/1 matrix, and an AssignmentDistribution
// is an explicit lottery over deterministic assignments.

#ifndef REVASSIGN_MODEL_HPP_
#define REVASSIGN_MODEL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "revassign/errors.hpp"
#include "revassign/matrix.hpp"

namespace revassign {

// Absolute tolerance on fractional load sums.
inline constexpr double kLoadTolerance = 1e-6;

class ValidationReport {
 public:
  void add(std::string violation) { violations_.push_back(std::move(violation)); }
  bool ok() const { return violations_.empty(); }
  explicit operator bool() const { return ok(); }
  const std::vector<std::string>& violations() const { return violations_; }
  // All violations joined with "; ", or "OK".
  std::string summary() const;

 private:
  std::vector<std::string> violations_;
};

class ProblemInstance {
 public:
  // No checks here; use validate_instance() or require_valid().
  ProblemInstance(Matrix<double> similarities, std::vector<int> reviewer_load,
                  std::vector<int> paper_load);

  // Same load for every reviewer and every paper.
  static ProblemInstance with_uniform_loads(Matrix<double> similarities,
                                            int reviewer_load, int paper_load);

  int n_reviewers() const { return static_cast<int>(similarities_.rows()); }
  int n_papers() const { return static_cast<int>(similarities_.cols()); }
  const Matrix<double>& similarities() const { return similarities_; }
  double similarity(int r, int p) const { return similarities_(r, p); }
  std::span<const int> reviewer_loads() const { return reviewer_load_; }
  std::span<const int> paper_loads() const { return paper_load_; }
  int reviewer_load(int r) const { return reviewer_load_[r]; }
  int paper_load(int p) const { return paper_load_[p]; }
  long long total_reviewer_capacity() const;
  long long total_paper_demand() const;

 private:
  Matrix<double> similarities_;
  std::vector<int> reviewer_load_;
  std::vector<int> paper_load_;
};

ValidationReport validate_instance(const ProblemInstance& instance);
// Throws InvalidInput (DimensionMismatch for shape errors) unless valid.
void require_valid(const ProblemInstance& instance);

// Per-pair upper bounds on marginal assignment probabilities.
class ProbabilityCap {
 public:
  explicit ProbabilityCap(Matrix<double> caps);
  static ProbabilityCap uniform(int n_reviewers, int n_papers, double q0);

  double operator()(int r, int p) const { return caps_(r, p); }
  const Matrix<double>& matrix() const { return caps_; }
  int n_reviewers() const { return static_cast<int>(caps_.rows()); }
  int n_papers() const { return static_cast<int>(caps_.cols()); }

 private:
  Matrix<double> caps_;
};

// Partition of the reviewers into subsets 0..m-1 (e.g. institutions).
class ReviewerPartition {
 public:
  explicit ReviewerPartition(std::vector<int> subset_of);
  static ReviewerPartition singletons(int n_reviewers);

  int n_reviewers() const { return static_cast<int>(subset_of_.size()); }
  int n_subsets() const { return static_cast<int>(members_.size()); }
  int subset_of(int r) const { return subset_of_[r]; }
  std::span<const int> subset_indices() const { return subset_of_; }
  // Reviewers of subset i in increasing order.
  std::span<const int> members(int subset) const { return members_[subset]; }

 private:
  std::vector<int> subset_of_;
  std::vector<std::vector<int>> members_;
};

// Marginal probabilities F[r][p]. Entries are clamped into [0,1] when they
// fall outside by at most kLoadTolerance; larger excursions throw.
class FractionalAssignment {
 public:
  explicit FractionalAssignment(Matrix<double> probs);

  double operator()(int r, int p) const { return probs_(r, p); }
  const Matrix<double>& matrix() const { return probs_; }
  int n_reviewers() const { return static_cast<int>(probs_.rows()); }
  int n_papers() const { return static_cast<int>(probs_.cols()); }
  double row_sum(int r) const;
  double col_sum(int p) const;

 private:
  Matrix<double> probs_;
};

ValidationReport validate_fractional(const FractionalAssignment& fractional,
                                     const ProblemInstance& instance,
                                     double tolerance = kLoadTolerance);

class DeterministicAssignment {
 public:
  explicit DeterministicAssignment(Matrix<std::uint8_t> assigned);
  // papers[p] lists the reviewers assigned to paper p.
  static DeterministicAssignment from_paper_lists(
      int n_reviewers, const std::vector<std::vector<int>>& papers);

  bool operator()(int r, int p) const { return assigned_(r, p) != 0; }
  const Matrix<std::uint8_t>& matrix() const { return assigned_; }
  int n_reviewers() const { return static_cast<int>(assigned_.rows()); }
  int n_papers() const { return static_cast<int>(assigned_.cols()); }
  std::vector<std::vector<int>> paper_lists() const;
  int reviewer_count(int r) const;
  int paper_count(int p) const;

  friend bool operator==(const DeterministicAssignment&,
                         const DeterministicAssignment&) = default;

 private:
  Matrix<std::uint8_t> assigned_;
};

ValidationReport validate_deterministic(const DeterministicAssignment& assignment,
                                        const ProblemInstance& instance);

struct LotteryComponent {
  double weight;
  DeterministicAssignment assignment;
};

class AssignmentDistribution {
 public:
  AssignmentDistribution() = default;
  explicit AssignmentDistribution(std::vector<LotteryComponent> components)
      : components_(std::move(components)) {}

  const std::vector<LotteryComponent>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  double total_weight() const;
  // Sum_i weight_i * M_i.
  Matrix<double> marginals() const;

 private:
  std::vector<LotteryComponent> components_;
};

// Weights in (0,1] summing to 1 within `tolerance`, each component a valid
// deterministic assignment.
ValidationReport validate_distribution(const AssignmentDistribution& lottery,
                                       const ProblemInstance& instance,
                                       double tolerance = 1e-9);

// W[r][p]: probability that assigning r to p would be a bad assignment.
class BadAssignmentProbabilities {
 public:
  explicit BadAssignmentProbabilities(Matrix<double> probs);

  double operator()(int r, int p) const { return probs_(r, p); }
  const Matrix<double>& matrix() const { return probs_; }
  int n_reviewers() const { return static_cast<int>(probs_.rows()); }
  int n_papers() const { return static_cast<int>(probs_.cols()); }

 private:
  Matrix<double> probs_;
};

// Sum_{r,p} S[r][p] * F[r][p].
double expected_similarity(const FractionalAssignment& fractional,
                           const ProblemInstance& instance);
double expected_similarity(const Matrix<double>& fractional,
                           const ProblemInstance& instance);
// min_p Sum_r S[r][p] * F[r][p].
double stochastic_fairness(const FractionalAssignment& fractional,
                           const ProblemInstance& instance);
double stochastic_fairness(const Matrix<double>& fractional,
                           const ProblemInstance& instance);

double assignment_similarity(const DeterministicAssignment& assignment,
                             const ProblemInstance& instance);
double assignment_fairness(const DeterministicAssignment& assignment,
                           const ProblemInstance& instance);

// Number of pairs of same-subset reviewers sharing a paper.
long long same_subset_pair_count(const DeterministicAssignment& assignment,
                                 const ReviewerPartition& partition);

}  // namespace revassign

#endif  // REVASSIGN_MODEL_HPP_
