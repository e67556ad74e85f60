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

#include "revassign/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace revassign {

namespace {

void check_unit_interval(const Matrix<double>& m, const char* what) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t p = 0; p < m.cols(); ++p) {
      const double v = m(r, p);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        std::ostringstream msg;
        msg << what << " entry (" << r << "," << p << ") = " << v
            << " outside [0,1]";
        throw InvalidInput(msg.str());
      }
    }
  }
}

template <typename M>
void check_shape(const M& m, const ProblemInstance& instance, const char* what) {
  if (!m.same_shape(instance.n_reviewers(), instance.n_papers())) {
    std::ostringstream msg;
    msg << what << " is " << m.rows() << "x" << m.cols()
        << " but the instance is " << instance.n_reviewers() << "x"
        << instance.n_papers();
    throw DimensionMismatch(msg.str());
  }
}

}  // namespace

std::string ValidationReport::summary() const {
  if (ok()) return "OK";
  std::string out;
  for (const auto& v : violations_) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

ProblemInstance::ProblemInstance(Matrix<double> similarities,
                                 std::vector<int> reviewer_load,
                                 std::vector<int> paper_load)
    : similarities_(std::move(similarities)),
      reviewer_load_(std::move(reviewer_load)),
      paper_load_(std::move(paper_load)) {}

ProblemInstance ProblemInstance::with_uniform_loads(Matrix<double> similarities,
                                                    int reviewer_load,
                                                    int paper_load) {
  const std::size_t n = similarities.rows();
  const std::size_t d = similarities.cols();
  return ProblemInstance(std::move(similarities),
                         std::vector<int>(n, reviewer_load),
                         std::vector<int>(d, paper_load));
}

long long ProblemInstance::total_reviewer_capacity() const {
  return std::accumulate(reviewer_load_.begin(), reviewer_load_.end(), 0LL);
}

long long ProblemInstance::total_paper_demand() const {
  return std::accumulate(paper_load_.begin(), paper_load_.end(), 0LL);
}

ValidationReport validate_instance(const ProblemInstance& instance) {
  ValidationReport report;
  const int n = instance.n_reviewers();
  const int d = instance.n_papers();
  if (n <= 0 || d <= 0) {
    report.add("instance needs at least one reviewer and one paper");
    return report;
  }
  if (static_cast<int>(instance.reviewer_loads().size()) != n) {
    report.add("dimension mismatch: " +
               std::to_string(instance.reviewer_loads().size()) +
               " reviewer loads for " + std::to_string(n) + " reviewers");
  }
  if (static_cast<int>(instance.paper_loads().size()) != d) {
    report.add("dimension mismatch: " +
               std::to_string(instance.paper_loads().size()) +
               " paper loads for " + std::to_string(d) + " papers");
  }
  if (!report.ok()) return report;

  bool negative = false;
  bool non_finite = false;
  for (double s : instance.similarities().values()) {
    if (!std::isfinite(s)) non_finite = true;
    else if (s < 0.0) negative = true;
  }
  if (non_finite) report.add("non-finite similarity");
  if (negative) report.add("negative similarity");

  for (int r = 0; r < n; ++r) {
    if (instance.reviewer_load(r) < 1) {
      report.add("reviewer " + std::to_string(r) + " has load " +
                 std::to_string(instance.reviewer_load(r)) + " < 1");
      break;
    }
  }
  for (int p = 0; p < d; ++p) {
    if (instance.paper_load(p) < 1) {
      report.add("paper " + std::to_string(p) + " has load " +
                 std::to_string(instance.paper_load(p)) + " < 1");
      break;
    }
    if (instance.paper_load(p) > n) {
      report.add("paper " + std::to_string(p) + " needs " +
                 std::to_string(instance.paper_load(p)) + " reviewers but only " +
                 std::to_string(n) + " exist");
      break;
    }
  }
  const long long capacity = instance.total_reviewer_capacity();
  const long long demand = instance.total_paper_demand();
  if (capacity < demand) {
    report.add("total reviewer capacity " + std::to_string(capacity) +
               " < total paper demand " + std::to_string(demand));
  }
  return report;
}

void require_valid(const ProblemInstance& instance) {
  const ValidationReport report = validate_instance(instance);
  if (report.ok()) return;
  for (const auto& v : report.violations()) {
    if (v.starts_with("dimension mismatch")) throw DimensionMismatch(report.summary());
  }
  throw InvalidInput(report.summary());
}

ProbabilityCap::ProbabilityCap(Matrix<double> caps) : caps_(std::move(caps)) {
  check_unit_interval(caps_, "probability cap");
}

ProbabilityCap ProbabilityCap::uniform(int n_reviewers, int n_papers, double q0) {
  return ProbabilityCap(Matrix<double>(n_reviewers, n_papers, q0));
}

ReviewerPartition::ReviewerPartition(std::vector<int> subset_of)
    : subset_of_(std::move(subset_of)) {
  int m = 0;
  for (int s : subset_of_) {
    if (s < 0) throw InvalidInput("negative subset index in partition");
    m = std::max(m, s + 1);
  }
  members_.assign(m, {});
  for (int r = 0; r < static_cast<int>(subset_of_.size()); ++r) {
    members_[subset_of_[r]].push_back(r);
  }
  for (int s = 0; s < m; ++s) {
    if (members_[s].empty()) {
      throw InvalidInput("partition subset indices are not dense: subset " +
                         std::to_string(s) + " is empty");
    }
  }
}

ReviewerPartition ReviewerPartition::singletons(int n_reviewers) {
  std::vector<int> ids(n_reviewers);
  std::iota(ids.begin(), ids.end(), 0);
  return ReviewerPartition(std::move(ids));
}

FractionalAssignment::FractionalAssignment(Matrix<double> probs)
    : probs_(std::move(probs)) {
  for (std::size_t r = 0; r < probs_.rows(); ++r) {
    for (std::size_t p = 0; p < probs_.cols(); ++p) {
      double& v = probs_(r, p);
      if (!std::isfinite(v) || v < -kLoadTolerance || v > 1.0 + kLoadTolerance) {
        std::ostringstream msg;
        msg << "fractional assignment entry (" << r << "," << p << ") = " << v
            << " outside [0,1]";
        throw InvalidInput(msg.str());
      }
      v = std::clamp(v, 0.0, 1.0);
    }
  }
}

double FractionalAssignment::row_sum(int r) const {
  const auto row = probs_.row(r);
  return std::accumulate(row.begin(), row.end(), 0.0);
}

double FractionalAssignment::col_sum(int p) const {
  double sum = 0.0;
  for (std::size_t r = 0; r < probs_.rows(); ++r) sum += probs_(r, p);
  return sum;
}

ValidationReport validate_fractional(const FractionalAssignment& fractional,
                                     const ProblemInstance& instance,
                                     double tolerance) {
  ValidationReport report;
  if (!fractional.matrix().same_shape(instance.n_reviewers(), instance.n_papers())) {
    report.add("dimension mismatch: fractional assignment is " +
               std::to_string(fractional.n_reviewers()) + "x" +
               std::to_string(fractional.n_papers()));
    return report;
  }
  for (int r = 0; r < instance.n_reviewers(); ++r) {
    const double sum = fractional.row_sum(r);
    if (sum > instance.reviewer_load(r) + tolerance) {
      std::ostringstream msg;
      msg << "reviewer " << r << " load " << sum << " exceeds "
          << instance.reviewer_load(r);
      report.add(msg.str());
    }
  }
  for (int p = 0; p < instance.n_papers(); ++p) {
    const double sum = fractional.col_sum(p);
    if (std::abs(sum - instance.paper_load(p)) > tolerance) {
      std::ostringstream msg;
      msg << "paper " << p << " load " << sum << " != " << instance.paper_load(p);
      report.add(msg.str());
    }
  }
  return report;
}

DeterministicAssignment::DeterministicAssignment(Matrix<std::uint8_t> assigned)
    : assigned_(std::move(assigned)) {
  for (auto v : assigned_.values()) {
    if (v > 1) throw InvalidInput("deterministic assignment entries must be 0 or 1");
  }
}

DeterministicAssignment DeterministicAssignment::from_paper_lists(
    int n_reviewers, const std::vector<std::vector<int>>& papers) {
  Matrix<std::uint8_t> m(n_reviewers, papers.size(), 0);
  for (std::size_t p = 0; p < papers.size(); ++p) {
    for (int r : papers[p]) {
      if (r < 0 || r >= n_reviewers) {
        throw InvalidInput("reviewer index " + std::to_string(r) +
                           " out of range on paper " + std::to_string(p));
      }
      if (m(r, p)) {
        throw InvalidInput("reviewer " + std::to_string(r) +
                           " listed twice on paper " + std::to_string(p));
      }
      m(r, p) = 1;
    }
  }
  return DeterministicAssignment(std::move(m));
}

std::vector<std::vector<int>> DeterministicAssignment::paper_lists() const {
  std::vector<std::vector<int>> out(assigned_.cols());
  for (std::size_t r = 0; r < assigned_.rows(); ++r) {
    for (std::size_t p = 0; p < assigned_.cols(); ++p) {
      if (assigned_(r, p)) out[p].push_back(static_cast<int>(r));
    }
  }
  return out;
}

int DeterministicAssignment::reviewer_count(int r) const {
  const auto row = assigned_.row(r);
  return static_cast<int>(std::count(row.begin(), row.end(), std::uint8_t{1}));
}

int DeterministicAssignment::paper_count(int p) const {
  int count = 0;
  for (std::size_t r = 0; r < assigned_.rows(); ++r) count += assigned_(r, p);
  return count;
}

ValidationReport validate_deterministic(const DeterministicAssignment& assignment,
                                        const ProblemInstance& instance) {
  ValidationReport report;
  if (!assignment.matrix().same_shape(instance.n_reviewers(), instance.n_papers())) {
    report.add("dimension mismatch: deterministic assignment is " +
               std::to_string(assignment.n_reviewers()) + "x" +
               std::to_string(assignment.n_papers()));
    return report;
  }
  for (int r = 0; r < instance.n_reviewers(); ++r) {
    const int count = assignment.reviewer_count(r);
    if (count > instance.reviewer_load(r)) {
      report.add("reviewer " + std::to_string(r) + " reviews " +
                 std::to_string(count) + " > " +
                 std::to_string(instance.reviewer_load(r)) + " papers");
    }
  }
  for (int p = 0; p < instance.n_papers(); ++p) {
    const int count = assignment.paper_count(p);
    if (count != instance.paper_load(p)) {
      report.add("paper " + std::to_string(p) + " has " + std::to_string(count) +
                 " reviewers, needs " + std::to_string(instance.paper_load(p)));
    }
  }
  return report;
}

double AssignmentDistribution::total_weight() const {
  double sum = 0.0;
  for (const auto& c : components_) sum += c.weight;
  return sum;
}

Matrix<double> AssignmentDistribution::marginals() const {
  if (components_.empty()) return {};
  const auto& first = components_.front().assignment;
  Matrix<double> out(first.n_reviewers(), first.n_papers(), 0.0);
  for (const auto& c : components_) {
    const auto values = c.assignment.matrix().values();
    auto acc = out.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i]) acc[i] += c.weight;
    }
  }
  return out;
}

ValidationReport validate_distribution(const AssignmentDistribution& lottery,
                                       const ProblemInstance& instance,
                                       double tolerance) {
  ValidationReport report;
  if (lottery.size() == 0) {
    report.add("empty lottery");
    return report;
  }
  for (std::size_t i = 0; i < lottery.size(); ++i) {
    const auto& c = lottery.components()[i];
    if (!(c.weight > 0.0 && c.weight <= 1.0 + tolerance)) {
      std::ostringstream msg;
      msg << "component " << i << " weight " << c.weight << " outside (0,1]";
      report.add(msg.str());
    }
    const auto sub = validate_deterministic(c.assignment, instance);
    if (!sub.ok()) {
      report.add("component " + std::to_string(i) + ": " + sub.summary());
    }
  }
  const double total = lottery.total_weight();
  if (std::abs(total - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << "weights sum to " << total;
    report.add(msg.str());
  }
  return report;
}

BadAssignmentProbabilities::BadAssignmentProbabilities(Matrix<double> probs)
    : probs_(std::move(probs)) {
  check_unit_interval(probs_, "bad-assignment probability");
}

double expected_similarity(const Matrix<double>& fractional,
                           const ProblemInstance& instance) {
  check_shape(fractional, instance, "fractional assignment");
  const auto f = fractional.values();
  const auto s = instance.similarities().values();
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) total += f[i] * s[i];
  return total;
}

double expected_similarity(const FractionalAssignment& fractional,
                           const ProblemInstance& instance) {
  return expected_similarity(fractional.matrix(), instance);
}

double stochastic_fairness(const Matrix<double>& fractional,
                           const ProblemInstance& instance) {
  check_shape(fractional, instance, "fractional assignment");
  const int n = instance.n_reviewers();
  const int d = instance.n_papers();
  double worst = std::numeric_limits<double>::infinity();
  for (int p = 0; p < d; ++p) {
    double sum = 0.0;
    for (int r = 0; r < n; ++r) sum += instance.similarity(r, p) * fractional(r, p);
    worst = std::min(worst, sum);
  }
  return worst;
}

double stochastic_fairness(const FractionalAssignment& fractional,
                           const ProblemInstance& instance) {
  return stochastic_fairness(fractional.matrix(), instance);
}

double assignment_similarity(const DeterministicAssignment& assignment,
                             const ProblemInstance& instance) {
  check_shape(assignment.matrix(), instance, "deterministic assignment");
  const auto m = assignment.matrix().values();
  const auto s = instance.similarities().values();
  double total = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i]) total += s[i];
  }
  return total;
}

double assignment_fairness(const DeterministicAssignment& assignment,
                           const ProblemInstance& instance) {
  check_shape(assignment.matrix(), instance, "deterministic assignment");
  double worst = std::numeric_limits<double>::infinity();
  for (int p = 0; p < instance.n_papers(); ++p) {
    double sum = 0.0;
    for (int r = 0; r < instance.n_reviewers(); ++r) {
      if (assignment(r, p)) sum += instance.similarity(r, p);
    }
    worst = std::min(worst, sum);
  }
  return worst;
}

long long same_subset_pair_count(const DeterministicAssignment& assignment,
                                 const ReviewerPartition& partition) {
  if (assignment.n_reviewers() != partition.n_reviewers()) {
    throw DimensionMismatch("partition covers " +
                            std::to_string(partition.n_reviewers()) +
                            " reviewers but the assignment has " +
                            std::to_string(assignment.n_reviewers()));
  }
  long long pairs = 0;
  std::vector<long long> count(partition.n_subsets());
  for (int p = 0; p < assignment.n_papers(); ++p) {
    std::fill(count.begin(), count.end(), 0);
    for (int r = 0; r < assignment.n_reviewers(); ++r) {
      if (assignment(r, p)) ++count[partition.subset_of(r)];
    }
    for (long long x : count) pairs += x * (x - 1) / 2;
  }
  return pairs;
}

}  // namespace revassign
