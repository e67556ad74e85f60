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

#include "revassign/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "cleanup.hpp"
#include "revassign/max_flow.hpp"

namespace revassign {

namespace {

constexpr double kStepSnap = 1e-9;

bool strictly_fractional(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

PairList max_capacitated_matching(const PairList& pairs, std::span<const int> reviewer_capacity,
                                  std::span<const int> paper_capacity) {
  const int n = static_cast<int>(reviewer_capacity.size());
  const int d = static_cast<int>(paper_capacity.size());
  MaxFlow graph(n + d + 2);
  const int source = n + d;
  const int sink = n + d + 1;
  for (int r = 0; r < n; ++r) {
    if (reviewer_capacity[r] < 0) throw InvalidInput("negative reviewer capacity");
    graph.add_edge(source, r, reviewer_capacity[r]);
  }
  for (int p = 0; p < d; ++p) {
    if (paper_capacity[p] < 0) throw InvalidInput("negative paper capacity");
    graph.add_edge(n + p, sink, paper_capacity[p]);
  }
  std::vector<int> edge_of(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [r, p] = pairs[i];
    if (r < 0 || r >= n || p < 0 || p >= d) throw InvalidInput("matching pair out of range");
    edge_of[i] = graph.add_edge(r, n + p, 1);
  }
  graph.run(source, sink);
  PairList matching;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (graph.flow(edge_of[i]) > 0) matching.push_back(pairs[i]);
  }
  return matching;
}

DecomposeStep decompose_step(const Matrix<double>& fractional,
                             std::span<const int> reviewer_load,
                             std::span<const int> paper_load) {
  const int n = static_cast<int>(fractional.rows());
  const int d = static_cast<int>(fractional.cols());
  if (static_cast<int>(reviewer_load.size()) != n || static_cast<int>(paper_load.size()) != d) {
    throw DimensionMismatch("load vectors do not match the matrix shape");
  }
  DecomposeStep step{Matrix<std::uint8_t>(n, d, 0), 1.0, {}};
  std::vector<int> row_need(reviewer_load.begin(), reviewer_load.end());
  std::vector<int> col_need(paper_load.begin(), paper_load.end());
  PairList open;
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < d; ++p) {
      const double v = fractional(r, p);
      if (v == 1.0) {
        step.m0(r, p) = 1;
        --row_need[r];
        --col_need[p];
      } else if (strictly_fractional(v)) {
        open.emplace_back(r, p);
      }
    }
  }
  if (open.empty()) return step;

  long long needed = 0;
  for (int p = 0; p < d; ++p) {
    if (col_need[p] < 0) throw InvalidInput("paper " + std::to_string(p) + " is over-assigned");
    needed += col_need[p];
  }
  long long offered = 0;
  for (int r = 0; r < n; ++r) {
    if (row_need[r] < 0) throw InvalidInput("reviewer " + std::to_string(r) + " is over-assigned");
    offered += row_need[r];
  }
  if (offered != needed) {
    throw InvalidInput("reviewers need " + std::to_string(offered) +
                       " more assignments but papers need " + std::to_string(needed) +
                       "; the loads are not met with equality");
  }
  const PairList matching = max_capacitated_matching(open, row_need, col_need);
  if (static_cast<long long>(matching.size()) != needed) {
    std::ostringstream msg;
    msg << "fractional entries admit a matching of size " << matching.size() << " but "
        << needed << " are needed; the loads are not met with equality";
    throw InvalidInput(msg.str());
  }

  Matrix<std::uint8_t> in_matching(n, d, 0);
  for (auto [r, p] : matching) in_matching(r, p) = 1;
  double alpha0 = 1.0;
  for (auto [r, p] : open) {
    const double v = fractional(r, p);
    alpha0 = std::min(alpha0, in_matching(r, p) ? v : 1.0 - v);
  }
  for (auto [r, p] : matching) step.m0(r, p) = 1;
  step.alpha0 = alpha0;

  step.remainder = Matrix<double>(n, d, 0.0);
  const double scale = 1.0 - alpha0;
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < d; ++p) {
      const double v = fractional(r, p);
      double next = (v - alpha0 * step.m0(r, p)) / scale;
      if (std::abs(next) <= kStepSnap) next = 0.0;
      else if (std::abs(next - 1.0) <= kStepSnap) next = 1.0;
      step.remainder(r, p) = std::clamp(next, 0.0, 1.0);
    }
  }
  return step;
}

AssignmentDistribution decompose(const FractionalAssignment& fractional,
                                 const ProblemInstance& instance, DecomposeStats* stats) {
  const ValidationReport report = validate_fractional(fractional, instance);
  if (!report.ok()) {
    if (report.summary().starts_with("dimension mismatch")) {
      throw DimensionMismatch(report.summary());
    }
    throw InvalidInput("fractional assignment violates the loads: " + report.summary());
  }
  const int n = instance.n_reviewers();
  const int d = instance.n_papers();
  const Matrix<double> g = detail::clean_fractional(fractional, instance, nullptr);

  // Reviewer r is asked for exactly ceil(row sum); the missing fraction is
  // spread over shared unit-demand dummy papers, filled in reviewer order.
  std::vector<int> row_load(n);
  std::vector<double> spare(n);
  double total_spare = 0.0;
  for (int r = 0; r < n; ++r) {
    double sum = 0.0;
    for (int p = 0; p < d; ++p) sum += g(r, p);
    const double rounded = std::round(sum);
    if (std::abs(sum - rounded) <= kLoadTolerance) {
      row_load[r] = static_cast<int>(rounded);
      spare[r] = 0.0;
    } else {
      row_load[r] = static_cast<int>(std::ceil(sum));
      spare[r] = row_load[r] - sum;
    }
    total_spare += spare[r];
  }
  const int dummies = static_cast<int>(std::llround(total_spare));
  Matrix<double> padded(n, d + dummies, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < d; ++p) padded(r, p) = g(r, p);
  }
  int column = 0;
  double column_fill = 0.0;
  for (int r = 0; r < n && column < dummies; ++r) {
    double rest = spare[r];
    while (rest > kStepSnap && column < dummies) {
      const double take = std::min(rest, 1.0 - column_fill);
      padded(r, d + column) += take;
      rest -= take;
      column_fill += take;
      if (column_fill >= 1.0 - kStepSnap) {
        ++column;
        column_fill = 0.0;
      }
    }
  }
  for (double& v : padded.values()) {
    if (v <= kStepSnap) v = 0.0;
    else if (v >= 1.0 - kStepSnap) v = 1.0;
  }
  std::vector<int> col_load(instance.paper_loads().begin(), instance.paper_loads().end());
  col_load.resize(d + dummies, 1);

  if (stats != nullptr) {
    *stats = {};
    stats->dummy_papers = dummies;
    for (int r = 0; r < n; ++r) {
      for (int p = 0; p < d + dummies; ++p) {
        if (!strictly_fractional(padded(r, p))) continue;
        ++stats->padded_fractional_entries;
        if (p < d) ++stats->initial_fractional_entries;
      }
    }
  }

  std::vector<LotteryComponent> components;
  std::map<std::vector<std::uint8_t>, std::size_t> seen;
  auto emit = [&](const Matrix<std::uint8_t>& m, double weight) {
    if (!(weight > 0.0)) return;
    Matrix<std::uint8_t> stripped(n, d, 0);
    for (int r = 0; r < n; ++r) {
      for (int p = 0; p < d; ++p) stripped(r, p) = m(r, p);
    }
    std::vector<std::uint8_t> key(stripped.values().begin(), stripped.values().end());
    const auto [it, inserted] = seen.emplace(std::move(key), components.size());
    if (inserted) {
      components.push_back({weight, DeterministicAssignment(std::move(stripped))});
    } else {
      components[it->second].weight += weight;
    }
  };

  Matrix<double> current = std::move(padded);
  double remaining = 1.0;
  const long long step_limit = static_cast<long long>(n) * (d + dummies) + 2;
  for (long long steps = 0;; ++steps) {
    if (steps > step_limit) throw InternalError("decomposition did not terminate");
    DecomposeStep step = decompose_step(current, row_load, col_load);
    if (stats != nullptr) ++stats->steps;
    if (step.alpha0 >= 1.0) {
      emit(step.m0, remaining);
      break;
    }
    emit(step.m0, remaining * step.alpha0);
    remaining *= 1.0 - step.alpha0;
    current = std::move(step.remainder);
  }

  AssignmentDistribution lottery(std::move(components));
  const ValidationReport check = validate_distribution(lottery, instance);
  if (!check.ok()) {
    throw InternalError("decomposition produced an invalid lottery: " + check.summary());
  }
  return lottery;
}

}  // namespace revassign
