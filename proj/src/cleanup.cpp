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

#include "cleanup.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "revassign/flow_sampler.hpp"

namespace revassign::detail {

namespace {

constexpr int kCleanupRounds = 50;

bool near_integer(double v, double tol) { return std::abs(v - std::round(v)) <= tol; }

// Moves `residual` onto the strictly fractional cells, proportionally to
// their room in the direction of the move.
void distribute(Matrix<double>& g, const std::vector<std::pair<int, int>>& cells,
                double residual) {
  double room = 0.0;
  for (auto [r, p] : cells) {
    const double v = g(r, p);
    if (v > 0.0 && v < 1.0) room += residual > 0.0 ? 1.0 - v : v;
  }
  if (room <= 0.0) return;
  const double scale = std::min(1.0, std::abs(residual) / room);
  for (auto [r, p] : cells) {
    double& v = g(r, p);
    if (!(v > 0.0 && v < 1.0)) continue;
    v += residual > 0.0 ? scale * (1.0 - v) : -scale * v;
    v = std::clamp(v, 0.0, 1.0);
  }
}

struct Group {
  std::vector<std::pair<int, int>> cells;
  double target;
};

double group_sum(const Matrix<double>& g, const Group& group) {
  double s = 0.0;
  for (auto [r, p] : group.cells) s += g(r, p);
  return s;
}

}  // namespace

Matrix<double> clean_fractional(const FractionalAssignment& fractional,
                                const ProblemInstance& instance,
                                const ReviewerPartition* partition) {
  const int n = instance.n_reviewers();
  const int d = instance.n_papers();
  Matrix<double> g = fractional.matrix();
  for (double& v : g.values()) {
    if (v <= kIntegralityTolerance) v = 0.0;
    else if (v >= 1.0 - kIntegralityTolerance) v = 1.0;
  }

  std::vector<Group> groups;
  for (int p = 0; p < d; ++p) {
    Group col{{}, static_cast<double>(instance.paper_load(p))};
    for (int r = 0; r < n; ++r) col.cells.emplace_back(r, p);
    groups.push_back(std::move(col));
  }
  if (partition != nullptr) {
    for (int i = 0; i < partition->n_subsets(); ++i) {
      for (int p = 0; p < d; ++p) {
        Group sub{{}, 0.0};
        for (int r : partition->members(i)) sub.cells.emplace_back(r, p);
        const double load = group_sum(g, sub);
        if (!near_integer(load, kLoadTolerance)) continue;
        sub.target = std::round(load);
        groups.push_back(std::move(sub));
      }
    }
  }
  for (int r = 0; r < n; ++r) {
    Group row{{}, 0.0};
    for (int p = 0; p < d; ++p) row.cells.emplace_back(r, p);
    const double load = group_sum(g, row);
    if (!near_integer(load, kLoadTolerance)) continue;
    row.target = std::round(load);
    groups.push_back(std::move(row));
  }

  for (int round = 0; round < kCleanupRounds; ++round) {
    double worst = 0.0;
    for (const auto& group : groups) {
      const double residual = group.target - group_sum(g, group);
      worst = std::max(worst, std::abs(residual));
      if (residual != 0.0) distribute(g, group.cells, residual);
    }
    if (worst <= 1e-14) break;
  }
  return g;
}

}  // namespace revassign::detail
