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

#include "revassign/flow_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cleanup.hpp"
#include "flow_walk.hpp"

namespace revassign {

namespace {

constexpr double kSnapTolerance = 1e-12;
constexpr double kStaleStep = 1e-12;

bool near_integer(double v, double tol) { return std::abs(v - std::round(v)) <= tol; }

double snap_value(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= kSnapTolerance * std::max(1.0, std::abs(v)) ? r : v;
}

}  // namespace

FlowState::FlowState(const FractionalAssignment& fractional, const ProblemInstance& instance,
                     const ReviewerPartition* partition)
    : n_(instance.n_reviewers()), d_(instance.n_papers()) {
  const ValidationReport report = validate_fractional(fractional, instance);
  if (!report.ok()) {
    if (report.summary().starts_with("dimension mismatch")) {
      throw DimensionMismatch(report.summary());
    }
    throw InvalidInput("fractional assignment violates the loads: " + report.summary());
  }
  if (partition != nullptr) {
    if (partition->n_reviewers() != n_) {
      throw DimensionMismatch("partition covers " + std::to_string(partition->n_reviewers()) +
                              " reviewers but the instance has " + std::to_string(n_));
    }
    m_ = partition->n_subsets();
    subset_of_.assign(partition->subset_indices().begin(), partition->subset_indices().end());
    for (int i = 0; i < m_; ++i) {
      members_.emplace_back(partition->members(i).begin(), partition->members(i).end());
    }
  }
  const Matrix<double> g = detail::clean_fractional(fractional, instance, partition);

  fractional_.assign(n_ + d_ + 2 + static_cast<std::size_t>(m_) * d_, {});
  const std::size_t edges = static_cast<std::size_t>(n_) * d_ + n_ + d_ +
                            static_cast<std::size_t>(m_) * d_;
  tail_.reserve(edges);
  head_.reserve(edges);
  capacity_.reserve(edges);
  flow_.reserve(edges);
  indexed_.reserve(edges);

  for (int r = 0; r < n_; ++r) {
    for (int p = 0; p < d_; ++p) {
      const int to = m_ > 0 ? hub_vertex(subset_of_[r], p) : paper_vertex(p);
      add_edge(reviewer_vertex(r), to, 1.0, g(r, p));
    }
  }
  for (int r = 0; r < n_; ++r) {
    double load = 0.0;
    for (int p = 0; p < d_; ++p) load += g(r, p);
    if (near_integer(load, kLoadTolerance)) load = std::round(load);
    add_edge(source(), reviewer_vertex(r), instance.reviewer_load(r), load);
  }
  for (int p = 0; p < d_; ++p) {
    add_edge(paper_vertex(p), sink(), instance.paper_load(p), instance.paper_load(p));
  }
  for (int i = 0; i < m_; ++i) {
    for (int p = 0; p < d_; ++p) {
      double load = 0.0;
      for (int r : members_[i]) load += g(r, p);
      if (near_integer(load, kLoadTolerance)) load = std::round(load);
      add_edge(hub_vertex(i, p), paper_vertex(p), static_cast<double>(members_[i].size()), load);
    }
  }
}

int FlowState::add_edge(int tail, int head, double capacity, double flow) {
  const int e = static_cast<int>(flow_.size());
  tail_.push_back(tail);
  head_.push_back(head);
  capacity_.push_back(capacity);
  flow_.push_back(std::clamp(snap_value(flow), 0.0, capacity));
  indexed_.push_back(0);
  if (is_fractional(e)) index_edge(e);
  return e;
}

FlowState::EdgeKind FlowState::kind(int e) const {
  const int nd = n_ * d_;
  if (e < nd) return EdgeKind::kPair;
  if (e < nd + n_) return EdgeKind::kSource;
  if (e < nd + n_ + d_) return EdgeKind::kSink;
  return EdgeKind::kGuard;
}

double FlowState::lower_bound(int e) const {
  return kind(e) == EdgeKind::kGuard ? std::floor(flow_[e]) : 0.0;
}

double FlowState::upper_bound(int e) const {
  return kind(e) == EdgeKind::kGuard ? std::ceil(flow_[e]) : capacity_[e];
}

bool FlowState::is_fractional(int e) const { return flow_[e] != std::floor(flow_[e]); }

int FlowState::first_fractional_pair_edge() const {
  const int nd = n_ * d_;
  while (pair_cursor_ < nd && !indexed_[pair_cursor_]) ++pair_cursor_;
  return pair_cursor_ < nd ? pair_cursor_ : -1;
}

void FlowState::index_edge(int e) {
  for (int v : {tail_[e], head_[e]}) {
    auto& list = fractional_[v];
    list.insert(std::lower_bound(list.begin(), list.end(), e), e);
  }
  indexed_[e] = 1;
  ++fractional_count_;
  if (e < n_ * d_) pair_cursor_ = std::min(pair_cursor_, e);
}

void FlowState::unindex_edge(int e) {
  for (int v : {tail_[e], head_[e]}) {
    auto& list = fractional_[v];
    list.erase(std::lower_bound(list.begin(), list.end(), e));
  }
  indexed_[e] = 0;
  --fractional_count_;
}

void FlowState::set_flow(int e, double value) {
  flow_[e] = std::clamp(snap_value(value), 0.0, capacity_[e]);
  const bool frac = is_fractional(e);
  if (frac && !indexed_[e]) index_edge(e);
  else if (!frac && indexed_[e]) unindex_edge(e);
}

double FlowState::subset_load(int subset, int p) const {
  double load = 0.0;
  for (int r : members_.at(subset)) load += flow_[pair_edge(r, p)];
  return load;
}

double FlowState::conservation_residual(int v) const {
  double residual = 0.0;
  if (v < n_) {
    residual = flow_[source_edge(v)];
    for (int p = 0; p < d_; ++p) residual -= flow_[pair_edge(v, p)];
  } else if (v < n_ + d_) {
    const int p = v - n_;
    if (m_ > 0) {
      for (int i = 0; i < m_; ++i) residual += flow_[guard_edge(i, p)];
    } else {
      for (int r = 0; r < n_; ++r) residual += flow_[pair_edge(r, p)];
    }
    residual -= flow_[sink_edge(p)];
  } else if (v >= n_ + d_ + 2) {
    const int hub = v - (n_ + d_ + 2);
    const int i = hub / d_;
    const int p = hub % d_;
    residual = subset_load(i, p) - flow_[guard_edge(i, p)];
  } else {
    throw std::out_of_range("conservation is not defined at s or t");
  }
  return residual;
}

DeterministicAssignment FlowState::to_assignment() const {
  Matrix<std::uint8_t> m(n_, d_, 0);
  for (int r = 0; r < n_; ++r) {
    for (int p = 0; p < d_; ++p) {
      const double f = flow_[pair_edge(r, p)];
      if (f != 0.0 && f != 1.0) {
        std::ostringstream msg;
        msg << "pair (" << r << "," << p << ") still carries fractional flow " << f;
        throw InternalError(msg.str());
      }
      m(r, p) = f == 1.0 ? 1 : 0;
    }
  }
  return DeterministicAssignment(std::move(m));
}

FlowState build_flow(const FractionalAssignment& fractional, const ProblemInstance& instance) {
  return FlowState(fractional, instance);
}

namespace detail {

CycleWalker::Result CycleWalker::walk(const FlowState& state, AlternatingCycle& cycle) {
  const int start = state.first_fractional_pair_edge();
  if (start < 0) return {Status::kNoFractionalEdge, -1, -1};
  if (static_cast<int>(position_.size()) != state.num_vertices()) {
    position_.assign(state.num_vertices(), -1);
  }
  path_vertices_.clear();
  path_edges_.clear();

  int current = state.tail(start);
  int incoming = -1;
  int next = start;
  Result result{Status::kCycle, -1, -1};
  while (true) {
    position_[current] = static_cast<int>(path_vertices_.size());
    path_vertices_.push_back(current);
    path_edges_.push_back(next);
    incoming = next;
    current = state.other_end(next, current);
    if (position_[current] >= 0) break;
    next = -1;
    for (int e : state.fractional_edges(current)) {
      if (e != incoming) {
        next = e;
        break;
      }
    }
    if (next < 0) {
      result = {Status::kDeadEnd, incoming, current};
      break;
    }
  }

  if (result.status == Status::kCycle) {
    const int from = position_[current];
    cycle.edges.clear();
    cycle.vertices.assign(path_vertices_.begin() + from, path_vertices_.end());
    bool first_forward = false;
    for (std::size_t i = from; i < path_edges_.size(); ++i) {
      const int e = path_edges_[i];
      const bool forward = state.tail(e) == path_vertices_[i];
      if (i == static_cast<std::size_t>(from)) first_forward = forward;
      cycle.edges.push_back({e, forward == first_forward});
    }
  }
  for (int v : path_vertices_) position_[v] = -1;
  return result;
}

namespace {

void repair_dead_end(FlowState& state, int edge, int vertex, SampleStats* stats) {
  const double f = state.flow(edge);
  const double target = std::round(f);
  if (std::abs(f - target) > kLoadTolerance) {
    std::ostringstream msg;
    msg << "conservation breach: vertex " << vertex << " has a single fractional edge "
        << edge << " with flow " << f;
    throw InternalError(msg.str());
  }
  state.set_flow(edge, target);
  if (stats != nullptr) ++stats->repairs;
}

}  // namespace

void round_flow(FlowState& state, RandomSource& rng, SampleStats* stats) {
  if (stats != nullptr) stats->initial_fractional_edges = state.fractional_edge_count();
  const long long limit = 4 * state.fractional_edge_count() + 64;
  CycleWalker walker;
  AlternatingCycle cycle;
  for (long long step = 0;; ++step) {
    if (step > limit) throw InternalError("rounding did not converge");
    const auto found = walker.walk(state, cycle);
    if (found.status == CycleWalker::Status::kNoFractionalEdge) break;
    if (found.status == CycleWalker::Status::kDeadEnd) {
      repair_dead_end(state, found.edge, found.vertex, stats);
      continue;
    }
    const PushOutcome outcome = push_round(state, cycle, rng);
    if (stats != nullptr) {
      if (outcome.applied) ++stats->iterations;
      else ++stats->rediscoveries;
    }
  }
  // Leftover source or guard edges can only be off by rounding.
  for (int e = 0; e < state.num_edges(); ++e) {
    if (state.is_fractional(e)) repair_dead_end(state, e, state.tail(e), stats);
  }
}

}  // namespace detail

std::optional<AlternatingCycle> find_fractional_cycle(const FlowState& state) {
  detail::CycleWalker walker;
  AlternatingCycle cycle;
  const auto found = walker.walk(state, cycle);
  switch (found.status) {
    case detail::CycleWalker::Status::kNoFractionalEdge:
      return std::nullopt;
    case detail::CycleWalker::Status::kDeadEnd: {
      std::ostringstream msg;
      msg << "no second fractional edge at vertex " << found.vertex << " (entered via edge "
          << found.edge << ", flow " << state.flow(found.edge) << ")";
      throw InternalError(msg.str());
    }
    case detail::CycleWalker::Status::kCycle:
      break;
  }
  return cycle;
}

PushOutcome push_round(FlowState& state, const AlternatingCycle& cycle, RandomSource& rng) {
  PushOutcome out;
  double alpha = std::numeric_limits<double>::infinity();
  double beta = alpha;
  bool stale = cycle.edges.empty();
  for (const auto& ce : cycle.edges) {
    if (!state.is_fractional(ce.edge)) stale = true;
    const double f = state.flow(ce.edge);
    const double down = f - state.lower_bound(ce.edge);
    const double up = state.upper_bound(ce.edge) - f;
    alpha = std::min(alpha, ce.in_a ? down : up);
    beta = std::min(beta, ce.in_a ? up : down);
  }
  out.alpha = alpha;
  out.beta = beta;
  if (stale || !(alpha > kStaleStep) || !(beta > kStaleStep)) {
    for (const auto& ce : cycle.edges) {
      const double f = state.flow(ce.edge);
      const double lo = state.lower_bound(ce.edge);
      const double hi = state.upper_bound(ce.edge);
      if (f - lo <= kStaleStep) state.set_flow(ce.edge, lo);
      else if (hi - f <= kStaleStep) state.set_flow(ce.edge, hi);
    }
    return out;
  }

  out.decreased_a = rng.bernoulli(beta / (alpha + beta));
  const double delta_a = out.decreased_a ? -alpha : beta;
  // Bounds must be read before any flow changes (guards move with flow).
  std::vector<std::pair<int, double>> updates;
  updates.reserve(cycle.edges.size());
  for (const auto& ce : cycle.edges) {
    const double f = state.flow(ce.edge);
    const double lo = state.lower_bound(ce.edge);
    const double hi = state.upper_bound(ce.edge);
    double next = f + (ce.in_a ? delta_a : -delta_a);
    next = std::clamp(next, lo, hi);
    if (next - lo <= kSnapTolerance) next = lo;
    else if (hi - next <= kSnapTolerance) next = hi;
    updates.emplace_back(ce.edge, next);
  }
  for (auto [e, v] : updates) state.set_flow(e, v);
  out.applied = true;
  return out;
}

DeterministicAssignment sample(const FractionalAssignment& fractional,
                               const ProblemInstance& instance, RandomSource& rng,
                               SampleStats* stats) {
  FlowState state(fractional, instance);
  detail::round_flow(state, rng, stats);
  DeterministicAssignment m = state.to_assignment();
  const auto report = validate_deterministic(m, instance);
  if (!report.ok()) throw InternalError("sampled assignment breaks the loads: " + report.summary());
  return m;
}

}  // namespace revassign
