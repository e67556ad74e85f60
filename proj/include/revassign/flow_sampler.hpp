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

// Dependent randomized rounding of a fractional assignment.
//
// The assignment is viewed as a flow s -> reviewer -> paper -> t with
// capacities k_r, 1 and l_p. While some edge carries fractional flow, a
// cycle of fractional edges (ignoring direction) is found and flow is pushed
// around it in one of the two directions, chosen so that every edge keeps
// its expected flow. Each push makes at least one edge integral. The final
// integral flow is a deterministic assignment M with P[M_rp = 1] = F_rp.

#ifndef REVASSIGN_FLOW_SAMPLER_HPP_
#define REVASSIGN_FLOW_SAMPLER_HPP_

#include <optional>
#include <span>
#include <vector>

#include "revassign/model.hpp"
#include "revassign/random.hpp"

namespace revassign {

// Entries of F within this distance of 0 or 1 are treated as integral.
inline constexpr double kIntegralityTolerance = 1e-7;

// Flow network for the sampler. Vertices: reviewers 0..n-1, papers
// n..n+d-1, then s and t. With a partition, one hub vertex per
// (subset, paper) sits between the subset's reviewers and the paper.
//
// Edge ids: pair edge (r,p) is r*d+p, s->r is n*d+r, p->t is n*d+n+p and
// the guard edge hub(I,p)->p is n*d+n+d+I*d+p.
class FlowState {
 public:
  enum class EdgeKind { kPair, kSource, kSink, kGuard };

  // Cleans LP noise in F (snapping, exact column sums) and loads the flow.
  // Throws InvalidInput when F violates the loads beyond kLoadTolerance.
  FlowState(const FractionalAssignment& fractional, const ProblemInstance& instance,
            const ReviewerPartition* partition = nullptr);

  int n_reviewers() const { return n_; }
  int n_papers() const { return d_; }
  int n_subsets() const { return m_; }
  bool partitioned() const { return m_ > 0; }

  int num_vertices() const { return static_cast<int>(fractional_.size()); }
  int num_edges() const { return static_cast<int>(flow_.size()); }
  int reviewer_vertex(int r) const { return r; }
  int paper_vertex(int p) const { return n_ + p; }
  int source() const { return n_ + d_; }
  int sink() const { return n_ + d_ + 1; }
  int hub_vertex(int subset, int p) const { return n_ + d_ + 2 + subset * d_ + p; }

  int pair_edge(int r, int p) const { return r * d_ + p; }
  int source_edge(int r) const { return n_ * d_ + r; }
  int sink_edge(int p) const { return n_ * d_ + n_ + p; }
  int guard_edge(int subset, int p) const { return n_ * d_ + n_ + d_ + subset * d_ + p; }

  EdgeKind kind(int e) const;
  int tail(int e) const { return tail_[e]; }
  int head(int e) const { return head_[e]; }
  int other_end(int e, int v) const { return tail_[e] == v ? head_[e] : tail_[e]; }
  double capacity(int e) const { return capacity_[e]; }
  double flow(int e) const { return flow_[e]; }
  // Range the flow may move in while the edge stays in a cycle: [0, h] for
  // ordinary edges, [floor(f), ceil(f)] for guard edges.
  double lower_bound(int e) const;
  double upper_bound(int e) const;
  bool is_fractional(int e) const;

  // Fractional edges incident to v, in increasing id order.
  std::span<const int> fractional_edges(int v) const { return fractional_[v]; }
  long long fractional_edge_count() const { return fractional_count_; }
  // Lowest-id fractional pair edge, or -1.
  int first_fractional_pair_edge() const;

  // Inflow minus outflow at an internal vertex.
  double conservation_residual(int v) const;

  // Current load sum_{r in I} f(r,p), recomputed from the pair edges.
  double subset_load(int subset, int p) const;
  int subset_of(int r) const { return subset_of_.empty() ? r : subset_of_[r]; }

  // Sets an edge's flow, snapping values within rounding of an integer and
  // keeping the fractional-edge index current.
  void set_flow(int e, double value);

  // 0/1 pair flows as an assignment. Throws InternalError if any pair edge
  // is still fractional.
  DeterministicAssignment to_assignment() const;

 private:
  int add_edge(int tail, int head, double capacity, double flow);
  void index_edge(int e);
  void unindex_edge(int e);

  int n_ = 0, d_ = 0, m_ = 0;
  std::vector<int> subset_of_;
  std::vector<std::vector<int>> members_;
  std::vector<int> tail_, head_;
  std::vector<double> capacity_, flow_;
  std::vector<char> indexed_;
  std::vector<std::vector<int>> fractional_;
  long long fractional_count_ = 0;
  mutable int pair_cursor_ = 0;
};

FlowState build_flow(const FractionalAssignment& fractional, const ProblemInstance& instance);

struct CycleEdge {
  int edge;
  // True when the edge is traversed in the same sense (with or against
  // its direction) as the first edge of the cycle.
  bool in_a;
};

struct AlternatingCycle {
  std::vector<CycleEdge> edges;
  // vertices[i] is the vertex edges[i] leaves from; the walk closes at
  // vertices[0].
  std::vector<int> vertices;
};

// Walks from the lowest fractional pair edge, always continuing along the
// lowest-id fractional edge other than the one just used, until a vertex
// repeats. Returns nullopt when no fractional pair edge remains. Throws
// InternalError when the walk reaches a vertex without a second fractional
// edge.
std::optional<AlternatingCycle> find_fractional_cycle(const FlowState& state);

struct PushOutcome {
  double alpha = 0.0;
  double beta = 0.0;
  // True if the A-decreasing rounding was applied.
  bool decreased_a = false;
  // False when alpha or beta had collapsed; the cycle must be re-found.
  bool applied = false;
};

// One randomized push: with probability beta/(alpha+beta) subtract alpha on
// A and add it on B, otherwise add beta on A and subtract it on B.
PushOutcome push_round(FlowState& state, const AlternatingCycle& cycle, RandomSource& rng);

struct SampleStats {
  long long initial_fractional_edges = 0;
  long long iterations = 0;
  long long rediscoveries = 0;
  long long repairs = 0;
};

DeterministicAssignment sample(const FractionalAssignment& fractional,
                               const ProblemInstance& instance, RandomSource& rng,
                               SampleStats* stats = nullptr);

namespace detail {

// Runs push rounds on `state` until no pair edge is fractional. Tiny
// conservation defects left by floating point are repaired by snapping.
void round_flow(FlowState& state, RandomSource& rng, SampleStats* stats);

}  // namespace detail

}  // namespace revassign

#endif  // REVASSIGN_FLOW_SAMPLER_HPP_
