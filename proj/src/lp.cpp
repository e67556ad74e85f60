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

#include "revassign/lp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "revassign/lp/dense_simplex.hpp"
#include "revassign/lp/network_simplex.hpp"

namespace revassign {

namespace {

struct PartitionConstraint {
  const ReviewerPartition* partition;
  double subset_cap;
};

// Optional rows beyond the load constraints, used by the dense engine only.
struct DenseExtras {
  bool max_min = false;
  const BadAssignmentProbabilities* bad = nullptr;
  double mu = 0.0;
};

void check_options(const SolveOptions& options) {
  if (!(options.feasibility_tolerance > 0.0) || !(options.optimality_tolerance > 0.0)) {
    throw InvalidInput("solver tolerances must be positive");
  }
}

template <typename M>
void check_shape(const M& m, const ProblemInstance& instance, const char* what) {
  if (m.n_reviewers() != instance.n_reviewers() || m.n_papers() != instance.n_papers()) {
    std::ostringstream msg;
    msg << what << " is " << m.n_reviewers() << "x" << m.n_papers()
        << " but the instance is " << instance.n_reviewers() << "x"
        << instance.n_papers();
    throw DimensionMismatch(msg.str());
  }
}

// Effective upper bound min(1, Q) per pair.
Matrix<double> upper_bounds(const ProblemInstance& instance, const ProbabilityCap& caps) {
  check_shape(caps, instance, "probability cap");
  Matrix<double> upper(instance.n_reviewers(), instance.n_papers());
  for (int r = 0; r < instance.n_reviewers(); ++r) {
    for (int p = 0; p < instance.n_papers(); ++p) upper(r, p) = std::min(1.0, caps(r, p));
  }
  return upper;
}

void check_partition(const ReviewerPartition& partition, const ProblemInstance& instance,
                     double subset_cap) {
  if (partition.n_reviewers() != instance.n_reviewers()) {
    throw DimensionMismatch("partition covers " + std::to_string(partition.n_reviewers()) +
                            " reviewers but the instance has " +
                            std::to_string(instance.n_reviewers()));
  }
  if (!(subset_cap >= 1.0) || !std::isfinite(subset_cap)) {
    std::ostringstream msg;
    msg << "subset cap " << subset_cap << " must be a finite value >= 1";
    throw InvalidInput(msg.str());
  }
}

// Cheap necessary condition: each paper can collect its load under the caps.
void precheck_papers(const Matrix<double>& upper, const ProblemInstance& instance,
                     const PartitionConstraint* constraint, double tolerance) {
  const int n = instance.n_reviewers();
  for (int p = 0; p < instance.n_papers(); ++p) {
    double reachable = 0.0;
    if (constraint == nullptr) {
      for (int r = 0; r < n; ++r) reachable += upper(r, p);
    } else {
      const auto& partition = *constraint->partition;
      for (int i = 0; i < partition.n_subsets(); ++i) {
        double subset = 0.0;
        for (int r : partition.members(i)) subset += upper(r, p);
        reachable += std::min(subset, constraint->subset_cap);
      }
    }
    if (reachable < instance.paper_load(p) - tolerance) {
      std::ostringstream msg;
      msg << "infeasible: paper " << p << " can receive at most " << reachable
          << " expected reviewers under the caps but needs " << instance.paper_load(p);
      throw Infeasible(msg.str());
    }
  }
}

Matrix<double> solve_by_flow(const ProblemInstance& instance, const Matrix<double>& upper,
                             const PartitionConstraint* constraint,
                             const SolveOptions& options) {
  const int n = instance.n_reviewers();
  const int d = instance.n_papers();
  lp::NetworkSimplex ns;
  const int source = ns.add_node(static_cast<double>(instance.total_paper_demand()));
  const int first_reviewer = ns.num_nodes();
  for (int r = 0; r < n; ++r) ns.add_node(0.0);
  const int first_paper = ns.num_nodes();
  for (int p = 0; p < d; ++p) ns.add_node(-static_cast<double>(instance.paper_load(p)));
  for (int r = 0; r < n; ++r) {
    ns.add_arc(source, first_reviewer + r, instance.reviewer_load(r), 0.0);
  }

  // Pair arcs, indexed r * d + p; -1 when the pair is capped at zero.
  std::vector<int> pair_arc(static_cast<std::size_t>(n) * d, -1);
  if (constraint == nullptr) {
    for (int r = 0; r < n; ++r) {
      for (int p = 0; p < d; ++p) {
        if (upper(r, p) <= 0.0) continue;
        pair_arc[static_cast<std::size_t>(r) * d + p] =
            ns.add_arc(first_reviewer + r, first_paper + p, upper(r, p),
                       -instance.similarity(r, p));
      }
    }
  } else {
    const auto& partition = *constraint->partition;
    for (int i = 0; i < partition.n_subsets(); ++i) {
      for (int p = 0; p < d; ++p) {
        const int hub = ns.add_node(0.0);
        ns.add_arc(hub, first_paper + p, constraint->subset_cap, 0.0);
        for (int r : partition.members(i)) {
          if (upper(r, p) <= 0.0) continue;
          pair_arc[static_cast<std::size_t>(r) * d + p] =
              ns.add_arc(first_reviewer + r, hub, upper(r, p), -instance.similarity(r, p));
        }
      }
    }
  }

  const auto status = ns.run(options.max_iterations);
  if (status == lp::NetworkSimplex::Status::kIterationLimit) {
    throw InternalError("network simplex hit the pivot limit");
  }
  if (status == lp::NetworkSimplex::Status::kInfeasible) {
    std::ostringstream msg;
    msg << "infeasible: no assignment satisfies the loads and caps";
    const int node = ns.unrouted_node();
    if (node >= first_paper && node < first_paper + d) {
      msg << " (paper " << node - first_paper << " cannot be covered)";
    }
    throw Infeasible(msg.str());
  }

  Matrix<double> f(n, d, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < d; ++p) {
      const int a = pair_arc[static_cast<std::size_t>(r) * d + p];
      if (a >= 0) f(r, p) = std::clamp(ns.flow(a), 0.0, upper(r, p));
    }
  }
  return f;
}

struct DenseOutcome {
  Matrix<double> f;
  double extra_value = 0.0;  // value of the max-min variable, if any
};

DenseOutcome solve_by_simplex(const ProblemInstance& instance, const Matrix<double>& upper,
                              const PartitionConstraint* constraint,
                              const DenseExtras& extras, const SolveOptions& options) {
  const int n = instance.n_reviewers();
  const int d = instance.n_papers();
  lp::LinearProgram program;
  std::vector<int> var(static_cast<std::size_t>(n) * d, -1);
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < d; ++p) {
      if (upper(r, p) <= 0.0) continue;
      const double objective = extras.max_min ? 0.0 : instance.similarity(r, p);
      var[static_cast<std::size_t>(r) * d + p] = program.add_variable(objective, upper(r, p));
    }
  }
  auto index = [&](int r, int p) { return var[static_cast<std::size_t>(r) * d + p]; };
  const int x = extras.max_min ? program.add_variable(1.0) : -1;

  for (int r = 0; r < n; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int p = 0; p < d; ++p) {
      if (index(r, p) >= 0) terms.emplace_back(index(r, p), 1.0);
    }
    program.add_row(std::move(terms), lp::RowSense::kLessEqual, instance.reviewer_load(r));
  }
  for (int p = 0; p < d; ++p) {
    std::vector<std::pair<int, double>> terms;
    for (int r = 0; r < n; ++r) {
      if (index(r, p) >= 0) terms.emplace_back(index(r, p), 1.0);
    }
    program.add_row(std::move(terms), lp::RowSense::kEqual, instance.paper_load(p));
  }
  if (constraint != nullptr) {
    const auto& partition = *constraint->partition;
    for (int i = 0; i < partition.n_subsets(); ++i) {
      if (static_cast<double>(partition.members(i).size()) <= constraint->subset_cap) continue;
      for (int p = 0; p < d; ++p) {
        std::vector<std::pair<int, double>> terms;
        for (int r : partition.members(i)) {
          if (index(r, p) >= 0) terms.emplace_back(index(r, p), 1.0);
        }
        program.add_row(std::move(terms), lp::RowSense::kLessEqual, constraint->subset_cap);
      }
    }
  }
  if (extras.max_min) {
    for (int p = 0; p < d; ++p) {
      std::vector<std::pair<int, double>> terms{{x, 1.0}};
      for (int r = 0; r < n; ++r) {
        if (index(r, p) >= 0) terms.emplace_back(index(r, p), -instance.similarity(r, p));
      }
      program.add_row(std::move(terms), lp::RowSense::kLessEqual, 0.0);
    }
  }
  if (extras.bad != nullptr) {
    for (int p = 0; p < d; ++p) {
      std::vector<std::pair<int, double>> terms;
      for (int r = 0; r < n; ++r) {
        const double w = (*extras.bad)(r, p);
        if (index(r, p) >= 0 && w > 0.0) terms.emplace_back(index(r, p), w);
      }
      if (!terms.empty()) program.add_row(std::move(terms), lp::RowSense::kLessEqual, extras.mu);
    }
  }

  lp::DenseSimplexOptions dense_options;
  dense_options.feasibility_tolerance = options.feasibility_tolerance;
  dense_options.optimality_tolerance = options.optimality_tolerance;
  if (options.max_iterations >= 0) dense_options.max_iterations = options.max_iterations;
  const lp::LpResult result = lp::solve_dense(program, dense_options);
  switch (result.status) {
    case lp::LpResult::Status::kOptimal:
      break;
    case lp::LpResult::Status::kInfeasible: {
      std::ostringstream msg;
      msg << "infeasible: no assignment satisfies the constraints (phase-one residual "
          << result.infeasibility << ")";
      throw Infeasible(msg.str());
    }
    case lp::LpResult::Status::kUnbounded:
      throw InternalError("simplex reported an unbounded bounded program");
    case lp::LpResult::Status::kIterationLimit:
      throw InternalError("simplex hit the iteration limit");
  }

  DenseOutcome out{Matrix<double>(n, d, 0.0)};
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < d; ++p) {
      if (index(r, p) >= 0) out.f(r, p) = result.x[index(r, p)];
    }
  }
  if (x >= 0) out.extra_value = result.x[x];
  return out;
}

Matrix<double> solve_load_program(const ProblemInstance& instance, const Matrix<double>& upper,
                                  const PartitionConstraint* constraint,
                                  const SolveOptions& options) {
  precheck_papers(upper, instance, constraint, options.feasibility_tolerance);
  if (options.engine == LpEngine::kDense) {
    return solve_by_simplex(instance, upper, constraint, {}, options).f;
  }
  return solve_by_flow(instance, upper, constraint, options);
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream msg;
    msg << "lambda " << lambda << " outside [0,1]";
    throw InvalidInput(msg.str());
  }
}

void require_dense(const SolveOptions& options, const char* what) {
  if (options.engine == LpEngine::kNetwork) {
    throw InvalidInput(std::string(what) + " is not a flow program; use the dense engine");
  }
}

}  // namespace

FractionalAssignment solve_pairwise(const ProblemInstance& instance,
                                    const ProbabilityCap& caps,
                                    const SolveOptions& options) {
  check_options(options);
  require_valid(instance);
  const Matrix<double> upper = upper_bounds(instance, caps);
  return FractionalAssignment(solve_load_program(instance, upper, nullptr, options));
}

FractionalAssignment solve_partition(const ProblemInstance& instance,
                                     const ProbabilityCap& caps,
                                     const ReviewerPartition& partition,
                                     double subset_cap,
                                     const SolveOptions& options) {
  check_options(options);
  require_valid(instance);
  check_partition(partition, instance, subset_cap);
  const Matrix<double> upper = upper_bounds(instance, caps);
  const PartitionConstraint constraint{&partition, subset_cap};
  return FractionalAssignment(solve_load_program(instance, upper, &constraint, options));
}

FairSolution solve_fair(const ProblemInstance& instance, const ProbabilityCap& caps,
                        const SolveOptions& options) {
  check_options(options);
  require_dense(options, "the max-min program");
  require_valid(instance);
  const Matrix<double> upper = upper_bounds(instance, caps);
  precheck_papers(upper, instance, nullptr, options.feasibility_tolerance);
  DenseExtras extras;
  extras.max_min = true;
  DenseOutcome out = solve_by_simplex(instance, upper, nullptr, extras, options);
  return FairSolution{FractionalAssignment(std::move(out.f)), out.extra_value};
}

ProbabilityCap bad_assignment_caps(const BadAssignmentProbabilities& bad, double lambda) {
  check_lambda(lambda);
  Matrix<double> q(bad.n_reviewers(), bad.n_papers(), 1.0);
  for (int r = 0; r < bad.n_reviewers(); ++r) {
    for (int p = 0; p < bad.n_papers(); ++p) {
      const double w = bad(r, p);
      if (w > 0.0) q(r, p) = std::min(lambda / w, 1.0);
    }
  }
  return ProbabilityCap(std::move(q));
}

FractionalAssignment solve_bad_pairwise(const ProblemInstance& instance,
                                        const BadAssignmentProbabilities& bad,
                                        double lambda, const SolveOptions& options) {
  check_shape(bad, instance, "bad-assignment probabilities");
  return solve_pairwise(instance, bad_assignment_caps(bad, lambda), options);
}

FractionalAssignment solve_bad_partition(const ProblemInstance& instance,
                                         const BadAssignmentProbabilities& bad,
                                         double lambda,
                                         const ReviewerPartition& partition,
                                         const SolveOptions& options) {
  check_shape(bad, instance, "bad-assignment probabilities");
  return solve_partition(instance, bad_assignment_caps(bad, lambda), partition, 1.0, options);
}

FractionalAssignment solve_bad_expectation(const ProblemInstance& instance,
                                           const BadAssignmentProbabilities& bad,
                                           double lambda, double mu,
                                           const SolveOptions& options) {
  check_options(options);
  require_dense(options, "the expected-bad-reviewer program");
  require_valid(instance);
  check_shape(bad, instance, "bad-assignment probabilities");
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    std::ostringstream msg;
    msg << "mu " << mu << " must be a finite value >= 0";
    throw InvalidInput(msg.str());
  }
  const Matrix<double> upper = upper_bounds(instance, bad_assignment_caps(bad, lambda));
  precheck_papers(upper, instance, nullptr, options.feasibility_tolerance);
  DenseExtras extras;
  extras.bad = &bad;
  extras.mu = mu;
  return FractionalAssignment(solve_by_simplex(instance, upper, nullptr, extras, options).f);
}

}  // namespace revassign
