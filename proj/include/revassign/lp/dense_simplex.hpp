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

// General linear programs in the form
//
//   maximize  c'x   subject to  a_i'x (<=|=|>=) b_i,   0 <= x <= u,
//
// solved by a two-phase bounded-variable primal simplex on a dense tableau.
// Intended for instances of a few thousand variables at most.

#ifndef REVASSIGN_LP_DENSE_SIMPLEX_HPP_
#define REVASSIGN_LP_DENSE_SIMPLEX_HPP_

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace revassign::lp {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

class LinearProgram {
 public:
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  // Adds a variable in [0, upper] with objective coefficient `objective`.
  int add_variable(double objective, double upper = kInfinity);
  void add_row(std::vector<std::pair<int, double>> terms, RowSense sense, double rhs);

  struct Row {
    std::vector<std::pair<int, double>> terms;
    RowSense sense;
    double rhs;
  };

  int num_variables() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<double> objective_;
  std::vector<double> upper_;
  std::vector<Row> rows_;
};

struct DenseSimplexOptions {
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-7;
  long long max_iterations = 1'000'000;
};

struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  long long iterations = 0;
  // Phase-one residual for infeasible programs.
  double infeasibility = 0.0;
};

LpResult solve_dense(const LinearProgram& program, const DenseSimplexOptions& options = {});

}  // namespace revassign::lp

#endif  // REVASSIGN_LP_DENSE_SIMPLEX_HPP_
