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

#include "revassign/lp/dense_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace revassign::lp {

int LinearProgram::add_variable(double objective, double upper) {
  if (!(upper >= 0.0)) throw std::invalid_argument("variable upper bound must be >= 0");
  objective_.push_back(objective);
  upper_.push_back(upper);
  return num_variables() - 1;
}

void LinearProgram::add_row(std::vector<std::pair<int, double>> terms, RowSense sense,
                            double rhs) {
  for (const auto& [var, coef] : terms) {
    if (var < 0 || var >= num_variables()) {
      throw std::out_of_range("row references unknown variable");
    }
    (void)coef;
  }
  rows_.push_back({std::move(terms), sense, rhs});
}

namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr int kDegenerateStreakForBland = 50;

// Bounded-variable tableau. Column layout: structurals, slacks, artificials.
class Tableau {
 public:
  Tableau(const LinearProgram& program, const DenseSimplexOptions& options)
      : options_(options) {
    const int m = program.num_rows();
    const int n = program.num_variables();
    int slacks = 0;
    for (const auto& row : program.rows()) {
      if (row.sense != RowSense::kEqual) ++slacks;
    }
    num_structural_ = n;
    first_artificial_ = n + slacks;
    cols_ = first_artificial_ + m;
    rows_ = m;
    table_.assign(static_cast<std::size_t>(rows_) * cols_, 0.0);
    upper_.assign(cols_, LinearProgram::kInfinity);
    at_upper_.assign(cols_, 0);
    basic_row_.assign(cols_, -1);
    basis_.assign(rows_, -1);
    beta_.assign(rows_, 0.0);
    for (int j = 0; j < n; ++j) upper_[j] = program.upper()[j];

    int slack = n;
    for (int i = 0; i < m; ++i) {
      const auto& row = program.rows()[i];
      double* t = &table_[static_cast<std::size_t>(i) * cols_];
      for (const auto& [var, coef] : row.terms) t[var] += coef;
      int slack_col = -1;
      if (row.sense == RowSense::kLessEqual) {
        slack_col = slack++;
        t[slack_col] = 1.0;
      } else if (row.sense == RowSense::kGreaterEqual) {
        slack_col = slack++;
        t[slack_col] = -1.0;
      }
      double rhs = row.rhs;
      if (rhs < 0.0) {
        for (int j = 0; j < first_artificial_; ++j) t[j] = -t[j];
        rhs = -rhs;
      }
      const int art = first_artificial_ + i;
      t[art] = 1.0;
      beta_[i] = rhs;
      if (slack_col >= 0 && t[slack_col] == 1.0) {
        basis_[i] = slack_col;
        upper_[art] = 0.0;  // never needed
      } else {
        basis_[i] = art;
      }
      basic_row_[basis_[i]] = i;
    }
  }

  LpResult solve(const LinearProgram& program) {
    LpResult result;
    // Phase one: maximize -sum(artificials).
    std::vector<double> phase_one(cols_, 0.0);
    bool needs_phase_one = false;
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] >= first_artificial_) needs_phase_one = true;
    }
    for (int j = first_artificial_; j < cols_; ++j) phase_one[j] = -1.0;
    if (needs_phase_one) {
      const auto status = optimize(phase_one, result.iterations);
      if (status == LpResult::Status::kIterationLimit) {
        result.status = status;
        return result;
      }
      double residual = 0.0;
      double scale = 1.0;
      for (const auto& row : program.rows()) scale = std::max(scale, std::abs(row.rhs));
      for (int i = 0; i < rows_; ++i) {
        if (basis_[i] >= first_artificial_) residual += beta_[i];
      }
      result.infeasibility = residual;
      if (residual > options_.feasibility_tolerance * scale) {
        result.status = LpResult::Status::kInfeasible;
        return result;
      }
    }
    for (int j = first_artificial_; j < cols_; ++j) upper_[j] = 0.0;
    drive_out_artificials();

    std::vector<double> objective(cols_, 0.0);
    for (int j = 0; j < num_structural_; ++j) objective[j] = program.objective()[j];
    result.status = optimize(objective, result.iterations);
    result.x.assign(num_structural_, 0.0);
    for (int j = 0; j < num_structural_; ++j) {
      double v = value(j);
      v = std::clamp(v, 0.0, upper_[j]);
      result.x[j] = v;
      result.objective += program.objective()[j] * v;
    }
    return result;
  }

 private:
  double& at(int i, int j) { return table_[static_cast<std::size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return table_[static_cast<std::size_t>(i) * cols_ + j]; }

  double value(int j) const {
    if (basic_row_[j] >= 0) return beta_[basic_row_[j]];
    return at_upper_[j] ? upper_[j] : 0.0;
  }

  void compute_reduced_costs(const std::vector<double>& c) {
    reduced_.assign(c.begin(), c.end());
    for (int i = 0; i < rows_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* t = &table_[static_cast<std::size_t>(i) * cols_];
      for (int j = 0; j < cols_; ++j) reduced_[j] -= cb * t[j];
    }
  }

  void pivot(int r, int j) {
    double* pr = &table_[static_cast<std::size_t>(r) * cols_];
    const double inv = 1.0 / pr[j];
    for (int k = 0; k < cols_; ++k) pr[k] *= inv;
    pr[j] = 1.0;
    for (int i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* pi = &table_[static_cast<std::size_t>(i) * cols_];
      const double f = pi[j];
      if (f == 0.0) continue;
      for (int k = 0; k < cols_; ++k) pi[k] -= f * pr[k];
      pi[j] = 0.0;
    }
    const double f = reduced_[j];
    if (f != 0.0) {
      for (int k = 0; k < cols_; ++k) reduced_[k] -= f * pr[k];
      reduced_[j] = 0.0;
    }
    basic_row_[basis_[r]] = -1;
    basis_[r] = j;
    basic_row_[j] = r;
  }

  int choose_entering(bool bland) const {
    int best = -1;
    double best_score = options_.optimality_tolerance;
    for (int j = 0; j < cols_; ++j) {
      if (basic_row_[j] >= 0 || upper_[j] <= 0.0) continue;
      const double score = at_upper_[j] ? -reduced_[j] : reduced_[j];
      if (score > best_score) {
        if (bland) return j;
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  LpResult::Status optimize(const std::vector<double>& c, long long& iterations) {
    compute_reduced_costs(c);
    int degenerate_streak = 0;
    bool rechecked = false;
    while (true) {
      const bool bland = degenerate_streak >= kDegenerateStreakForBland;
      const int j = choose_entering(bland);
      if (j < 0) {
        if (rechecked) return LpResult::Status::kOptimal;
        // Refresh accumulated rounding before declaring optimality.
        compute_reduced_costs(c);
        rechecked = true;
        continue;
      }
      rechecked = false;
      if (iterations >= options_.max_iterations) return LpResult::Status::kIterationLimit;
      ++iterations;

      const double dir = at_upper_[j] ? -1.0 : 1.0;
      double theta = upper_[j];
      int leave = -1;
      bool leave_to_upper = false;
      double leave_alpha = 0.0;
      for (int i = 0; i < rows_; ++i) {
        const double alpha = at(i, j) * dir;
        double limit;
        bool to_upper;
        if (alpha > kPivotTolerance) {
          limit = beta_[i] / alpha;
          to_upper = false;
        } else if (alpha < -kPivotTolerance) {
          const double ub = upper_[basis_[i]];
          if (ub == LinearProgram::kInfinity) continue;
          limit = (ub - beta_[i]) / -alpha;
          to_upper = true;
        } else {
          continue;
        }
        limit = std::max(limit, 0.0);
        bool better = limit < theta - 1e-12;
        if (!better && leave >= 0 && limit <= theta + 1e-12) {
          better = bland ? basis_[i] < basis_[leave] : std::abs(alpha) > std::abs(leave_alpha);
        }
        if (better) {
          theta = limit;
          leave = i;
          leave_to_upper = to_upper;
          leave_alpha = alpha;
        }
      }
      if (theta == LinearProgram::kInfinity) return LpResult::Status::kUnbounded;
      degenerate_streak = theta <= 1e-12 ? degenerate_streak + 1 : 0;

      for (int i = 0; i < rows_; ++i) {
        const double a = at(i, j);
        if (a != 0.0) beta_[i] -= theta * dir * a;
      }
      if (leave < 0) {
        at_upper_[j] = at_upper_[j] ? 0 : 1;
        continue;
      }
      const int out = basis_[leave];
      const double entering_value = (at_upper_[j] ? upper_[j] : 0.0) + dir * theta;
      at_upper_[out] = leave_to_upper ? 1 : 0;
      at_upper_[j] = 0;
      pivot(leave, j);
      beta_[leave] = entering_value;
    }
  }

  void drive_out_artificials() {
    reduced_.assign(cols_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      int best = -1;
      double best_abs = kPivotTolerance;
      for (int j = 0; j < first_artificial_; ++j) {
        if (basic_row_[j] >= 0) continue;
        const double a = std::abs(at(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best < 0) continue;  // redundant row; artificial stays fixed at 0
      const double v = value(best);
      at_upper_[best] = 0;
      pivot(i, best);
      beta_[i] = v;
    }
  }

  DenseSimplexOptions options_;
  int rows_ = 0, cols_ = 0;
  int num_structural_ = 0, first_artificial_ = 0;
  std::vector<double> table_;
  std::vector<double> upper_;
  std::vector<char> at_upper_;
  std::vector<int> basic_row_;
  std::vector<int> basis_;
  std::vector<double> beta_;
  std::vector<double> reduced_;
};

}  // namespace

LpResult solve_dense(const LinearProgram& program, const DenseSimplexOptions& options) {
  Tableau tableau(program, options);
  return tableau.solve(program);
}

}  // namespace revassign::lp
