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

#include <doctest.h>

#include <string>

#include "oracles.hpp"
#include "revassign/lp.hpp"
#include "revassign/simgen.hpp"

namespace revassign {
namespace {

SolveOptions dense() {
  SolveOptions o;
  o.engine = LpEngine::kDense;
  return o;
}

SolveOptions network() {
  SolveOptions o;
  o.engine = LpEngine::kNetwork;
  return o;
}

double max_cap_excess(const FractionalAssignment& f, const ProbabilityCap& q) {
  double worst = 0.0;
  for (int r = 0; r < f.n_reviewers(); ++r) {
    for (int p = 0; p < f.n_papers(); ++p) worst = std::max(worst, f(r, p) - q(r, p));
  }
  return worst;
}

TEST_CASE("single forced pair") {
  const auto inst = ProblemInstance::with_uniform_loads({{0.7}}, 1, 1);
  const auto f = solve_pairwise(inst, ProbabilityCap::uniform(1, 1, 1.0));
  CHECK(f(0, 0) == doctest::Approx(1.0));
  CHECK(expected_similarity(f, inst) == doctest::Approx(0.7));
}

TEST_CASE("cap splits a single paper between two reviewers") {
  const auto inst = ProblemInstance::with_uniform_loads({{0.9}, {0.3}}, 1, 1);
  for (const auto& options : {network(), dense()}) {
    const auto f = solve_pairwise(inst, ProbabilityCap::uniform(2, 1, 0.5), options);
    CHECK(f(0, 0) == doctest::Approx(0.5));
    CHECK(f(1, 0) == doctest::Approx(0.5));
    CHECK(expected_similarity(f, inst) == doctest::Approx(0.6));
  }
}

TEST_CASE("unconstrained optimum equals the best deterministic assignment") {
  RandomSource rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const int d = 1 + static_cast<int>(rng.below(5));
    const int l = 1 + static_cast<int>(rng.below(std::min(n, 2)));
    const int k = static_cast<int>((d * l + n - 1) / n) + static_cast<int>(rng.below(2));
    const auto inst = uniform_similarities(n, d, rng, k, l);
    const auto best = oracle::best_assignment_similarity(inst);
    REQUIRE(best.has_value());
    const auto f = solve_pairwise(inst, ProbabilityCap::uniform(n, d, 1.0));
    CAPTURE(trial);
    CHECK(expected_similarity(f, inst) == doctest::Approx(*best).epsilon(1e-9));
  }
}

TEST_CASE("engines agree and respect the caps") {
  RandomSource rng(3);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 8 + static_cast<int>(rng.below(12));
    const int d = 6 + static_cast<int>(rng.below(10));
    const auto inst = uniform_similarities(n, d, rng, 6, 3);
    const double q0 = 0.3 + 0.1 * static_cast<double>(rng.below(6));
    const auto q = ProbabilityCap::uniform(n, d, q0);
    const auto a = solve_pairwise(inst, q, network());
    const auto b = solve_pairwise(inst, q, dense());
    CHECK(expected_similarity(a, inst) ==
          doctest::Approx(expected_similarity(b, inst)).epsilon(1e-8));
    CHECK(max_cap_excess(a, q) <= 1e-7);
    CHECK(max_cap_excess(b, q) <= 1e-7);
    CHECK(validate_fractional(a, inst).ok());
  }
}

TEST_CASE("too few reviewers under a low cap is infeasible and names the paper index") {
  const auto inst = ProblemInstance::with_uniform_loads(Matrix<double>(20, 4, 1.0), 3, 3);
  try {
    solve_pairwise(inst, ProbabilityCap::uniform(20, 4, 0.1));
    FAIL("expected Infeasible");
  } catch (const Infeasible& e) {
    CHECK(std::string(e.what()).find("paper") != std::string::npos);
  }
}

TEST_CASE("community checkpoints") {
  SUBCASE("group size 6 keeps every good reviewer") {
    const auto inst = community_similarities(360, 360, 6, 3, 3);
    const auto f = solve_pairwise(inst, ProbabilityCap::uniform(360, 360, 0.5));
    CHECK(expected_similarity(f, inst) == doctest::Approx(1080.0).epsilon(1e-9));
  }
  SUBCASE("group size 3 halves the similarity") {
    const auto inst = community_similarities(360, 360, 3, 3, 3);
    const auto f = solve_pairwise(inst, ProbabilityCap::uniform(360, 360, 0.5));
    CHECK(expected_similarity(f, inst) == doctest::Approx(540.0).epsilon(1e-9));
  }
}

TEST_CASE("partition constraint") {
  SUBCASE("singleton subsets at cap 1 change nothing") {
    RandomSource rng(8);
    const auto inst = uniform_similarities(10, 8, rng, 6, 3);
    const auto q = ProbabilityCap::uniform(10, 8, 0.5);
    const auto a = solve_pairwise(inst, q);
    const auto b = solve_partition(inst, q, ReviewerPartition::singletons(10), 1.0);
    CHECK(expected_similarity(a, inst) == doctest::Approx(expected_similarity(b, inst)));
  }
  SUBCASE("one subset cannot fill a two-reviewer paper") {
    const auto inst = ProblemInstance::with_uniform_loads({{1.0}, {1.0}}, 1, 2);
    CHECK_THROWS_AS(solve_partition(inst, ProbabilityCap::uniform(2, 1, 1.0),
                                    ReviewerPartition({0, 0}), 1.0),
                    Infeasible);
  }
  SUBCASE("subset cap below 1 is rejected") {
    const auto inst = ProblemInstance::with_uniform_loads({{1.0}, {1.0}}, 1, 1);
    CHECK_THROWS_AS(solve_partition(inst, ProbabilityCap::uniform(2, 1, 1.0),
                                    ReviewerPartition({0, 0}), 0.5),
                    InvalidInput);
  }
  SUBCASE("community sweep is monotone and bounded by the loose cap") {
    const auto inst = community_similarities(60, 60, 6, 3, 3);
    const auto q = ProbabilityCap::uniform(60, 60, 0.5);
    const auto part = block_partition(60, 6);
    double previous = -1.0;
    for (double cap : grid(1.0, 2.0, 0.1)) {
      const double value = expected_similarity(solve_partition(inst, q, part, cap), inst);
      CHECK(value >= previous - 1e-7);
      previous = value;
    }
    const double at_15 = expected_similarity(solve_partition(inst, q, part, 1.5), inst);
    const double at_3 = expected_similarity(solve_partition(inst, q, part, 3.0), inst);
    CHECK(at_15 < at_3 - 1e-6);
  }
  SUBCASE("engines agree with subset rows") {
    RandomSource rng(21);
    const auto inst = uniform_similarities(18, 12, rng, 6, 3);
    const auto q = ProbabilityCap::uniform(18, 12, 0.6);
    const auto part = random_partition(18, 3, rng);
    for (double cap : {1.0, 1.3, 2.0}) {
      const auto a = solve_partition(inst, q, part, cap, network());
      const auto b = solve_partition(inst, q, part, cap, dense());
      CHECK(expected_similarity(a, inst) ==
            doctest::Approx(expected_similarity(b, inst)).epsilon(1e-8));
      for (int i = 0; i < part.n_subsets(); ++i) {
        for (int p = 0; p < 12; ++p) {
          double load = 0.0;
          for (int r : part.members(i)) load += a(r, p);
          CHECK(load <= cap + 1e-7);
        }
      }
    }
  }
}

TEST_CASE("fairness objective") {
  SUBCASE("diagonal instance") {
    const auto inst = ProblemInstance::with_uniform_loads({{5, 0}, {0, 2}}, 1, 1);
    const auto fair = solve_fair(inst, ProbabilityCap::uniform(2, 2, 1.0));
    CHECK(fair.fairness_value == doctest::Approx(2.0));
    CHECK(fair.assignment(0, 0) == doctest::Approx(1.0));
    CHECK(fair.assignment(1, 1) == doctest::Approx(1.0));
  }
  SUBCASE("dominates the pairwise solution") {
    RandomSource rng(4);
    for (int trial = 0; trial < 6; ++trial) {
      const auto inst = uniform_similarities(10, 7, rng, 6, 3);
      const auto q = ProbabilityCap::uniform(10, 7, 0.5);
      const auto fair = solve_fair(inst, q);
      CHECK(fair.fairness_value >= stochastic_fairness(solve_pairwise(inst, q), inst) - 1e-7);
      CHECK(stochastic_fairness(fair.assignment, inst) ==
            doctest::Approx(fair.fairness_value).epsilon(1e-7));
      CHECK(max_cap_excess(fair.assignment, q) <= 1e-7);
    }
  }
  SUBCASE("one paper") {
    RandomSource rng(6);
    const auto inst = uniform_similarities(9, 1, rng, 1, 3);
    const auto q = ProbabilityCap::uniform(9, 1, 0.4);
    const auto fair = solve_fair(inst, q);
    CHECK(fair.fairness_value ==
          doctest::Approx(expected_similarity(solve_pairwise(inst, q), inst)).epsilon(1e-7));
  }
}

TEST_CASE("bad-assignment caps") {
  SUBCASE("reduction") {
    const BadAssignmentProbabilities w(Matrix<double>{{0.0, 0.25}, {0.5, 1.0}});
    const auto q = bad_assignment_caps(w, 0.5);
    CHECK(q(0, 0) == 1.0);
    CHECK(q(0, 1) == 1.0);
    CHECK(q(1, 0) == doctest::Approx(1.0));
    CHECK(q(1, 1) == doctest::Approx(0.5));
    const auto full = bad_assignment_caps(w, 1.0);
    for (double v : full.matrix().values()) CHECK(v == 1.0);
  }
  SUBCASE("zero W leaves the unconstrained optimum") {
    RandomSource rng(12);
    const auto inst = uniform_similarities(6, 5, rng, 3, 2);
    const BadAssignmentProbabilities w(Matrix<double>(6, 5, 0.0));
    const double base =
        expected_similarity(solve_pairwise(inst, ProbabilityCap::uniform(6, 5, 1.0)), inst);
    CHECK(expected_similarity(solve_bad_pairwise(inst, w, 0.1), inst) == doctest::Approx(base));
    CHECK(expected_similarity(solve_bad_partition(inst, w, 0.1, ReviewerPartition::singletons(6)),
                              inst) == doctest::Approx(base));
    const auto part = random_partition(6, 2, rng);
    CHECK(expected_similarity(solve_bad_partition(inst, w, 0.1, part), inst) ==
          doctest::Approx(expected_similarity(
              solve_partition(inst, ProbabilityCap::uniform(6, 5, 1.0), part, 1.0), inst)));
  }
  SUBCASE("two bad reviewers share one paper") {
    const auto inst = ProblemInstance::with_uniform_loads({{0.9}, {0.3}}, 1, 1);
    const BadAssignmentProbabilities w(Matrix<double>{{1.0}, {1.0}});
    const auto f = solve_bad_pairwise(inst, w, 0.5);
    CHECK(f(0, 0) == doctest::Approx(0.5));
    CHECK(f(1, 0) == doctest::Approx(0.5));
  }
  SUBCASE("zero lambda forbids required pairs") {
    const auto inst = ProblemInstance::with_uniform_loads({{1.0}, {1.0}}, 1, 1);
    const BadAssignmentProbabilities w(Matrix<double>{{1.0}, {1.0}});
    CHECK_THROWS_AS(solve_bad_pairwise(inst, w, 0.0), Infeasible);
  }
}

TEST_CASE("expected number of bad reviewers") {
  SUBCASE("loose mu matches the pairwise version") {
    RandomSource rng(13);
    const auto inst = uniform_similarities(8, 6, rng, 3, 2);
    Matrix<double> wm(8, 6);
    for (double& v : wm.values()) v = rng.uniform();
    const BadAssignmentProbabilities w(wm);
    const double a = expected_similarity(solve_bad_expectation(inst, w, 0.6, 2.0), inst);
    const double b = expected_similarity(solve_bad_pairwise(inst, w, 0.6), inst);
    CHECK(a == doctest::Approx(b).epsilon(1e-7));
  }
  SUBCASE("all-bad reviewers cannot fill two slots under mu 1") {
    const auto inst = ProblemInstance::with_uniform_loads(Matrix<double>(3, 1, 1.0), 1, 2);
    const BadAssignmentProbabilities w(Matrix<double>(3, 1, 1.0));
    CHECK_THROWS_AS(solve_bad_expectation(inst, w, 1.0, 1.0), Infeasible);
  }
  SUBCASE("three-reviewer polytope matches vertex enumeration") {
    const ProblemInstance inst(Matrix<double>{{5}, {4}, {1}}, {1, 1, 1}, {2});
    const BadAssignmentProbabilities w(Matrix<double>{{1}, {1}, {0}});
    const auto f = solve_bad_expectation(inst, w, 1.0, 1.0);
    oracle::SmallLp lp;
    lp.c = {5, 4, 1};
    lp.upper = {1, 1, 1};
    lp.a = {{1, 1, 1}, {1, 1, 0}};
    lp.b = {2, 1};
    lp.equality = {true, false};
    const auto best = oracle::solve_by_vertices(lp);
    REQUIRE(best.has_value());
    CHECK(expected_similarity(f, inst) == doctest::Approx(best->objective));
    CHECK(best->objective == doctest::Approx(6.0));
    CHECK(f(0, 0) == doctest::Approx(1.0));
    CHECK(f(1, 0) == doctest::Approx(0.0));
    CHECK(f(2, 0) == doctest::Approx(1.0));
  }
  SUBCASE("argument checks") {
    const auto inst = ProblemInstance::with_uniform_loads({{1.0}, {1.0}}, 1, 1);
    const BadAssignmentProbabilities w(Matrix<double>{{1.0}, {1.0}});
    CHECK_THROWS_AS(solve_bad_expectation(inst, w, 1.0, -1.0), InvalidInput);
    CHECK_THROWS_AS(solve_bad_pairwise(inst, w, 1.5), InvalidInput);
  }
}

}  // namespace
}  // namespace revassign
