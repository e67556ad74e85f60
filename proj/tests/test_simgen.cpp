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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "revassign/lp.hpp"
#include "revassign/simgen.hpp"

namespace revassign {
namespace {

TEST_CASE("community model") {
  const auto small = community_similarities(6, 6, 3, 3, 3);
  for (int r = 0; r < 6; ++r) {
    for (int p = 0; p < 6; ++p) CHECK(small.similarity(r, p) == (r / 3 == p / 3 ? 1.0 : 0.0));
  }
  const auto ones = community_similarities(5, 5, 5, 1, 1);
  for (double v : ones.similarities().values()) CHECK(v == 1.0);
  const auto big = community_similarities(360, 360, 6, 3, 3);
  const auto f = solve_pairwise(big, ProbabilityCap::uniform(360, 360, 1.0));
  CHECK(expected_similarity(f, big) == doctest::Approx(1080.0));
  CHECK_THROWS_AS(community_similarities(10, 10, 3), InvalidInput);
}

TEST_CASE("uniform model") {
  RandomSource a(1), b(1);
  const auto x = uniform_similarities(20, 30, a);
  const auto y = uniform_similarities(20, 30, b);
  CHECK(x.similarities() == y.similarities());
  RandomSource c(2);
  const auto big = uniform_similarities(1000, 1000, c);
  double sum = 0.0;
  for (double v : big.similarities().values()) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    sum += v;
  }
  const double mean = sum / 1e6;
  CHECK(mean >= 0.49);
  CHECK(mean <= 0.51);
}

TEST_CASE("bid levels") {
  CHECK(bid_level_similarity(parse_bid_level("yes")) == 4.0);
  CHECK(bid_level_similarity(parse_bid_level("maybe")) == 2.0);
  CHECK(bid_level_similarity(parse_bid_level("no_response")) == 1.0);
  CHECK_THROWS_AS(parse_bid_level("no"), InvalidInput);
  const Matrix<BidLevel> maybe(3, 4, BidLevel::kMaybe);
  const auto inst = bids_to_similarities(maybe, 6, 3);
  for (double v : inst.similarities().values()) CHECK(v == 2.0);
  CHECK(inst.reviewer_load(0) == 6);
  CHECK(inst.paper_load(0) == 3);
}

TEST_CASE("apply_bids") {
  const Matrix<double> s(2, 2, 1.0);
  CHECK(apply_bids(s, BidMatrix(2, 2, 0), 2.0) == s);
  BidMatrix up(2, 2, 0);
  up(0, 0) = 1;
  up(1, 1) = -1;
  const auto two = apply_bids(s, up, 2.0);
  CHECK(two(0, 0) == 2.0);
  CHECK(two(1, 1) == 0.5);
  CHECK(two(0, 1) == 1.0);
  CHECK(apply_bids(s, up, 4.0)(1, 1) == 0.25);
  BidMatrix bad(2, 2, 0);
  bad(0, 0) = 2;
  CHECK_THROWS_AS(apply_bids(s, bad, 2.0), InvalidInput);
  CHECK_THROWS_AS(apply_bids(s, up, 0.0), InvalidInput);
  CHECK_THROWS_AS(apply_bids(s, BidMatrix(1, 2, 0), 2.0), DimensionMismatch);
}

TEST_CASE("honest bids") {
  RandomSource gen(3);
  const int n = 100, d = 1000;
  const auto inst = uniform_similarities(n, d, gen, 30, 3);
  const BidModelParams params;
  RandomSource rng(4);
  std::vector<int> groups;
  const BidMatrix bids = honest_bids(inst.similarities(), params, rng, &groups);
  CHECK(std::count(groups.begin(), groups.end(), 0) == 20);
  CHECK(std::count(groups.begin(), groups.end(), 1) == 50);
  CHECK(std::count(groups.begin(), groups.end(), 2) == 30);
  long long group3_bids = 0;
  for (int r = 0; r < n; ++r) {
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double sa = inst.similarity(r, a), sb = inst.similarity(r, b);
      return sa != sb ? sa > sb : a < b;
    });
    std::vector<bool> top(d, false);
    for (int i = 0; i < d / 10; ++i) top[order[i]] = true;
    int nonzero = 0;
    for (int p = 0; p < d; ++p) {
      if (bids(r, p) != 0) {
        ++nonzero;
        CHECK(top[p]);
      }
    }
    if (groups[r] == 0) CHECK(nonzero == 0);
    if (groups[r] == 2) group3_bids += nonzero;
  }
  // 30 reviewers, 100 top papers each, bid probability 0.24.
  const double expected = 30 * 100 * 0.24;
  CHECK(std::abs(group3_bids - expected) <= 3 * std::sqrt(30 * 100 * 0.24 * 0.76));

  RandomSource again(4);
  CHECK(honest_bids(inst.similarities(), params, again) == bids);
}

TEST_CASE("malicious bids and attacker rank") {
  const auto row = malicious_bids(1, 3);
  CHECK(row == std::vector<std::int8_t>{-1, 1, -1});
  CHECK(std::count(row.begin(), row.end(), 1) == 1);
  CHECK_THROWS_AS(malicious_bids(3, 3), InvalidInput);
  const Matrix<double> s{{0.2, 0.0}, {0.9, 0.0}, {0.5, 0.0}, {0.5, 0.0}};
  CHECK(reviewer_at_rank(s, 0, 1) == 1);
  CHECK(reviewer_at_rank(s, 0, 2) == 2);
  CHECK(reviewer_at_rank(s, 0, 3) == 3);
  CHECK(reviewer_at_rank(s, 0, 4) == 0);
  CHECK_THROWS_AS(reviewer_at_rank(s, 0, 5), InvalidInput);
}

TEST_CASE("manipulation experiment") {
  RandomSource gen(5);
  const auto inst = uniform_similarities(60, 60, gen, 3, 3);
  const BidModelParams params;
  ManipulationOptions options;
  options.samples_per_trial = 50;
  SUBCASE("caps bound the attacker for every rank") {
    for (int rank : {1, 3, 10}) {
      RandomSource rng(6);
      const auto report = manipulation_experiment(inst, params, 0.5, rank, 8, rng, options);
      CHECK(report.max_randomized_marginal <= 0.5 + 1e-7);
      CHECK(report.randomized_success <= 0.5 + 1e-7);
      CHECK(report.deterministic_success >= report.randomized_success - 1e-9);
      CHECK(report.samples == 8 * 50);
      CHECK(report.sampled_randomized_success <=
            0.5 + oracle::binomial_band(0.5, report.samples));
    }
  }
  SUBCASE("the deterministic method succeeds all or nothing") {
    RandomSource rng(7);
    ManipulationOptions plain;
    const auto report = manipulation_experiment(inst, params, 0.5, 2, 1, rng, plain);
    CHECK((report.deterministic_success == 0.0 || report.deterministic_success == 1.0));
    CHECK((report.baseline_deterministic == 0.0 || report.baseline_deterministic == 1.0));
  }
  SUBCASE("far-ranked reviewers rarely get the target without bidding") {
    RandomSource rng(8);
    const auto report = manipulation_experiment(inst, params, 0.5, 50, 10, rng, {});
    CHECK(report.baseline_deterministic <= 0.1);
  }
  SUBCASE("q0 of 1 matches the deterministic optimum") {
    RandomSource rng(9);
    const auto report = manipulation_experiment(inst, params, 1.0, 1, 5, rng, {});
    CHECK(report.baseline_randomized == doctest::Approx(report.baseline_deterministic));
    CHECK(report.randomized_success == doctest::Approx(report.deterministic_success));
  }
  SUBCASE("same seed, same report") {
    RandomSource a(10), b(10);
    const auto x = manipulation_experiment(inst, params, 0.5, 1, 3, a, {});
    const auto y = manipulation_experiment(inst, params, 0.5, 1, 3, b, {});
    CHECK(x.randomized_success == y.randomized_success);
    CHECK(x.deterministic_success == y.deterministic_success);
  }
}

TEST_CASE("sweeps") {
  const RandomSource rng(11);
  SUBCASE("community tradeoff checkpoints") {
    const std::vector<double> q0s{0.5};
    const auto six = tradeoff_curve(
        [](RandomSource&) { return community_similarities(360, 360, 6, 3, 3); }, q0s, 1, rng);
    CHECK(six[0].mean_percent == doctest::Approx(100.0));
    const auto three = tradeoff_curve(
        [](RandomSource&) { return community_similarities(360, 360, 3, 3, 3); }, q0s, 1, rng);
    CHECK(std::abs(three[0].mean_percent - 50.0) <= 0.1);
  }
  SUBCASE("uniform tradeoff is monotone") {
    const auto q0s = grid(0.1, 1.0, 0.1);
    REQUIRE(q0s.size() == 10);
    CHECK(q0s[2] == 0.3);
    const auto curve = tradeoff_curve(
        [](RandomSource& r) { return uniform_similarities(80, 80, r); }, q0s, 3, rng);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      CHECK(curve[i].mean_percent >= curve[i - 1].mean_percent - 1e-7);
    }
    CHECK(curve.back().mean_percent == doctest::Approx(100.0));
    CHECK(curve.back().feasible_trials == 3);
  }
  SUBCASE("partition sweep is monotone") {
    const auto caps = grid(1.0, 2.0, 0.2);
    const auto curve = partition_sweep(
        [](RandomSource& r) { return uniform_similarities(60, 60, r); },
        [](const ProblemInstance& inst, RandomSource& r) {
          return random_partition(inst.n_reviewers(), 10, r);
        },
        0.5, caps, 2, rng);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      CHECK(curve[i].mean_percent >= curve[i - 1].mean_percent - 1e-7);
    }
    CHECK(curve.back().mean_percent <= 100.0 + 1e-7);
  }
  SUBCASE("partitions") {
    const auto blocks = block_partition(12, 4);
    CHECK(blocks.n_subsets() == 3);
    CHECK(blocks.subset_of(5) == 1);
    RandomSource r(12);
    const auto random = random_partition(25, 10, r);
    CHECK(random.n_subsets() == 3);
    CHECK(random.members(2).size() == 5);
  }
}

}  // namespace
}  // namespace revassign
