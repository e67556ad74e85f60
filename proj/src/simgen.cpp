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

#include "revassign/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "revassign/flow_sampler.hpp"

namespace revassign {

namespace {

struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  int count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const {
    return count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
  }
  double stderr_of_mean() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1));
    return std::sqrt(var / count);
  }
};

}  // namespace

ProblemInstance community_similarities(int n, int d, int g, int reviewer_load,
                                       int paper_load) {
  if (n <= 0 || n != d) throw InvalidInput("community model needs n = d > 0");
  if (g <= 0 || n % g != 0) {
    throw InvalidInput("group size " + std::to_string(g) + " does not divide " +
                       std::to_string(n));
  }
  Matrix<double> s(n, d, 0.0);
  for (int r = 0; r < n; ++r) {
    const int block = r / g;
    for (int p = block * g; p < (block + 1) * g; ++p) s(r, p) = 1.0;
  }
  return ProblemInstance::with_uniform_loads(std::move(s), reviewer_load, paper_load);
}

ProblemInstance uniform_similarities(int n, int d, RandomSource& rng, int reviewer_load,
                                     int paper_load) {
  if (n <= 0 || d <= 0) throw InvalidInput("uniform model needs n, d > 0");
  Matrix<double> s(n, d);
  for (double& v : s.values()) v = rng.uniform();
  return ProblemInstance::with_uniform_loads(std::move(s), reviewer_load, paper_load);
}

BidLevel parse_bid_level(std::string_view token) {
  if (token == "yes") return BidLevel::kYes;
  if (token == "maybe") return BidLevel::kMaybe;
  if (token == "no_response") return BidLevel::kNoResponse;
  throw InvalidInput("unknown bid level '" + std::string(token) + "'");
}

double bid_level_similarity(BidLevel level) {
  switch (level) {
    case BidLevel::kYes:
      return 4.0;
    case BidLevel::kMaybe:
      return 2.0;
    case BidLevel::kNoResponse:
      return 1.0;
  }
  throw InvalidInput("unknown bid level");
}

ProblemInstance bids_to_similarities(const Matrix<BidLevel>& levels, int reviewer_load,
                                     int paper_load) {
  Matrix<double> s(levels.rows(), levels.cols());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    s.values()[i] = bid_level_similarity(levels.values()[i]);
  }
  return ProblemInstance::with_uniform_loads(std::move(s), reviewer_load, paper_load);
}

Matrix<double> apply_bids(const Matrix<double>& similarities, const BidMatrix& bids,
                          double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("bid scale must be > 0");
  if (!similarities.same_shape(bids)) throw DimensionMismatch("bid matrix shape differs");
  Matrix<double> out = similarities;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int b = bids.values()[i];
    if (b < -1 || b > 1) throw InvalidInput("bids must be -1, 0 or +1");
    if (b == 1) out.values()[i] *= gamma;
    else if (b == -1) out.values()[i] /= gamma;
  }
  return out;
}

void BidModelParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("bid scale must be > 0");
  double total = 0.0;
  for (double f : group_fractions) {
    if (!(f >= 0.0)) throw InvalidInput("group fractions must be >= 0");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("group fractions must sum to 1");
  for (double p : bid_probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("bid probabilities must lie in [0,1]");
  }
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw InvalidInput("top fraction must lie in (0,1]");
  }
}

BidMatrix honest_bids(const Matrix<double>& similarities, const BidModelParams& params,
                      RandomSource& rng, std::vector<int>* groups) {
  params.validate();
  const int n = static_cast<int>(similarities.rows());
  const int d = static_cast<int>(similarities.cols());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  const int first = static_cast<int>(std::floor(params.group_fractions[0] * n));
  const int second = static_cast<int>(std::floor(params.group_fractions[1] * n));
  std::vector<int> group_of(n, 2);
  for (int i = 0; i < n; ++i) group_of[order[i]] = i < first ? 0 : i < first + second ? 1 : 2;

  const int top = std::clamp(static_cast<int>(std::floor(params.top_fraction * d)), 1, d);
  BidMatrix bids(n, d, 0);
  std::vector<int> papers(d);
  for (int r = 0; r < n; ++r) {
    const double prob = params.bid_probabilities[group_of[r]];
    if (prob <= 0.0) continue;
    std::iota(papers.begin(), papers.end(), 0);
    std::partial_sort(papers.begin(), papers.begin() + top, papers.end(), [&](int a, int b) {
      const double sa = similarities(r, a);
      const double sb = similarities(r, b);
      return sa != sb ? sa > sb : a < b;
    });
    for (int i = 0; i < top; ++i) {
      if (rng.bernoulli(prob)) bids(r, papers[i]) = rng.below(2) == 0 ? -1 : 1;
    }
  }
  if (groups != nullptr) *groups = std::move(group_of);
  return bids;
}

std::vector<std::int8_t> malicious_bids(int target_paper, int n_papers) {
  if (target_paper < 0 || target_paper >= n_papers) {
    throw InvalidInput("target paper out of range");
  }
  std::vector<std::int8_t> row(n_papers, -1);
  row[target_paper] = 1;
  return row;
}

int reviewer_at_rank(const Matrix<double>& similarities, int paper, int rank) {
  const int n = static_cast<int>(similarities.rows());
  if (rank < 1 || rank > n) throw InvalidInput("attacker rank must lie in [1, n]");
  if (paper < 0 || paper >= static_cast<int>(similarities.cols())) {
    throw InvalidInput("paper out of range");
  }
  std::vector<int> reviewers(n);
  std::iota(reviewers.begin(), reviewers.end(), 0);
  std::nth_element(reviewers.begin(), reviewers.begin() + (rank - 1), reviewers.end(),
                   [&](int a, int b) {
                     const double sa = similarities(a, paper);
                     const double sb = similarities(b, paper);
                     return sa != sb ? sa > sb : a < b;
                   });
  return reviewers[rank - 1];
}

ManipulationReport manipulation_experiment(const ProblemInstance& instance,
                                           const BidModelParams& params, double q0,
                                           int attacker_rank, int trials, RandomSource& rng,
                                           const ManipulationOptions& options) {
  params.validate();
  require_valid(instance);
  if (trials < 1) throw InvalidInput("need at least one trial");
  if (!(q0 >= 0.0 && q0 <= 1.0)) throw InvalidInput("q0 must lie in [0,1]");
  const int n = instance.n_reviewers();
  const int d = instance.n_papers();
  const Matrix<double>& text = instance.similarities();
  const ProbabilityCap open_caps = ProbabilityCap::uniform(n, d, 1.0);
  const ProbabilityCap caps = ProbabilityCap::uniform(n, d, q0);
  const auto rl = instance.reviewer_loads();
  const auto pl = instance.paper_loads();
  const std::vector<int> reviewer_load(rl.begin(), rl.end());
  const std::vector<int> paper_load(pl.begin(), pl.end());

  MeanAccumulator det, rnd, base_det, base_rnd;
  ManipulationReport report;
  report.attacker_rank = attacker_rank;
  report.trials = trials;
  long long hits = 0;
  for (int t = 0; t < trials; ++t) {
    RandomSource trial_rng = rng.split(static_cast<std::uint64_t>(t));
    const int target = static_cast<int>(trial_rng.below(static_cast<std::uint64_t>(d)));
    BidMatrix bids = honest_bids(text, params, trial_rng);
    const int attacker = reviewer_at_rank(text, target, attacker_rank);

    auto success = [&](const ProbabilityCap& q) {
      const ProblemInstance bid_instance(apply_bids(text, bids, params.gamma), reviewer_load,
                                         paper_load);
      const FractionalAssignment f = solve_pairwise(bid_instance, q, options.solve);
      return std::make_pair(f(attacker, target), f);
    };

    for (int p = 0; p < d; ++p) bids(attacker, p) = 0;
    base_det.add(success(open_caps).first);
    base_rnd.add(success(caps).first);

    const auto row = malicious_bids(target, d);
    for (int p = 0; p < d; ++p) bids(attacker, p) = row[p];
    det.add(success(open_caps).first);
    const auto [marginal, f] = success(caps);
    rnd.add(marginal);
    report.max_randomized_marginal = std::max(report.max_randomized_marginal, marginal);

    if (options.samples_per_trial > 0) {
      const ProblemInstance bid_instance(apply_bids(text, bids, params.gamma), reviewer_load,
                                         paper_load);
      RandomSource sample_rng = trial_rng.split(0x5eed);
      for (int s = 0; s < options.samples_per_trial; ++s) {
        const DeterministicAssignment m = sample(f, bid_instance, sample_rng);
        hits += m(attacker, target) ? 1 : 0;
        ++report.samples;
      }
    }
  }
  report.deterministic_success = det.mean();
  report.deterministic_stderr = det.stderr_of_mean();
  report.randomized_success = rnd.mean();
  report.randomized_stderr = rnd.stderr_of_mean();
  report.baseline_deterministic = base_det.mean();
  report.baseline_deterministic_stderr = base_det.stderr_of_mean();
  report.baseline_randomized = base_rnd.mean();
  report.baseline_randomized_stderr = base_rnd.stderr_of_mean();
  if (report.samples > 0) {
    report.sampled_randomized_success = static_cast<double>(hits) / report.samples;
  }
  return report;
}

std::vector<CurvePoint> tradeoff_curve(const InstanceFactory& make_instance,
                                       std::span<const double> q0_values, int trials,
                                       const RandomSource& rng, const SolveOptions& options) {
  if (trials < 1) throw InvalidInput("need at least one trial");
  std::vector<MeanAccumulator> acc(q0_values.size());
  for (int t = 0; t < trials; ++t) {
    RandomSource trial_rng = rng.split(static_cast<std::uint64_t>(t));
    const ProblemInstance instance = make_instance(trial_rng);
    const int n = instance.n_reviewers();
    const int d = instance.n_papers();
    double reference;
    try {
      reference = expected_similarity(
          solve_pairwise(instance, ProbabilityCap::uniform(n, d, 1.0), options), instance);
    } catch (const Infeasible&) {
      continue;
    }
    for (std::size_t i = 0; i < q0_values.size(); ++i) {
      try {
        const double value = expected_similarity(
            solve_pairwise(instance, ProbabilityCap::uniform(n, d, q0_values[i]), options),
            instance);
        acc[i].add(reference > 0.0 ? 100.0 * value / reference : 100.0);
      } catch (const Infeasible&) {
      }
    }
  }
  std::vector<CurvePoint> curve;
  for (std::size_t i = 0; i < q0_values.size(); ++i) {
    curve.push_back({q0_values[i], acc[i].mean(), acc[i].stderr_of_mean(), trials, acc[i].count});
  }
  return curve;
}

std::vector<CurvePoint> partition_sweep(const InstanceFactory& make_instance,
                                        const PartitionFactory& make_partition, double q0,
                                        std::span<const double> subset_caps, int trials,
                                        const RandomSource& rng, const SolveOptions& options) {
  if (trials < 1) throw InvalidInput("need at least one trial");
  std::vector<MeanAccumulator> acc(subset_caps.size());
  for (int t = 0; t < trials; ++t) {
    RandomSource trial_rng = rng.split(static_cast<std::uint64_t>(t));
    const ProblemInstance instance = make_instance(trial_rng);
    const ReviewerPartition partition = make_partition(instance, trial_rng);
    const ProbabilityCap caps =
        ProbabilityCap::uniform(instance.n_reviewers(), instance.n_papers(), q0);
    double reference;
    try {
      reference = expected_similarity(solve_pairwise(instance, caps, options), instance);
    } catch (const Infeasible&) {
      continue;
    }
    for (std::size_t i = 0; i < subset_caps.size(); ++i) {
      try {
        const double value = expected_similarity(
            solve_partition(instance, caps, partition, subset_caps[i], options), instance);
        acc[i].add(reference > 0.0 ? 100.0 * value / reference : 100.0);
      } catch (const Infeasible&) {
      }
    }
  }
  std::vector<CurvePoint> curve;
  for (std::size_t i = 0; i < subset_caps.size(); ++i) {
    curve.push_back(
        {subset_caps[i], acc[i].mean(), acc[i].stderr_of_mean(), trials, acc[i].count});
  }
  return curve;
}

ReviewerPartition block_partition(int n_reviewers, int g) {
  if (g <= 0) throw InvalidInput("block size must be positive");
  std::vector<int> subset(n_reviewers);
  for (int r = 0; r < n_reviewers; ++r) subset[r] = r / g;
  return ReviewerPartition(std::move(subset));
}

ReviewerPartition random_partition(int n_reviewers, int subset_size, RandomSource& rng) {
  if (subset_size <= 0) throw InvalidInput("subset size must be positive");
  std::vector<int> order(n_reviewers);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<int> subset(n_reviewers);
  for (int i = 0; i < n_reviewers; ++i) subset[order[i]] = i / subset_size;
  return ReviewerPartition(std::move(subset));
}

std::vector<double> grid(double from, double to, double step) {
  if (!(step > 0.0) || !(to >= from)) throw InvalidInput("grid needs step > 0 and to >= from");
  const int count = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> values;
  for (int i = 0; i < count; ++i) values.push_back(std::round((from + i * step) * 1e9) / 1e9);
  return values;
}

}  // namespace revassign
