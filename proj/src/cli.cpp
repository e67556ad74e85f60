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

#include "revassign/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "revassign/decompose.hpp"
#include "revassign/flow_sampler.hpp"
#include "revassign/io.hpp"
#include "revassign/lp.hpp"
#include "revassign/partition_sampler.hpp"
#include "revassign/simgen.hpp"

namespace revassign {

using nlohmann::json;

namespace {

constexpr double kMarginalsCheckLimit = 0.03;

struct SolveArgs {
  std::string problem;
  std::string mode = "pairwise";
  std::string q;
  std::string partition;
  std::string engine = "auto";
  double subset_cap = 1.0;
  double lambda = 1.0;
  double mu = -1.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct SampleArgs {
  std::string problem;
  std::string fractional;
  std::string partition;
  int samples = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool marginals_check = false;
};

struct DecomposeArgs {
  std::string problem;
  std::string fractional;
  long long max_components = -1;
  std::string out;
};

struct GeneratorArgs {
  std::string generator = "uniform";
  std::string problem;
  int n = 100;
  int d = 100;
  int g = 6;
  int k = 3;
  int l = 3;
};

struct ExperimentArgs {
  GeneratorArgs gen;
  std::string kind;
  int trials = 10;
  std::uint64_t seed = 0;
  std::string out;
  std::string engine = "auto";
  // tradeoff
  double q0_from = 0.1, q0_to = 1.0, q0_step = 0.1;
  // partition-sweep
  double q0 = 0.5;
  double cap_from = 1.0, cap_to = 2.0, cap_step = 0.1;
  int subset_size = 100;
  // manipulation
  std::vector<int> ranks = {1, 2, 3, 4, 5, 10, 15, 20};
  double gamma = 2.0;
  int samples_per_trial = 0;
};

struct GenerateArgs {
  GeneratorArgs gen;
  std::string kind;
  std::string bids;
  double gamma = 2.0;
  std::uint64_t seed = 0;
  std::string out;
};

LpEngine parse_engine(const std::string& name) {
  if (name == "auto") return LpEngine::kAuto;
  if (name == "network") return LpEngine::kNetwork;
  if (name == "dense") return LpEngine::kDense;
  throw ParseError("unknown engine '" + name + "'");
}

// Writes to `path`, or to `out` when the path is empty or "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ParseError("cannot write " + path);
  write(file);
}

FractionalAssignment read_fractional(const std::string& path, const ProblemInstance& instance) {
  Matrix<double> m = read_matrix_csv(path);
  if (!m.same_shape(instance.n_reviewers(), instance.n_papers())) {
    throw DimensionMismatch("F is " + std::to_string(m.rows()) + " x " +
                            std::to_string(m.cols()) + " but the problem is " +
                            std::to_string(instance.n_reviewers()) + " x " +
                            std::to_string(instance.n_papers()));
  }
  return FractionalAssignment(std::move(m));
}

std::optional<ReviewerPartition> pick_partition(const std::string& path,
                                                const ProblemFile& problem) {
  if (!path.empty()) return read_partition(path, problem.instance.n_reviewers());
  return problem.partition;
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const ProblemFile problem = read_problem(a.problem);
  const ProblemInstance& inst = problem.instance;
  const int n = inst.n_reviewers();
  const int d = inst.n_papers();
  SolveOptions options;
  options.engine = parse_engine(a.engine);
  ProbabilityCap caps = !a.q.empty()     ? caps_from_argument(a.q, n, d)
                        : problem.caps ? *problem.caps
                                       : ProbabilityCap::uniform(n, d, 1.0);
  auto need_bad = [&]() -> const BadAssignmentProbabilities& {
    if (!problem.bad) throw ParseError("mode " + a.mode + " needs a 'w' matrix in the problem");
    return *problem.bad;
  };
  auto need_partition = [&]() {
    auto partition = pick_partition(a.partition, problem);
    if (!partition) throw ParseError("mode " + a.mode + " needs a partition");
    return *partition;
  };

  const auto start = std::chrono::steady_clock::now();
  std::optional<FractionalAssignment> f;
  std::optional<double> fairness;
  if (a.mode == "pairwise") {
    f = solve_pairwise(inst, caps, options);
  } else if (a.mode == "partition") {
    f = solve_partition(inst, caps, need_partition(), a.subset_cap, options);
  } else if (a.mode == "fair") {
    FairSolution s = solve_fair(inst, caps, options);
    fairness = s.fairness_value;
    f = std::move(s.assignment);
  } else if (a.mode == "bad-pairwise") {
    f = solve_bad_pairwise(inst, need_bad(), a.lambda, options);
  } else if (a.mode == "bad-partition") {
    f = solve_bad_partition(inst, need_bad(), a.lambda, need_partition(), options);
  } else if (a.mode == "bad-expectation") {
    if (a.mu < 0.0) throw ParseError("mode bad-expectation needs --mu");
    f = solve_bad_expectation(inst, need_bad(), a.lambda, a.mu, options);
  } else {
    throw ParseError("unknown mode '" + a.mode + "'");
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const json sidecar{{"mode", a.mode},
                     {"status", "optimal"},
                     {"objective", expected_similarity(*f, inst)},
                     {"fairness", fairness ? *fairness : stochastic_fairness(*f, inst)},
                     {"wall_time_seconds", seconds},
                     {"n_reviewers", n},
                     {"n_papers", d}};
  emit(a.out, out, [&](std::ostream& s) { write_matrix_csv(s, f->matrix()); });
  if (!a.out.empty() && a.out != "-") {
    write_json(a.out + ".json", sidecar);
  }
  out << sidecar.dump() << '\n';
  return kExitOk;
}

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
  if (a.samples < 1) throw ParseError("--samples must be at least 1");
  const ProblemFile problem = read_problem(a.problem);
  const ProblemInstance& inst = problem.instance;
  const FractionalAssignment f = read_fractional(a.fractional, inst);
  const std::optional<ReviewerPartition> partition =
      a.partition.empty() ? std::nullopt
                          : std::optional(read_partition(a.partition, inst.n_reviewers()));

  const RandomSource master(a.seed);
  const bool to_dir = a.samples > 1 && !a.out.empty();
  if (to_dir) std::filesystem::create_directories(a.out);
  Matrix<double> counts(inst.n_reviewers(), inst.n_papers(), 0.0);
  long long pairs = 0;
  for (int i = 0; i < a.samples; ++i) {
    RandomSource rng = master.split(static_cast<std::uint64_t>(i));
    const DeterministicAssignment m = partition ? sample_partitioned(f, inst, *partition, rng)
                                                : sample(f, inst, rng);
    if (partition) pairs += same_subset_pair_count(m, *partition);
    if (a.marginals_check) {
      for (std::size_t e = 0; e < counts.size(); ++e) counts.values()[e] += m.matrix().values()[e];
    }
    if (to_dir) {
      char name[32];
      std::snprintf(name, sizeof name, "sample_%05d.json", i);
      write_json((std::filesystem::path(a.out) / name).string(), assignment_to_json(m));
    } else if (a.samples == 1) {
      emit(a.out, out, [&](std::ostream& s) { s << assignment_to_json(m).dump() << '\n'; });
    }
  }
  if (partition) {
    err << "mean_same_subset_pairs=" << static_cast<double>(pairs) / a.samples
        << " bound=" << expected_pair_bound(f, *partition) << '\n';
  }
  if (a.marginals_check) {
    double worst = 0.0;
    for (std::size_t e = 0; e < counts.size(); ++e) {
      worst = std::max(worst, std::abs(counts.values()[e] / a.samples - f.matrix().values()[e]));
    }
    out << "max_marginal_deviation=" << worst << '\n';
    if (worst > kMarginalsCheckLimit) {
      err << "marginals check failed: " << worst << " > " << kMarginalsCheckLimit << '\n';
      return kExitCheckFailed;
    }
  }
  return kExitOk;
}

int cmd_decompose(const DecomposeArgs& a, std::ostream& out, std::ostream& err) {
  const ProblemFile problem = read_problem(a.problem);
  const ProblemInstance& inst = problem.instance;
  const FractionalAssignment f = read_fractional(a.fractional, inst);
  DecomposeStats stats;
  const AssignmentDistribution lottery = decompose(f, inst, &stats);
  const long long bound =
      a.max_components >= 0 ? a.max_components : stats.padded_fractional_entries + 1;
  if (static_cast<long long>(lottery.size()) > bound) {
    err << "decomposition produced " << lottery.size() << " components, above the limit "
        << bound << '\n';
    return kExitInternal;
  }
  const Matrix<double> marginals = lottery.marginals();
  double residual = 0.0;
  for (std::size_t e = 0; e < marginals.size(); ++e) {
    residual = std::max(residual, std::abs(marginals.values()[e] - f.matrix().values()[e]));
  }
  emit(a.out, out, [&](std::ostream& s) { s << lottery_to_json(lottery).dump(1) << '\n'; });
  err << "components=" << lottery.size() << " total_weight=" << lottery.total_weight()
      << " residual=" << residual << '\n';
  return kExitOk;
}

InstanceFactory make_factory(const GeneratorArgs& g) {
  if (g.generator == "community") {
    return [g](RandomSource&) { return community_similarities(g.n, g.d, g.g, g.k, g.l); };
  }
  if (g.generator == "uniform") {
    return [g](RandomSource& rng) { return uniform_similarities(g.n, g.d, rng, g.k, g.l); };
  }
  if (g.generator == "problem") {
    if (g.problem.empty()) throw ParseError("generator 'problem' needs --problem");
    const ProblemInstance inst = read_problem(g.problem).instance;
    return [inst](RandomSource&) { return inst; };
  }
  throw ParseError("unknown generator '" + g.generator + "'");
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
  SolveOptions options;
  options.engine = parse_engine(a.engine);
  const RandomSource rng(a.seed);
  const InstanceFactory factory = make_factory(a.gen);
  if (a.kind == "tradeoff") {
    const auto q0s = grid(a.q0_from, a.q0_to, a.q0_step);
    const auto curve = tradeoff_curve(factory, q0s, a.trials, rng, options);
    emit(a.out, out, [&](std::ostream& s) { write_curve_csv(s, curve, "q0"); });
    return kExitOk;
  }
  if (a.kind == "partition-sweep") {
    PartitionFactory partitions;
    if (a.gen.generator == "community") {
      const int g = a.gen.g;
      partitions = [g](const ProblemInstance& inst, RandomSource&) {
        return block_partition(inst.n_reviewers(), g);
      };
    } else if (a.gen.generator == "problem") {
      const auto part = read_problem(a.gen.problem).partition;
      if (!part) throw ParseError("problem file has no partition");
      partitions = [part](const ProblemInstance&, RandomSource&) { return *part; };
    } else {
      const int size = a.subset_size;
      partitions = [size](const ProblemInstance& inst, RandomSource& r) {
        return random_partition(inst.n_reviewers(), size, r);
      };
    }
    const auto caps = grid(a.cap_from, a.cap_to, a.cap_step);
    const auto curve = partition_sweep(factory, partitions, a.q0, caps, a.trials, rng, options);
    emit(a.out, out, [&](std::ostream& s) { write_curve_csv(s, curve, "subset_cap"); });
    return kExitOk;
  }
  if (a.kind == "manipulation") {
    RandomSource instance_rng = rng.split(0);
    const ProblemInstance inst = factory(instance_rng);
    BidModelParams params;
    params.gamma = a.gamma;
    ManipulationOptions mopts;
    mopts.samples_per_trial = a.samples_per_trial;
    mopts.solve = options;
    emit(a.out, out, [&](std::ostream& s) {
      s << "attacker_rank,deterministic_success,deterministic_stderr,randomized_success,"
           "randomized_stderr,baseline_deterministic,baseline_deterministic_stderr,"
           "baseline_randomized,baseline_randomized_stderr,sampled_randomized_success,trials\n";
      for (int rank : a.ranks) {
        RandomSource trial_rng = rng.split(1000 + static_cast<std::uint64_t>(rank));
        const ManipulationReport r =
            manipulation_experiment(inst, params, a.q0, rank, a.trials, trial_rng, mopts);
        s << rank << ',' << r.deterministic_success << ',' << r.deterministic_stderr << ','
          << r.randomized_success << ',' << r.randomized_stderr << ','
          << r.baseline_deterministic << ',' << r.baseline_deterministic_stderr << ','
          << r.baseline_randomized << ',' << r.baseline_randomized_stderr << ','
          << r.sampled_randomized_success << ',' << r.trials << '\n';
      }
    });
    return kExitOk;
  }
  throw ParseError("unknown experiment '" + a.kind + "'");
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const GeneratorArgs& g = a.gen;
  std::optional<ProblemFile> problem;
  if (a.kind == "community") {
    problem = ProblemFile{community_similarities(g.n, g.d, g.g, g.k, g.l), std::nullopt,
                          block_partition(g.n, g.g), std::nullopt};
  } else if (a.kind == "uniform") {
    RandomSource rng(a.seed);
    problem = ProblemFile{uniform_similarities(g.n, g.d, rng, g.k, g.l), std::nullopt,
                          std::nullopt, std::nullopt};
  } else if (a.kind == "bids") {
    if (a.bids.empty()) throw ParseError("generate bids needs --bids");
    const auto entries = read_bid_csv(a.bids);
    if (bids_are_levels(entries)) {
      int n = g.n, d = g.d;
      if (!g.problem.empty()) {
        const ProblemInstance base = read_problem(g.problem).instance;
        n = base.n_reviewers();
        d = base.n_papers();
      }
      problem = ProblemFile{bids_to_similarities(bids_to_levels(entries, n, d), g.k, g.l),
                            std::nullopt, std::nullopt, std::nullopt};
    } else {
      if (g.problem.empty()) throw ParseError("numeric bids need a base --problem");
      ProblemFile base = read_problem(g.problem);
      const ProblemInstance& inst = base.instance;
      const BidMatrix bids = bids_to_matrix(entries, inst.n_reviewers(), inst.n_papers());
      std::vector<int> rl(inst.reviewer_loads().begin(), inst.reviewer_loads().end());
      std::vector<int> pl(inst.paper_loads().begin(), inst.paper_loads().end());
      problem = ProblemFile{
          ProblemInstance(apply_bids(inst.similarities(), bids, a.gamma), rl, pl), base.caps,
          base.partition, base.bad};
    }
  } else {
    throw ParseError("unknown generator '" + a.kind + "'");
  }
  emit(a.out, out, [&](std::ostream& s) { s << problem_to_json(*problem).dump(1) << '\n'; });
  return kExitOk;
}

void add_generator_options(CLI::App* app, GeneratorArgs& g) {
  app->add_option("--n", g.n, "number of reviewers");
  app->add_option("--d", g.d, "number of papers");
  app->add_option("--g", g.g, "community block size");
  app->add_option("--k", g.k, "reviewer load");
  app->add_option("--l", g.l, "paper load");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized reviewer assignment with probability caps", "revassign"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "compute an optimal fractional assignment");
  s->add_option("problem", solve.problem, "problem JSON")->required();
  s->add_option("--mode", solve.mode)
      ->check(CLI::IsMember({"pairwise", "partition", "fair", "bad-pairwise", "bad-partition",
                             "bad-expectation"}));
  s->add_option("--q", solve.q, "cap value or JSON file");
  s->add_option("--partition", solve.partition, "partition JSON");
  s->add_option("--subset-cap", solve.subset_cap);
  s->add_option("--lambda", solve.lambda);
  s->add_option("--mu", solve.mu);
  s->add_option("--seed", solve.seed);
  s->add_option("--engine", solve.engine)->check(CLI::IsMember({"auto", "network", "dense"}));
  s->add_option("--out", solve.out, "F CSV path; the sidecar goes to <out>.json");

  SampleArgs samp;
  auto* sm = app.add_subcommand("sample", "draw deterministic assignments from F");
  sm->add_option("problem", samp.problem, "problem JSON")->required();
  sm->add_option("fractional", samp.fractional, "F CSV")->required();
  sm->add_option("--samples", samp.samples);
  sm->add_option("--partition", samp.partition, "partition JSON");
  sm->add_option("--seed", samp.seed);
  sm->add_option("--out", samp.out, "output file, or directory when --samples > 1");
  sm->add_flag("--marginals-check", samp.marginals_check);

  DecomposeArgs dec;
  auto* dc = app.add_subcommand("decompose", "write F as a lottery over assignments");
  dc->add_option("problem", dec.problem, "problem JSON")->required();
  dc->add_option("fractional", dec.fractional, "F CSV")->required();
  dc->add_option("--max-components", dec.max_components);
  dc->add_option("--out", dec.out);

  ExperimentArgs exp;
  auto* ex = app.add_subcommand("experiment", "synthetic experiments");
  ex->add_option("kind", exp.kind)
      ->required()
      ->check(CLI::IsMember({"tradeoff", "partition-sweep", "manipulation"}));
  ex->add_option("--generator", exp.gen.generator)
      ->check(CLI::IsMember({"community", "uniform", "problem"}));
  ex->add_option("--problem", exp.gen.problem);
  add_generator_options(ex, exp.gen);
  ex->add_option("--trials", exp.trials);
  ex->add_option("--seed", exp.seed);
  ex->add_option("--out", exp.out);
  ex->add_option("--engine", exp.engine)->check(CLI::IsMember({"auto", "network", "dense"}));
  ex->add_option("--q0-from", exp.q0_from);
  ex->add_option("--q0-to", exp.q0_to);
  ex->add_option("--q0-step", exp.q0_step);
  ex->add_option("--q0", exp.q0);
  ex->add_option("--cap-from", exp.cap_from);
  ex->add_option("--cap-to", exp.cap_to);
  ex->add_option("--cap-step", exp.cap_step);
  ex->add_option("--subset-size", exp.subset_size);
  ex->add_option("--ranks", exp.ranks)->delimiter(',');
  ex->add_option("--gamma", exp.gamma);
  ex->add_option("--samples-per-trial", exp.samples_per_trial);

  GenerateArgs gen;
  auto* gn = app.add_subcommand("generate", "write a problem JSON");
  gn->add_option("kind", gen.kind)
      ->required()
      ->check(CLI::IsMember({"community", "uniform", "bids"}));
  add_generator_options(gn, gen.gen);
  gn->add_option("--bids", gen.bids, "bid CSV");
  gn->add_option("--problem", gen.gen.problem, "base problem for numeric bids");
  gn->add_option("--gamma", gen.gamma);
  gn->add_option("--seed", gen.seed);
  gn->add_option("--out", gen.out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*s) return cmd_solve(solve, out);
    if (*sm) return cmd_sample(samp, out, err);
    if (*dc) return cmd_decompose(dec, out, err);
    if (*ex) return cmd_experiment(exp, out);
    if (*gn) return cmd_generate(gen, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const Infeasible& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitParse;
}

}  // namespace revassign
