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
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "revassign/cli.hpp"
#include "revassign/io.hpp"
#include "revassign/lp.hpp"

namespace revassign {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("revassign_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

TEST_CASE("problem JSON") {
  SUBCASE("scalar and array loads, caps, partition and w") {
    const auto problem = parse_problem(json::parse(R"({
      "similarities": [[0.9, 0.1], [0.3, 0.7], [0.5, 0.5]],
      "reviewer_load": 2,
      "paper_load": [1, 2],
      "q": [[1, 0.5], [0.5, 1], [1, 1]],
      "partition": [0, 0, 1],
      "w": [[0, 0.5], [1, 0], [0, 0]]
    })"));
    CHECK(problem.instance.n_reviewers() == 3);
    CHECK(problem.instance.reviewer_load(2) == 2);
    CHECK(problem.instance.paper_load(1) == 2);
    REQUIRE(problem.caps.has_value());
    CHECK((*problem.caps)(0, 1) == 0.5);
    REQUIRE(problem.partition.has_value());
    CHECK(problem.partition->n_subsets() == 2);
    REQUIRE(problem.bad.has_value());
    CHECK((*problem.bad)(1, 0) == 1.0);
    const auto again = parse_problem(problem_to_json(problem));
    CHECK(again.instance.similarities() == problem.instance.similarities());
    CHECK(again.caps->matrix() == problem.caps->matrix());
  }
  SUBCASE("scalar cap") {
    const auto problem = parse_problem(
        json::parse(R"({"similarities": [[1]], "reviewer_load": 1, "paper_load": 1, "q": 0.5})"));
    CHECK((*problem.caps)(0, 0) == 0.5);
  }
  SUBCASE("malformed content") {
    CHECK_THROWS_AS(parse_problem(json::parse(R"({"reviewer_load": 1, "paper_load": 1})")),
                    ParseError);
    CHECK_THROWS_AS(parse_problem(json::parse(
                        R"({"similarities": [[1, 2], [3]], "reviewer_load": 1, "paper_load": 1})")),
                    ParseError);
    CHECK_THROWS_AS(parse_problem(json::parse(
                        R"({"similarities": [[1]], "reviewer_load": [1, 2], "paper_load": 1})")),
                    ParseError);
    CHECK_THROWS_AS(parse_problem(json::parse(
                        R"({"similarities": [[1]], "reviewer_load": 1, "paper_load": 1, "q": 2})")),
                    ParseError);
    CHECK_THROWS_AS(read_problem("/nonexistent/problem.json"), ParseError);
  }
}

TEST_CASE("matrix CSV keeps 12 significant digits") {
  const Matrix<double> m{{0.123456789012345, 1.0, 0.0}, {1.0 / 3.0, 2.0 / 3.0, 1e-13}};
  std::stringstream s;
  write_matrix_csv(s, m);
  CHECK(s.str().find("0.123456789012") != std::string::npos);
  const Matrix<double> back = read_matrix_csv(s);
  REQUIRE(back.same_shape(m));
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(std::abs(back.values()[i] - m.values()[i]) <= 1e-12);
  }
  std::stringstream bad("1,2\n3\n");
  CHECK_THROWS_AS(read_matrix_csv(bad), ParseError);
  std::stringstream junk("1,x\n");
  CHECK_THROWS_AS(read_matrix_csv(junk), ParseError);
}

TEST_CASE("assignment and lottery JSON") {
  const auto m = DeterministicAssignment::from_paper_lists(3, {{0, 2}, {1}});
  const json doc = assignment_to_json(m);
  CHECK(doc.dump() == R"({"assignment":[[0,2],[1]]})");
  CHECK(assignment_from_json(doc, 3) == m);
  const AssignmentDistribution lottery({{1.0, m}});
  CHECK(lottery_to_json(lottery).dump() == R"([{"assignment":[[0,2],[1]],"weight":1.0}])");
}

TEST_CASE("bid CSV") {
  std::stringstream signed_bids("reviewer_index,paper_index,bid\n0,1,1\n1,0,-1\n1,1,0\n");
  const auto entries = read_bid_csv(signed_bids);
  REQUIRE(entries.size() == 3);
  CHECK_FALSE(bids_are_levels(entries));
  const BidMatrix b = bids_to_matrix(entries, 2, 2);
  CHECK(b(0, 1) == 1);
  CHECK(b(1, 0) == -1);
  CHECK(b(0, 0) == 0);
  std::stringstream words("0,0,yes\n1,1,maybe\n");
  const auto level_entries = read_bid_csv(words);
  CHECK(bids_are_levels(level_entries));
  const auto levels = bids_to_levels(level_entries, 2, 2);
  CHECK(levels(0, 0) == BidLevel::kYes);
  CHECK(levels(1, 1) == BidLevel::kMaybe);
  CHECK(levels(0, 1) == BidLevel::kNoResponse);
  CHECK_THROWS_AS(bids_to_matrix(level_entries, 2, 2), ParseError);
  CHECK_THROWS_AS(bids_to_matrix(entries, 1, 1), ParseError);
  std::stringstream short_line("0,1\n");
  CHECK_THROWS_AS(read_bid_csv(short_line), ParseError);
}

TEST_CASE("curve CSV") {
  std::stringstream s;
  write_curve_csv(s, {{0.5, 100.0, 0.0, 10, 10}}, "q0");
  CHECK(s.str() == "q0,mean_percent,stderr_percent,trials,feasible_trials\n0.5,100,0,10,10\n");
}

TEST_CASE("cli solve") {
  TempDir dir;
  SUBCASE("pairwise at q 1 reaches the exhaustive optimum") {
    RandomSource rng(1);
    Matrix<double> s(4, 3);
    for (double& v : s.values()) v = rng.uniform();
    const ProblemFile problem{ProblemInstance::with_uniform_loads(s, 2, 2), {}, {}, {}};
    write_problem(dir / "p.json", problem);
    const CliRun r = run({"solve", dir / "p.json", "--q", "1", "--out", dir / "F.csv"});
    REQUIRE(r.code == kExitOk);
    const json sidecar = read_json(dir / "F.csv.json");
    CHECK(sidecar["objective"].get<double>() ==
          doctest::Approx(*oracle::best_assignment_similarity(problem.instance)));
    CHECK(sidecar["status"] == "optimal");
    CHECK(sidecar.contains("wall_time_seconds"));
    CHECK(sidecar.contains("fairness"));
    CHECK(read_matrix_csv(dir / "F.csv").same_shape(4, 3));
  }
  SUBCASE("low cap with few reviewers exits 2 and names a paper") {
    const ProblemFile problem{
        ProblemInstance::with_uniform_loads(Matrix<double>(20, 2, 1.0), 3, 3), {}, {}, {}};
    write_problem(dir / "p.json", problem);
    const CliRun r = run({"solve", dir / "p.json", "--q", "0.1", "--out", dir / "F.csv"});
    CHECK(r.code == kExitInfeasible);
    CHECK(r.err.find("paper") != std::string::npos);
  }
  SUBCASE("fair mode on one paper matches pairwise") {
    const ProblemFile problem{
        ProblemInstance::with_uniform_loads({{0.9}, {0.4}, {0.8}, {0.1}}, 1, 2), {}, {}, {}};
    write_problem(dir / "p.json", problem);
    REQUIRE(run({"solve", dir / "p.json", "--q", "0.6", "--out", dir / "a.csv"}).code == 0);
    REQUIRE(run({"solve", dir / "p.json", "--q", "0.6", "--mode", "fair", "--out", dir / "b.csv"})
                .code == 0);
    CHECK(read_json(dir / "a.csv.json")["objective"].get<double>() ==
          doctest::Approx(read_json(dir / "b.csv.json")["objective"].get<double>()));
  }
  SUBCASE("modes that need extra data") {
    const ProblemFile problem{ProblemInstance::with_uniform_loads({{1.0}, {1.0}}, 1, 1),
                              {}, ReviewerPartition({0, 1}),
                              BadAssignmentProbabilities(Matrix<double>{{1.0}, {0.0}})};
    write_problem(dir / "p.json", problem);
    CHECK(run({"solve", dir / "p.json", "--mode", "partition"}).code == 0);
    CHECK(run({"solve", dir / "p.json", "--mode", "bad-pairwise", "--lambda", "0.5"}).code == 0);
    CHECK(run({"solve", dir / "p.json", "--mode", "bad-partition", "--lambda", "0.5"}).code == 0);
    CHECK(run({"solve", dir / "p.json", "--mode", "bad-expectation", "--lambda", "0.5", "--mu",
               "1"}).code == 0);
    CHECK(run({"solve", dir / "p.json", "--mode", "bad-expectation"}).code == kExitParse);
    const ProblemFile plain{ProblemInstance::with_uniform_loads({{1.0}, {1.0}}, 1, 1), {}, {}, {}};
    write_problem(dir / "plain.json", plain);
    CHECK(run({"solve", dir / "plain.json", "--mode", "bad-pairwise"}).code == kExitParse);
  }
  SUBCASE("parse errors exit 1") {
    write_text(dir / "broken.json", "{ not json");
    CHECK(run({"solve", dir / "broken.json"}).code == kExitParse);
    CHECK(run({"solve"}).code == kExitParse);
    CHECK(run({"frobnicate"}).code == kExitParse);
    CHECK(run({"solve", dir / "broken.json", "--mode", "nope"}).code == kExitParse);
  }
}

TEST_CASE("cli sample") {
  TempDir dir;
  const ProblemFile problem{ProblemInstance::with_uniform_loads({{0.9}, {0.3}}, 1, 1), {}, {}, {}};
  write_problem(dir / "p.json", problem);
  SUBCASE("integral F comes back unchanged") {
    write_text(dir / "F.csv", "0\n1\n");
    REQUIRE(run({"sample", dir / "p.json", dir / "F.csv", "--out", dir / "m.json"}).code == 0);
    CHECK(read_json(dir / "m.json") == json::parse(R"({"assignment": [[1]]})"));
  }
  SUBCASE("same seed gives identical files") {
    write_text(dir / "F.csv", "0.5\n0.5\n");
    for (const char* name : {"a", "b"}) {
      REQUIRE(run({"sample", dir / "p.json", dir / "F.csv", "--samples", "5", "--seed", "9",
                   "--out", dir / name})
                  .code == 0);
    }
    for (int i = 0; i < 5; ++i) {
      char file[32];
      std::snprintf(file, sizeof file, "sample_%05d.json", i);
      const std::string a = slurp(dir / (std::string("a/") + file));
      CHECK_FALSE(a.empty());
      CHECK(a == slurp(dir / (std::string("b/") + file)));
    }
  }
  SUBCASE("marginals check") {
    write_text(dir / "F.csv", "0.5\n0.5\n");
    const CliRun ok =
        run({"sample", dir / "p.json", dir / "F.csv", "--samples", "10000", "--marginals-check"});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("max_marginal_deviation=") != std::string::npos);
    // Ten draws cannot match one half to within 0.03.
    const CliRun coarse =
        run({"sample", dir / "p.json", dir / "F.csv", "--samples", "10", "--marginals-check"});
    CHECK(coarse.code == kExitCheckFailed);
  }
  SUBCASE("invalid F exits 2") {
    write_text(dir / "F.csv", "0.5\n0.2\n");
    CHECK(run({"sample", dir / "p.json", dir / "F.csv"}).code == kExitInfeasible);
    write_text(dir / "wide.csv", "0.5,0.5\n0.5,0.5\n");
    CHECK(run({"sample", dir / "p.json", dir / "wide.csv"}).code == kExitInfeasible);
  }
  SUBCASE("partition switches to the guarded sampler") {
    const ProblemFile two{ProblemInstance::with_uniform_loads(Matrix<double>(4, 1, 1.0), 1, 2),
                          {}, ReviewerPartition({0, 0, 1, 1}), {}};
    write_problem(dir / "two.json", two);
    write_text(dir / "F.csv", "0.5\n0.5\n0.5\n0.5\n");
    write_text(dir / "part.json", "[0, 0, 1, 1]");
    for (int seed = 0; seed < 50; ++seed) {
      const CliRun r = run({"sample", dir / "two.json", dir / "F.csv", "--partition",
                            dir / "part.json", "--seed", std::to_string(seed)});
      REQUIRE(r.code == 0);
      const auto m = assignment_from_json(json::parse(r.out), 4);
      CHECK(same_subset_pair_count(m, ReviewerPartition({0, 0, 1, 1})) == 0);
    }
  }
}

TEST_CASE("cli decompose") {
  TempDir dir;
  const ProblemFile problem{ProblemInstance::with_uniform_loads({{0.9}, {0.3}}, 1, 1), {}, {}, {}};
  write_problem(dir / "p.json", problem);
  SUBCASE("two halves") {
    write_text(dir / "F.csv", "0.5\n0.5\n");
    const CliRun r = run({"decompose", dir / "p.json", dir / "F.csv", "--out", dir / "l.json"});
    REQUIRE(r.code == 0);
    const json lottery = read_json(dir / "l.json");
    REQUIRE(lottery.size() == 2);
    CHECK(lottery[0]["weight"].get<double>() == doctest::Approx(0.5));
    CHECK(lottery[1]["weight"].get<double>() == doctest::Approx(0.5));
    CHECK(r.err.find("residual=0") != std::string::npos);
  }
  SUBCASE("integral input") {
    write_text(dir / "F.csv", "1\n0\n");
    const CliRun r = run({"decompose", dir / "p.json", dir / "F.csv"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out).size() == 1);
  }
  SUBCASE("component guard") {
    write_text(dir / "F.csv", "0.5\n0.5\n");
    CHECK(run({"decompose", dir / "p.json", dir / "F.csv", "--max-components", "1"}).code ==
          kExitInternal);
  }
}

TEST_CASE("cli round trip from solve to sample and decompose") {
  TempDir dir;
  REQUIRE(run({"generate", "uniform", "--n", "15", "--d", "12", "--seed", "4", "--out",
               dir / "p.json"})
              .code == 0);
  REQUIRE(run({"solve", dir / "p.json", "--q", "0.4", "--out", dir / "F.csv"}).code == 0);
  const CliRun s = run({"sample", dir / "p.json", dir / "F.csv", "--samples", "3000",
                        "--marginals-check"});
  CHECK(s.code == 0);
  const CliRun d = run({"decompose", dir / "p.json", dir / "F.csv", "--out", dir / "l.json"});
  CHECK(d.code == 0);
  const auto problem = read_problem(dir / "p.json");
  const FractionalAssignment f(read_matrix_csv(dir / "F.csv"));
  CHECK(validate_fractional(f, problem.instance).ok());
}

TEST_CASE("cli experiments and generators") {
  TempDir dir;
  SUBCASE("community tradeoff checkpoints") {
    const CliRun six = run({"experiment", "tradeoff", "--generator", "community", "--n", "360",
                            "--d", "360", "--g", "6", "--q0-from", "0.5", "--q0-to", "0.5",
                            "--trials", "1"});
    REQUIRE(six.code == 0);
    CHECK(six.out.find("\n0.5,100,") != std::string::npos);
    const CliRun three = run({"experiment", "tradeoff", "--generator", "community", "--n",
                              "360", "--d", "360", "--g", "3", "--q0-from", "0.5", "--q0-to",
                              "0.5", "--trials", "1"});
    REQUIRE(three.code == 0);
    CHECK(three.out.find("\n0.5,50,") != std::string::npos);
  }
  SUBCASE("partition sweep and manipulation emit one row per point") {
    const CliRun sweep = run({"experiment", "partition-sweep", "--generator", "uniform", "--n",
                              "40", "--d", "40", "--subset-size", "8", "--trials", "2"});
    REQUIRE(sweep.code == 0);
    CHECK(std::count(sweep.out.begin(), sweep.out.end(), '\n') == 12);
    const CliRun manip = run({"experiment", "manipulation", "--n", "40", "--d", "40", "--trials",
                              "3", "--ranks", "1,5"});
    REQUIRE(manip.code == 0);
    CHECK(std::count(manip.out.begin(), manip.out.end(), '\n') == 3);
  }
  SUBCASE("bid files become problems") {
    write_text(dir / "bids.csv", "reviewer_index,paper_index,bid\n0,0,yes\n1,1,maybe\n");
    REQUIRE(run({"generate", "bids", "--bids", dir / "bids.csv", "--n", "8", "--d", "2", "--k",
                 "1", "--l", "3", "--out", dir / "p.json"})
                .code == 0);
    const auto problem = read_problem(dir / "p.json");
    CHECK(problem.instance.similarity(0, 0) == 4.0);
    CHECK(problem.instance.similarity(1, 1) == 2.0);
    CHECK(problem.instance.similarity(2, 0) == 1.0);
    write_text(dir / "signed.csv", "0,0,1\n1,1,-1\n");
    REQUIRE(run({"generate", "bids", "--bids", dir / "signed.csv", "--problem", dir / "p.json",
                 "--gamma", "2", "--out", dir / "q.json"})
                .code == 0);
    const auto shifted = read_problem(dir / "q.json");
    CHECK(shifted.instance.similarity(0, 0) == 8.0);
    CHECK(shifted.instance.similarity(1, 1) == 1.0);
  }
  SUBCASE("community generator carries its partition") {
    REQUIRE(run({"generate", "community", "--n", "12", "--d", "12", "--g", "3", "--out",
                 dir / "c.json"})
                .code == 0);
    const auto problem = read_problem(dir / "c.json");
    REQUIRE(problem.partition.has_value());
    CHECK(problem.partition->n_subsets() == 4);
    CHECK(run({"solve", dir / "c.json", "--mode", "partition", "--q", "0.5", "--subset-cap",
               "1"}).code == 0);
  }
}

}  // namespace
}  // namespace revassign
