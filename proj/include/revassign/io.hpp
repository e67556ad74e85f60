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

// File formats: problem JSON, fractional-assignment CSV, assignment and
// lottery JSON, bid CSV and curve CSV.

#ifndef REVASSIGN_IO_HPP_
#define REVASSIGN_IO_HPP_

#include <json.hpp>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "revassign/model.hpp"
#include "revassign/simgen.hpp"

namespace revassign {

// Malformed or unreadable input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemFile {
  ProblemInstance instance;
  std::optional<ProbabilityCap> caps;
  std::optional<ReviewerPartition> partition;
  std::optional<BadAssignmentProbabilities> bad;
};

// Keys: similarities, reviewer_load, paper_load, and optionally q, partition
// and w. Throws ParseError on malformed content.
ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile read_problem(const std::string& path);
nlohmann::json problem_to_json(const ProblemFile& problem);
void write_problem(const std::string& path, const ProblemFile& problem);

// A scalar cap or an n x d matrix of caps.
ProbabilityCap parse_caps(const nlohmann::json& value, int n_reviewers, int n_papers);
// `text` is either a number or the path of a JSON file holding one.
ProbabilityCap caps_from_argument(const std::string& text, int n_reviewers, int n_papers);
ReviewerPartition parse_partition(const nlohmann::json& value, int n_reviewers);
ReviewerPartition read_partition(const std::string& path, int n_reviewers);

// One row per reviewer, one column per paper, 12 significant digits.
void write_matrix_csv(std::ostream& out, const Matrix<double>& matrix);
void write_matrix_csv(const std::string& path, const Matrix<double>& matrix);
Matrix<double> read_matrix_csv(std::istream& in);
Matrix<double> read_matrix_csv(const std::string& path);

// {"assignment": [[reviewers of paper 0], ...]}
nlohmann::json assignment_to_json(const DeterministicAssignment& assignment);
DeterministicAssignment assignment_from_json(const nlohmann::json& doc, int n_reviewers);

// [{"weight": w, "assignment": [[...], ...]}, ...]
nlohmann::json lottery_to_json(const AssignmentDistribution& lottery);

struct BidEntry {
  int reviewer;
  int paper;
  std::string bid;
};

// reviewer_index,paper_index,bid with an optional header line.
std::vector<BidEntry> read_bid_csv(std::istream& in);
std::vector<BidEntry> read_bid_csv(const std::string& path);
// Bids -1, 0 or 1; missing pairs are 0.
BidMatrix bids_to_matrix(const std::vector<BidEntry>& entries, int n_reviewers, int n_papers);
// Bids yes, maybe or no_response; missing pairs are no_response.
Matrix<BidLevel> bids_to_levels(const std::vector<BidEntry>& entries, int n_reviewers,
                                int n_papers);
// True when every bid is a level word rather than a number.
bool bids_are_levels(const std::vector<BidEntry>& entries);

// Header "<x_name>,mean_percent,stderr_percent,trials,feasible_trials".
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve,
                     const std::string& x_name);

nlohmann::json read_json(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace revassign

#endif  // REVASSIGN_IO_HPP_
