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

#include "revassign/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace revassign {

using nlohmann::json;

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double as_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ParseError(what + " must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ParseError(what + " must be an integer");
  return v.get<int>();
}

Matrix<double> parse_matrix(const json& v, const std::string& what) {
  if (!v.is_array() || v.empty()) throw ParseError(what + " must be a non-empty 2-D array");
  const std::size_t rows = v.size();
  if (!v[0].is_array()) throw ParseError(what + " must be a non-empty 2-D array");
  const std::size_t cols = v[0].size();
  Matrix<double> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!v[r].is_array() || v[r].size() != cols) {
      throw ParseError(what + " row " + std::to_string(r) + " has the wrong length");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = as_number(v[r][c], what);
  }
  return m;
}

std::vector<int> parse_loads(const json& v, int count, const std::string& what) {
  if (v.is_number()) return std::vector<int>(count, as_int(v, what));
  if (!v.is_array()) throw ParseError(what + " must be an integer or an array");
  if (static_cast<int>(v.size()) != count) {
    throw ParseError(what + " has " + std::to_string(v.size()) + " entries, expected " +
                     std::to_string(count));
  }
  std::vector<int> loads;
  for (const auto& e : v) loads.push_back(as_int(e, what));
  return loads;
}

json matrix_to_json(const Matrix<double>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

ProbabilityCap parse_caps(const json& value, int n_reviewers, int n_papers) {
  try {
    if (value.is_number()) {
      return ProbabilityCap::uniform(n_reviewers, n_papers, value.get<double>());
    }
    Matrix<double> caps = parse_matrix(value, "q");
    if (!caps.same_shape(n_reviewers, n_papers)) {
      throw ParseError("q must be " + std::to_string(n_reviewers) + " x " +
                       std::to_string(n_papers));
    }
    return ProbabilityCap(std::move(caps));
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("q: ") + e.what());
  }
}

ProbabilityCap caps_from_argument(const std::string& text, int n_reviewers, int n_papers) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec == std::errc() && ptr == end) return parse_caps(json(value), n_reviewers, n_papers);
  const json doc = read_json(text);
  return parse_caps(doc.is_object() && doc.contains("q") ? doc["q"] : doc, n_reviewers,
                    n_papers);
}

ReviewerPartition parse_partition(const json& value, int n_reviewers) {
  if (!value.is_array() || static_cast<int>(value.size()) != n_reviewers) {
    throw ParseError("partition must list a subset index for each of the " +
                     std::to_string(n_reviewers) + " reviewers");
  }
  std::vector<int> subsets;
  for (const auto& e : value) subsets.push_back(as_int(e, "partition"));
  try {
    return ReviewerPartition(std::move(subsets));
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("partition: ") + e.what());
  }
}

ReviewerPartition read_partition(const std::string& path, int n_reviewers) {
  const json doc = read_json(path);
  return parse_partition(doc.is_object() && doc.contains("partition") ? doc["partition"] : doc,
                         n_reviewers);
}

ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) throw ParseError("problem file must hold a JSON object");
  for (const char* key : {"similarities", "reviewer_load", "paper_load"}) {
    if (!doc.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
  }
  Matrix<double> s = parse_matrix(doc["similarities"], "similarities");
  const int n = static_cast<int>(s.rows());
  const int d = static_cast<int>(s.cols());
  std::vector<int> reviewer_load = parse_loads(doc["reviewer_load"], n, "reviewer_load");
  std::vector<int> paper_load = parse_loads(doc["paper_load"], d, "paper_load");
  ProblemFile problem{
      ProblemInstance(std::move(s), std::move(reviewer_load), std::move(paper_load)), std::nullopt,
      std::nullopt, std::nullopt};
  if (doc.contains("q")) problem.caps = parse_caps(doc["q"], n, d);
  if (doc.contains("partition")) problem.partition = parse_partition(doc["partition"], n);
  if (doc.contains("w")) {
    Matrix<double> w = parse_matrix(doc["w"], "w");
    if (!w.same_shape(n, d)) throw ParseError("w must match the similarity shape");
    try {
      problem.bad = BadAssignmentProbabilities(std::move(w));
    } catch (const InvalidInput& e) {
      throw ParseError(std::string("w: ") + e.what());
    }
  }
  return problem;
}

ProblemFile read_problem(const std::string& path) { return parse_problem(read_json(path)); }

json problem_to_json(const ProblemFile& problem) {
  const ProblemInstance& inst = problem.instance;
  json doc;
  doc["similarities"] = matrix_to_json(inst.similarities());
  const auto rl = inst.reviewer_loads();
  const auto pl = inst.paper_loads();
  doc["reviewer_load"] = std::vector<int>(rl.begin(), rl.end());
  doc["paper_load"] = std::vector<int>(pl.begin(), pl.end());
  if (problem.caps) doc["q"] = matrix_to_json(problem.caps->matrix());
  if (problem.partition) {
    const auto idx = problem.partition->subset_indices();
    doc["partition"] = std::vector<int>(idx.begin(), idx.end());
  }
  if (problem.bad) doc["w"] = matrix_to_json(problem.bad->matrix());
  return doc;
}

void write_problem(const std::string& path, const ProblemFile& problem) {
  write_json(path, problem_to_json(problem));
}

void write_matrix_csv(std::ostream& out, const Matrix<double>& matrix) {
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_number(matrix(r, c));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const Matrix<double>& matrix) {
  std::ofstream out = open_output(path);
  write_matrix_csv(out, matrix);
}

Matrix<double> read_matrix_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::size_t count = 0;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const std::string t = trim(field);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ParseError("bad number '" + t + "' on CSV row " + std::to_string(rows + 1));
      }
      values.push_back(v);
      ++count;
    }
    if (rows == 0) cols = count;
    else if (count != cols) {
      throw ParseError("CSV row " + std::to_string(rows + 1) + " has " + std::to_string(count) +
                       " fields, expected " + std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0 || cols == 0) throw ParseError("empty CSV matrix");
  Matrix<double> m(rows, cols);
  std::copy(values.begin(), values.end(), m.values().begin());
  return m;
}

Matrix<double> read_matrix_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_matrix_csv(in);
}

json assignment_to_json(const DeterministicAssignment& assignment) {
  return json{{"assignment", assignment.paper_lists()}};
}

DeterministicAssignment assignment_from_json(const json& doc, int n_reviewers) {
  const json& lists = doc.is_object() && doc.contains("assignment") ? doc["assignment"] : doc;
  if (!lists.is_array()) throw ParseError("assignment must be an array of reviewer lists");
  std::vector<std::vector<int>> papers;
  for (const auto& list : lists) {
    if (!list.is_array()) throw ParseError("assignment must be an array of reviewer lists");
    std::vector<int> reviewers;
    for (const auto& r : list) reviewers.push_back(as_int(r, "reviewer index"));
    papers.push_back(std::move(reviewers));
  }
  try {
    return DeterministicAssignment::from_paper_lists(n_reviewers, papers);
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("assignment: ") + e.what());
  }
}

json lottery_to_json(const AssignmentDistribution& lottery) {
  json out = json::array();
  for (const auto& c : lottery.components()) {
    out.push_back({{"weight", c.weight}, {"assignment", c.assignment.paper_lists()}});
  }
  return out;
}

std::vector<BidEntry> read_bid_csv(std::istream& in) {
  std::vector<BidEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::stringstream fields(line);
    std::string a, b, c, extra;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') ||
        !std::getline(fields, c, ',') || std::getline(fields, extra, ',')) {
      throw ParseError("bid CSV line " + std::to_string(line_no) + " needs three fields");
    }
    a = trim(a);
    b = trim(b);
    c = trim(c);
    if (line_no == 1 && a == "reviewer_index") continue;
    BidEntry e{};
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), e.reviewer);
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), e.paper);
    if (a.empty() || b.empty() || ra.ec != std::errc() || ra.ptr != a.data() + a.size() ||
        rb.ec != std::errc() || rb.ptr != b.data() + b.size()) {
      throw ParseError("bid CSV line " + std::to_string(line_no) + " has a bad index");
    }
    e.bid = c;
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<BidEntry> read_bid_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_bid_csv(in);
}

namespace {

void check_bid_index(const BidEntry& e, int n, int d) {
  if (e.reviewer < 0 || e.reviewer >= n || e.paper < 0 || e.paper >= d) {
    throw ParseError("bid (" + std::to_string(e.reviewer) + "," + std::to_string(e.paper) +
                     ") is out of range");
  }
}

}  // namespace

BidMatrix bids_to_matrix(const std::vector<BidEntry>& entries, int n_reviewers, int n_papers) {
  BidMatrix bids(n_reviewers, n_papers, 0);
  for (const auto& e : entries) {
    check_bid_index(e, n_reviewers, n_papers);
    if (e.bid == "1" || e.bid == "+1") bids(e.reviewer, e.paper) = 1;
    else if (e.bid == "-1") bids(e.reviewer, e.paper) = -1;
    else if (e.bid == "0") bids(e.reviewer, e.paper) = 0;
    else throw ParseError("bid '" + e.bid + "' is not -1, 0 or 1");
  }
  return bids;
}

Matrix<BidLevel> bids_to_levels(const std::vector<BidEntry>& entries, int n_reviewers,
                                int n_papers) {
  Matrix<BidLevel> levels(n_reviewers, n_papers, BidLevel::kNoResponse);
  for (const auto& e : entries) {
    check_bid_index(e, n_reviewers, n_papers);
    try {
      levels(e.reviewer, e.paper) = parse_bid_level(e.bid);
    } catch (const InvalidInput& err) {
      throw ParseError(err.what());
    }
  }
  return levels;
}

bool bids_are_levels(const std::vector<BidEntry>& entries) {
  for (const auto& e : entries) {
    if (e.bid != "yes" && e.bid != "maybe" && e.bid != "no_response") return false;
  }
  return !entries.empty();
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve,
                     const std::string& x_name) {
  out << x_name << ",mean_percent,stderr_percent,trials,feasible_trials\n";
  for (const auto& p : curve) {
    out << format_number(p.x) << ',' << format_number(p.mean_percent) << ','
        << format_number(p.stderr_percent) << ',' << p.trials << ',' << p.feasible_trials << '\n';
  }
}

json read_json(const std::string& path) {
  std::ifstream in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out = open_output(path);
  out << doc.dump(1) << '\n';
}

}  // namespace revassign
