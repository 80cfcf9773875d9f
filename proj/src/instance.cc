// Copyright 2026 The prorl Authors
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

#include "prorl/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace prorl {

ParseError::ParseError(Kind kind, int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                  : what),
      kind_(kind),
      line_(line) {}

Instance::Instance(std::string name, int num_machines,
                   std::vector<std::vector<Operation>> jobs)
    : name_(std::move(name)), num_machines_(num_machines), jobs_(std::move(jobs)) {
  if (num_machines_ <= 0) throw std::invalid_argument("instance needs machines");
  if (jobs_.empty()) throw std::invalid_argument("instance needs jobs");
  machine_load_.assign(num_machines_, 0);
  offsets_.reserve(jobs_.size());
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    const auto& job = jobs_[j];
    if (job.empty()) {
      throw std::invalid_argument("job " + std::to_string(j) + " is empty");
    }
    std::vector<bool> seen(num_machines_, false);
    for (const Operation& op : job) {
      if (op.machine < 0 || op.machine >= num_machines_) {
        throw std::invalid_argument("machine index out of range in job " +
                                    std::to_string(j));
      }
      if (op.duration < 1) {
        throw std::invalid_argument("non-positive duration in job " +
                                    std::to_string(j));
      }
      if (seen[op.machine]) {
        throw std::invalid_argument("job " + std::to_string(j) +
                                    " visits machine " +
                                    std::to_string(op.machine) + " twice");
      }
      seen[op.machine] = true;
      machine_load_[op.machine] += op.duration;
    }
    offsets_.push_back(total_ops_);
    total_ops_ += static_cast<int>(job.size());
  }
  suffix_work_.assign(total_ops_, 0);
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    Time acc = 0;
    for (int k = static_cast<int>(jobs_[j].size()) - 1; k >= 0; --k) {
      acc += jobs_[j][k].duration;
      suffix_work_[offsets_[j] + k] = acc;
    }
  }
}

Time Instance::lower_bound() const noexcept {
  Time lb = *std::max_element(machine_load_.begin(), machine_load_.end());
  for (int j = 0; j < num_jobs(); ++j) lb = std::max(lb, job_work(j));
  return lb;
}

bool Instance::is_rectangular() const noexcept {
  return std::all_of(jobs_.begin(), jobs_.end(), [&](const auto& job) {
    return static_cast<int>(job.size()) == num_machines_;
  });
}

Instance Instance::with_name(std::string name) const {
  return Instance(std::move(name), num_machines_, jobs_);
}

Instance Instance::scaled(Time factor) const {
  if (factor < 1) throw std::invalid_argument("scale factor must be positive");
  auto jobs = jobs_;
  for (auto& job : jobs) {
    for (auto& op : job) op.duration *= factor;
  }
  return Instance(name_, num_machines_, std::move(jobs));
}

namespace {

struct Line {
  int number;
  std::vector<std::string_view> tokens;
};

// Owns the text; yields non-blank, non-comment lines split on whitespace.
class LineReader {
 public:
  explicit LineReader(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    text_ = buf.str();
    std::size_t pos = 0;
    int number = 0;
    while (pos <= text_.size()) {
      std::size_t end = text_.find('\n', pos);
      if (end == std::string::npos) end = text_.size();
      ++number;
      std::string_view line(text_.data() + pos, end - pos);
      auto first = line.find_first_not_of(" \t\r\f\v");
      if (first != std::string_view::npos && line[first] != '#') {
        Line parsed{number, {}};
        std::size_t i = 0;
        while (i < line.size()) {
          while (i < line.size() &&
                 std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
          }
          std::size_t start = i;
          while (i < line.size() &&
                 !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
          }
          if (i > start) parsed.tokens.push_back(line.substr(start, i - start));
        }
        lines_.push_back(std::move(parsed));
      }
      if (end == text_.size()) break;
      pos = end + 1;
    }
  }

  bool done() const { return next_ >= lines_.size(); }
  const Line& next() { return lines_[next_++]; }
  int last_line_number() const {
    return lines_.empty() ? 0 : lines_.back().number;
  }

 private:
  std::string text_;
  std::vector<Line> lines_;
  std::size_t next_ = 0;
};

long long to_int(std::string_view token, int line) {
  long long value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(ParseError::Kind::kMalformedInteger, line,
                     "malformed integer '" + std::string(token) + "'");
  }
  return value;
}

std::pair<int, int> read_header(LineReader& reader) {
  if (reader.done()) {
    throw ParseError(ParseError::Kind::kTokenCount, 0, "missing header line");
  }
  const Line& header = reader.next();
  if (header.tokens.size() != 2) {
    throw ParseError(ParseError::Kind::kTokenCount, header.number,
                     "header must hold exactly two integers 'n m'");
  }
  long long n = to_int(header.tokens[0], header.number);
  long long m = to_int(header.tokens[1], header.number);
  if (n < 1 || m < 1) {
    throw ParseError(ParseError::Kind::kDimension, header.number,
                     "job and machine counts must be positive");
  }
  return {static_cast<int>(n), static_cast<int>(m)};
}

void check_machine_unique(const std::vector<Operation>& job, int line) {
  std::vector<int> sorted;
  sorted.reserve(job.size());
  for (const auto& op : job) sorted.push_back(op.machine);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParseError(ParseError::Kind::kMachineRevisit, line,
                     "job visits a machine more than once");
  }
}

void expect_end(LineReader& reader, const char* what) {
  if (!reader.done()) {
    const Line& extra = reader.next();
    throw ParseError(ParseError::Kind::kDimension, extra.number,
                     std::string("unexpected data after ") + what);
  }
}

}  // namespace

Instance parse_standard(std::istream& in, std::string name) {
  LineReader reader(in);
  auto [n, m] = read_header(reader);
  std::vector<std::vector<Operation>> jobs;
  jobs.reserve(n);
  for (int j = 0; j < n; ++j) {
    if (reader.done()) {
      throw ParseError(ParseError::Kind::kDimension, reader.last_line_number(),
                       "expected " + std::to_string(n) + " job lines, found " +
                           std::to_string(j));
    }
    const Line& line = reader.next();
    if (line.tokens.size() != static_cast<std::size_t>(2 * m)) {
      throw ParseError(ParseError::Kind::kTokenCount, line.number,
                       "expected " + std::to_string(2 * m) + " tokens, found " +
                           std::to_string(line.tokens.size()));
    }
    std::vector<Operation> job;
    job.reserve(m);
    for (int k = 0; k < m; ++k) {
      long long machine = to_int(line.tokens[2 * k], line.number);
      long long duration = to_int(line.tokens[2 * k + 1], line.number);
      if (machine < 0 || machine >= m) {
        throw ParseError(ParseError::Kind::kMachineIndex, line.number,
                         "machine index " + std::to_string(machine) +
                             " outside [0, " + std::to_string(m) + ")");
      }
      if (duration < 1) {
        throw ParseError(ParseError::Kind::kDuration, line.number,
                         "duration must be >= 1, got " +
                             std::to_string(duration));
      }
      job.push_back({static_cast<int>(machine), duration});
    }
    check_machine_unique(job, line.number);
    jobs.push_back(std::move(job));
  }
  expect_end(reader, "the last job line");
  return Instance(std::move(name), m, std::move(jobs));
}

Instance parse_standard(std::string_view text, std::string name) {
  std::istringstream in{std::string(text)};
  return parse_standard(in, std::move(name));
}

Instance parse_taillard(std::istream& in, std::string name) {
  LineReader reader(in);
  auto [n, m] = read_header(reader);
  auto read_matrix = [&, n = n, m = m](const char* what) {
    std::vector<std::vector<std::pair<long long, int>>> rows;
    rows.reserve(n);
    for (int i = 0; i < n; ++i) {
      if (reader.done()) {
        throw ParseError(ParseError::Kind::kDimension,
                         reader.last_line_number(),
                         std::string(what) + " matrix has " +
                             std::to_string(i) + " rows, expected " +
                             std::to_string(n));
      }
      const Line& line = reader.next();
      if (line.tokens.size() != static_cast<std::size_t>(m)) {
        throw ParseError(ParseError::Kind::kDimension, line.number,
                         std::string(what) + " row has " +
                             std::to_string(line.tokens.size()) +
                             " entries, expected " + std::to_string(m));
      }
      std::vector<std::pair<long long, int>> row;
      row.reserve(m);
      for (auto token : line.tokens) {
        row.emplace_back(to_int(token, line.number), line.number);
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };
  auto times = read_matrix("times");
  auto machines = read_matrix("machines");
  expect_end(reader, "the machines matrix");

  std::vector<std::vector<Operation>> jobs(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) {
      auto [duration, dline] = times[j][k];
      auto [machine, mline] = machines[j][k];
      if (duration < 1) {
        throw ParseError(ParseError::Kind::kDuration, dline,
                         "duration must be >= 1, got " +
                             std::to_string(duration));
      }
      if (machine < 1 || machine > m) {
        throw ParseError(ParseError::Kind::kMachineIndex, mline,
                         "1-based machine index " + std::to_string(machine) +
                             " outside [1, " + std::to_string(m) + "]");
      }
      jobs[j].push_back({static_cast<int>(machine - 1), duration});
    }
    check_machine_unique(jobs[j], machines[j][0].second);
  }
  return Instance(std::move(name), m, std::move(jobs));
}

Instance parse_taillard(std::string_view text, std::string name) {
  std::istringstream in{std::string(text)};
  return parse_taillard(in, std::move(name));
}

Instance load_instance(const std::string& path, InstanceFormat format) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open instance file " + path);
  std::string name = std::filesystem::path(path).stem().string();
  return format == InstanceFormat::kStandard ? parse_standard(in, name)
                                             : parse_taillard(in, name);
}

std::string to_standard(const Instance& instance) {
  std::ostringstream out;
  if (!instance.is_rectangular()) {
    throw std::invalid_argument(
        "standard format requires every job to have m operations");
  }
  out << instance.num_jobs() << ' ' << instance.num_machines() << '\n';
  for (const auto& job : instance.jobs()) {
    for (std::size_t k = 0; k < job.size(); ++k) {
      if (k) out << ' ';
      out << job[k].machine << ' ' << job[k].duration;
    }
    out << '\n';
  }
  return out.str();
}

InstanceFormat parse_format(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "standard") return InstanceFormat::kStandard;
  if (lower == "taillard") return InstanceFormat::kTaillard;
  throw std::invalid_argument("unknown instance format '" + std::string(text) +
                              "' (expected standard|taillard)");
}

void BksTable::add(std::string name, Time makespan) {
  if (makespan < 1) {
    throw std::invalid_argument("makespan for " + name + " must be >= 1");
  }
  if (!entries_.emplace(name, makespan).second) {
    throw std::invalid_argument("duplicate BKS entry for " + name);
  }
}

bool BksTable::contains(const std::string& name) const {
  return entries_.count(name) > 0;
}

Time BksTable::at(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw std::out_of_range("no best-known solution for instance '" + name +
                            "'");
  }
  return it->second;
}

BksTable load_bks(std::istream& in) {
  BksTable table;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string_view line(raw);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    if (line.empty() || line.front() == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError(ParseError::Kind::kTokenCount, number,
                       "expected 'name,makespan'");
    }
    std::string name(line.substr(0, comma));
    std::string_view value = line.substr(comma + 1);
    while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.pop_back();
    if (name.empty()) {
      throw ParseError(ParseError::Kind::kTokenCount, number, "empty name");
    }
    long long makespan = to_int(value, number);
    if (makespan < 1) {
      throw ParseError(ParseError::Kind::kMakespan, number,
                       "makespan for " + name + " must be >= 1");
    }
    if (table.contains(name)) {
      throw ParseError(ParseError::Kind::kDuplicateName, number,
                       "duplicate entry for " + name);
    }
    table.add(name, makespan);
  }
  return table;
}

BksTable load_bks(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_bks(in);
}

BksTable load_bks_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open BKS file " + path);
  return load_bks(in);
}

}  // namespace prorl
