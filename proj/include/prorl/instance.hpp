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

#ifndef PRORL_INSTANCE_HPP_
#define PRORL_INSTANCE_HPP_

#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace prorl {

using Time = std::int64_t;

/// Raised for malformed instance or BKS input. `line()` is 1-based, 0 when
/// the error is not tied to a single line (e.g. a truncated file).
class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    kMalformedInteger,
    kTokenCount,
    kMachineIndex,
    kDuration,
    kDimension,
    kDuplicateName,
    kMakespan,
    kMachineRevisit,
  };

  ParseError(Kind kind, int line, const std::string& what);

  Kind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }

 private:
  Kind kind_;
  int line_;
};

struct Operation {
  int machine = 0;
  Time duration = 1;

  friend bool operator==(const Operation&, const Operation&) = default;
};

/// An immutable job-shop problem. Each job is an ordered chain of operations;
/// a job visits each machine at most once.
class Instance {
 public:
  Instance(std::string name, int num_machines,
           std::vector<std::vector<Operation>> jobs);

  const std::string& name() const noexcept { return name_; }
  int num_jobs() const noexcept { return static_cast<int>(jobs_.size()); }
  int num_machines() const noexcept { return num_machines_; }
  const std::vector<std::vector<Operation>>& jobs() const noexcept {
    return jobs_;
  }
  const std::vector<Operation>& job(int j) const { return jobs_.at(j); }
  const Operation& op(int job, int index) const {
    return jobs_[job][index];
  }
  int job_length(int j) const noexcept {
    return static_cast<int>(jobs_[j].size());
  }
  int total_ops() const noexcept { return total_ops_; }

  /// Index of (job, 0) in a flat per-operation array.
  int op_offset(int job) const noexcept { return offsets_[job]; }

  /// Sum of durations of operations index..end of `job`.
  Time remaining_work(int job, int index) const noexcept {
    return suffix_work_[offsets_[job] + index];
  }

  Time machine_workload(int machine) const noexcept {
    return machine_load_[machine];
  }
  Time job_work(int job) const noexcept { return remaining_work(job, 0); }

  /// max(max machine workload, max job length); no schedule beats it.
  Time lower_bound() const noexcept;

  /// True when every job has exactly m operations, one per machine.
  bool is_rectangular() const noexcept;

  Instance with_name(std::string name) const;

  /// Same structure with every duration multiplied by `factor` (> 0).
  Instance scaled(Time factor) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.name_ == b.name_ && a.num_machines_ == b.num_machines_ &&
           a.jobs_ == b.jobs_;
  }

 private:
  std::string name_;
  int num_machines_;
  std::vector<std::vector<Operation>> jobs_;
  int total_ops_ = 0;
  std::vector<int> offsets_;
  std::vector<Time> suffix_work_;
  std::vector<Time> machine_load_;
};

enum class InstanceFormat { kStandard, kTaillard };

/// OR-Library "standard" format: a header line "n m", then one line per job
/// holding m (machine, duration) pairs with 0-based machines.
Instance parse_standard(std::istream& in, std::string name = {});
Instance parse_standard(std::string_view text, std::string name = {});

/// Taillard's layout: header "n m", an n x m duration matrix, then an n x m
/// machine matrix with 1-based machine indices.
Instance parse_taillard(std::istream& in, std::string name = {});
Instance parse_taillard(std::string_view text, std::string name = {});

/// Reads a file; the instance name defaults to the file stem.
Instance load_instance(const std::string& path, InstanceFormat format);

std::string to_standard(const Instance& instance);

InstanceFormat parse_format(std::string_view text);

/// Best-known makespans keyed by instance name.
class BksTable {
 public:
  BksTable() = default;

  void add(std::string name, Time makespan);
  bool contains(const std::string& name) const;
  /// Throws std::out_of_range for unknown names.
  Time at(const std::string& name) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::string, Time> entries_;
};

BksTable load_bks(std::istream& in);
BksTable load_bks(std::string_view text);
BksTable load_bks_file(const std::string& path);

}  // namespace prorl

#endif  // PRORL_INSTANCE_HPP_
