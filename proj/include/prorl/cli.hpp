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

#ifndef PRORL_CLI_HPP_
#define PRORL_CLI_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prorl/heuristic.hpp"
#include "prorl/instance.hpp"
#include "prorl/search.hpp"

namespace prorl::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitInternal = 4,
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Any failure to read, parse, or write a file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunReport {
  std::string instance;
  std::string method;  // rule name, "random", or "prorl"
  double makespan = 0.0;
  std::optional<double> gap;  // present iff a BKS entry existed
  std::uint64_t seed = 0;
  double seconds = 0.0;
  long long episodes = 0;
};

struct InstanceSource {
  std::string path;
  InstanceFormat format = InstanceFormat::kStandard;
};

/// Applies "key=value" to the config; throws UsageError for unknown keys or
/// unparsable values.
void apply_override(SearchConfig& config, std::string_view assignment);

/// Worker count from PRORL_WORKERS, else 0 (hardware concurrency).
int workers_from_env();

Instance read_instance(const InstanceSource& source);
std::optional<BksTable> read_bks(const std::optional<std::string>& path);

RunReport cmd_pdr(const InstanceSource& source, Heuristic rule,
                  const std::optional<BksTable>& bks,
                  const std::optional<std::string>& trace_path = std::nullopt);

/// Uniformly random rule at every decision; mean makespan over `episodes`.
RunReport cmd_random(const InstanceSource& source, std::uint64_t seed,
                     int episodes, const std::optional<BksTable>& bks,
                     const std::optional<std::string>& trace_path = std::nullopt);

struct TrainOutcome {
  RunReport report;
  SearchState state;
};

/// Trains, writes the policy to `out_path` (when given) and the per-generation
/// log to `log_path` (when given).
TrainOutcome cmd_train(const InstanceSource& source, const SearchConfig& config,
                       const std::optional<BksTable>& bks,
                       const std::optional<std::string>& out_path,
                       const std::optional<std::string>& log_path = std::nullopt,
                       const std::optional<std::string>& trace_path = std::nullopt);

RunReport cmd_eval(const std::string& policy_path, const InstanceSource& source,
                   const std::optional<BksTable>& bks,
                   const std::optional<std::string>& trace_path = std::nullopt);

struct BenchFailure {
  std::string path;
  std::string message;
  int exit_code = kExitIo;
};

struct BenchResult {
  std::vector<std::string> methods;
  std::vector<std::string> instances;
  std::vector<RunReport> runs;  // ordered by instance, method, seed
  std::vector<BenchFailure> failures;
};

/// Every method x seed x instance under `directory`. PDR methods ignore
/// seeds and run once; "random" and "prorl" run once per seed.
BenchResult cmd_bench(const std::string& directory, InstanceFormat format,
                      const std::vector<std::string>& methods,
                      const SearchConfig& config,
                      const std::vector<std::uint64_t>& seeds,
                      const std::optional<BksTable>& bks, int random_episodes = 1);

/// Per-instance mean gaps by method, plus an mPDR column when any rule ran
/// and a closing mean row.
void print_bench_table(std::ostream& out, const BenchResult& result);

/// "instance,method,seed,makespan,gap,episodes"; gap blank without BKS.
/// Timing is left out so repeated runs give identical files.
void write_reports_csv(std::ostream& out, const std::vector<RunReport>& reports);

void print_report(std::ostream& out, const RunReport& report);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace prorl::cli

#endif  // PRORL_CLI_HPP_
