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

#include "prorl/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "prorl/dsl.hpp"
#include "prorl/pdr.hpp"
#include "prorl/sim.hpp"

namespace prorl::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw UsageError("bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

std::optional<Time> lookup_bks(const std::optional<BksTable>& bks,
                               const std::string& name) {
  if (bks && bks->contains(name)) return bks->at(name);
  return std::nullopt;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void write_trace(const std::optional<std::string>& path, const ScheduleResult& result) {
  if (!path) return;
  auto out = open_output(*path);
  write_trace_csv(out, result);
  if (!out) throw IoError("failed writing " + *path);
}

std::string format_gap(const std::optional<double>& gap) {
  if (!gap) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", *gap * 100.0);
  return buf;
}

std::string format_makespan(double makespan) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", makespan);
  return buf;
}

template <typename Fn>
void run_parallel(std::size_t count, int workers, Fn&& fn) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp<int>(workers, 1, static_cast<int>(std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

void apply_override(SearchConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw UsageError("--set expects key=value, got '" + std::string(assignment) + "'");
  }
  const std::string_view key = assignment.substr(0, eq);
  const std::string_view value = assignment.substr(eq + 1);
  if (key == "bo.length_scale") {
    config.bo.kernel.length_scale = parse_number<double>(key, value);
  } else if (key == "bo.signal_var") {
    config.bo.kernel.signal_var = parse_number<double>(key, value);
  } else if (key == "bo.jitter") {
    config.bo.kernel.jitter = parse_number<double>(key, value);
  } else if (key == "bo.beta") {
    config.bo.beta = parse_number<double>(key, value);
  } else if (key == "bo.candidates") {
    config.bo.candidates = parse_number<int>(key, value);
  } else if (key == "bo.init_points") {
    config.bo.init_points = parse_number<int>(key, value);
  } else if (key == "bo.iterations") {
    config.bo.iterations = parse_number<int>(key, value);
  } else if (key == "search.lambda") {
    config.lambda = parse_number<int>(key, value);
  } else if (key == "search.mutation_rate") {
    config.mutation_rate = parse_number<double>(key, value);
  } else if (key == "search.max_extra_mutations") {
    config.max_extra_mutations = parse_number<int>(key, value);
  } else if (key == "search.max_depth") {
    config.limits.max_depth = parse_number<int>(key, value);
  } else if (key == "search.max_tokens") {
    config.limits.max_tokens = parse_number<int>(key, value);
  } else if (key == "search.workers") {
    config.workers = parse_number<int>(key, value);
  } else {
    throw UsageError("unknown config key '" + std::string(key) + "'");
  }
}

int workers_from_env() {
  const char* env = std::getenv("PRORL_WORKERS");
  if (!env || !*env) return 0;
  return std::max(parse_number<int>("PRORL_WORKERS", env), 0);
}

Instance read_instance(const InstanceSource& source) {
  try {
    return load_instance(source.path, source.format);
  } catch (const ParseError& e) {
    throw IoError(source.path + ": " + e.what());
  } catch (const std::ios_base::failure& e) {
    throw IoError(e.what());
  }
}

std::optional<BksTable> read_bks(const std::optional<std::string>& path) {
  if (!path) return std::nullopt;
  try {
    return load_bks_file(*path);
  } catch (const ParseError& e) {
    throw IoError(*path + ": " + e.what());
  } catch (const std::ios_base::failure& e) {
    throw IoError(e.what());
  }
}

RunReport cmd_pdr(const InstanceSource& source, Heuristic rule,
                  const std::optional<BksTable>& bks,
                  const std::optional<std::string>& trace_path) {
  const Instance instance = read_instance(source);
  const auto start = Clock::now();
  const ScheduleResult result =
      run_pdr(instance, rule, {.record_decisions = trace_path.has_value()});
  RunReport report{instance.name(), std::string(to_string(rule)),
                   static_cast<double>(result.makespan), std::nullopt, 0,
                   seconds_since(start), 1};
  if (auto b = lookup_bks(bks, instance.name())) report.gap = gap(result.makespan, *b);
  write_trace(trace_path, result);
  return report;
}

namespace {

RunReport random_runs(const Instance& instance, std::uint64_t seed, int episodes,
                      const std::optional<BksTable>& bks,
                      const std::optional<std::string>& trace_path) {
  if (episodes < 1) throw UsageError("--episodes must be >= 1");
  const auto start = Clock::now();
  Rng rng(seed);
  Policy policy = [&rng](const DecisionContext& ctx) {
    const Heuristic rule = kAllHeuristics[rng.below(kAllHeuristics.size())];
    return Choice{apply(rule, ctx.ready, ctx.state, ctx.instance), rule};
  };
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    const bool trace = e == 0 && trace_path.has_value();
    ScheduleResult result = run_episode(instance, policy, {.record_decisions = trace});
    if (trace) write_trace(trace_path, result);
    total += static_cast<double>(result.makespan);
  }
  RunReport report{instance.name(), "random", total / episodes, std::nullopt, seed,
                   seconds_since(start), episodes};
  if (auto b = lookup_bks(bks, instance.name())) {
    report.gap = (report.makespan - static_cast<double>(*b)) / static_cast<double>(*b);
  }
  return report;
}

RunReport train_report(const Instance& instance, const SearchState& state,
                       const SearchConfig& config, const std::optional<BksTable>& bks,
                       double seconds) {
  const PolicyEvaluation eval =
      evaluate_policy(state.incumbent, instance, lookup_bks(bks, instance.name()));
  return RunReport{instance.name(), "prorl", static_cast<double>(eval.makespan),
                   eval.gap, config.seed, seconds, state.episodes_used};
}

}  // namespace

RunReport cmd_random(const InstanceSource& source, std::uint64_t seed, int episodes,
                     const std::optional<BksTable>& bks,
                     const std::optional<std::string>& trace_path) {
  if (episodes < 1) throw UsageError("--episodes must be >= 1");
  return random_runs(read_instance(source), seed, episodes, bks, trace_path);
}

TrainOutcome cmd_train(const InstanceSource& source, const SearchConfig& config,
                       const std::optional<BksTable>& bks,
                       const std::optional<std::string>& out_path,
                       const std::optional<std::string>& log_path,
                       const std::optional<std::string>& trace_path) {
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Instance instance = read_instance(source);
  const auto start = Clock::now();
  SearchState state = train(instance, config);
  const double seconds = seconds_since(start);
  RunReport report = train_report(instance, state, config, bks, seconds);
  if (out_path) {
    auto out = open_output(*out_path);
    out << serialize(state.incumbent);
    if (!out) throw IoError("failed writing " + *out_path);
  }
  if (log_path) {
    auto out = open_output(*log_path);
    write_training_log(out, state);
  }
  if (trace_path) {
    write_trace(trace_path, run_episode(instance, make_policy(state.incumbent)));
  }
  return {std::move(report), std::move(state)};
}

RunReport cmd_eval(const std::string& policy_path, const InstanceSource& source,
                   const std::optional<BksTable>& bks,
                   const std::optional<std::string>& trace_path) {
  std::ifstream in(policy_path);
  if (!in) throw IoError("cannot open policy file " + policy_path);
  std::stringstream buf;
  buf << in.rdbuf();
  Program program = Program::action(Heuristic::kFifo);
  try {
    program = deserialize(buf.str());
  } catch (const ProgramError& e) {
    throw IoError(policy_path + ": " + e.what());
  }
  const Instance instance = read_instance(source);
  const auto start = Clock::now();
  const ScheduleResult result = run_episode(instance, make_policy(program),
                                            {.record_decisions = trace_path.has_value()});
  RunReport report{instance.name(), "policy", static_cast<double>(result.makespan),
                   std::nullopt, 0, seconds_since(start), 1};
  if (auto b = lookup_bks(bks, instance.name())) report.gap = gap(result.makespan, *b);
  write_trace(trace_path, result);
  return report;
}

BenchResult cmd_bench(const std::string& directory, InstanceFormat format,
                      const std::vector<std::string>& methods,
                      const SearchConfig& config,
                      const std::vector<std::uint64_t>& seeds,
                      const std::optional<BksTable>& bks, int random_episodes) {
  namespace fs = std::filesystem;
  if (methods.empty()) throw UsageError("no methods given");
  if (seeds.empty()) throw UsageError("no seeds given");
  std::vector<std::string> names;
  for (const std::string& m : methods) {
    std::string lower = m;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower != "random" && lower != "prorl") {
      try {
        lower = std::string(to_string(parse_heuristic(lower)));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
    names.push_back(lower);
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    throw UsageError("not a directory: " + directory);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no instance files in " + directory);

  BenchResult result;
  result.methods = names;
  std::vector<Instance> instances;
  for (const auto& file : files) {
    try {
      instances.push_back(read_instance({file.string(), format}));
      result.instances.push_back(instances.back().name());
    } catch (const IoError& e) {
      result.failures.push_back({file.string(), e.what(), kExitIo});
    }
  }

  struct Task {
    std::size_t instance;
    std::string method;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (const std::string& m : names) {
      if (m == "random" || m == "prorl") {
        for (std::uint64_t s : seeds) tasks.push_back({i, m, s});
      } else {
        tasks.push_back({i, m, 0});
      }
    }
  }

  std::vector<std::optional<RunReport>> slots(tasks.size());
  std::vector<std::string> errors(tasks.size());
  int workers = config.workers > 0 ? config.workers : workers_from_env();
  run_parallel(tasks.size(), workers, [&](std::size_t t) {
    const Task& task = tasks[t];
    const Instance& instance = instances[task.instance];
    try {
      if (task.method == "random") {
        slots[t] = random_runs(instance, task.seed, random_episodes, bks, std::nullopt);
      } else if (task.method == "prorl") {
        SearchConfig run_config = config;
        run_config.seed = task.seed;
        run_config.workers = 1;
        const auto start = Clock::now();
        SearchState state = train(instance, run_config);
        slots[t] = train_report(instance, state, run_config, bks, seconds_since(start));
      } else {
        const auto start = Clock::now();
        const ScheduleResult r = run_pdr(instance, parse_heuristic(task.method),
                                         {.record_decisions = false});
        RunReport report{instance.name(), task.method, static_cast<double>(r.makespan),
                         std::nullopt, 0, seconds_since(start), 1};
        if (auto b = lookup_bks(bks, instance.name())) report.gap = gap(r.makespan, *b);
        slots[t] = report;
      }
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  });
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (slots[t]) {
      result.runs.push_back(*slots[t]);
    } else {
      result.failures.push_back({instances[tasks[t].instance].name(),
                                 tasks[t].method + ": " + errors[t], kExitInternal});
    }
  }
  return result;
}

void print_bench_table(std::ostream& out, const BenchResult& result) {
  // (instance, method) -> mean gap over seeds
  std::map<std::pair<std::string, std::string>, std::pair<double, int>> cells;
  for (const RunReport& r : result.runs) {
    if (!r.gap) continue;
    auto& cell = cells[{r.instance, r.method}];
    cell.first += *r.gap;
    cell.second += 1;
  }
  std::vector<std::string> columns = result.methods;
  const bool any_rule = std::any_of(columns.begin(), columns.end(), [](const auto& m) {
    return m != "random" && m != "prorl";
  });
  if (any_rule) columns.push_back("mPDR");

  auto mean_of = [&](const std::string& inst, const std::string& col) -> std::optional<double> {
    if (col == "mPDR") {
      std::optional<double> best;
      for (const auto& m : result.methods) {
        if (m == "random" || m == "prorl") continue;
        auto it = cells.find({inst, m});
        if (it == cells.end()) continue;
        const double g = it->second.first / it->second.second;
        if (!best || g < *best) best = g;
      }
      return best;
    }
    auto it = cells.find({inst, col});
    if (it == cells.end()) return std::nullopt;
    return it->second.first / it->second.second;
  };

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-12s", "instance");
  out << buf;
  for (const auto& c : columns) {
    std::snprintf(buf, sizeof(buf), " %10s", c.c_str());
    out << buf;
  }
  out << '\n';
  std::vector<std::pair<double, int>> totals(columns.size(), {0.0, 0});
  for (const auto& inst : result.instances) {
    std::snprintf(buf, sizeof(buf), "%-12s", inst.c_str());
    out << buf;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      auto g = mean_of(inst, columns[c]);
      if (g) {
        totals[c].first += *g;
        totals[c].second += 1;
      }
      std::snprintf(buf, sizeof(buf), " %10s", g ? format_gap(g).c_str() : "-");
      out << buf;
    }
    out << '\n';
  }
  std::snprintf(buf, sizeof(buf), "%-12s", "mean");
  out << buf;
  for (const auto& [sum, count] : totals) {
    std::optional<double> g;
    if (count > 0) g = sum / count;
    std::snprintf(buf, sizeof(buf), " %10s", g ? format_gap(g).c_str() : "-");
    out << buf;
  }
  out << '\n';
}

void write_reports_csv(std::ostream& out, const std::vector<RunReport>& reports) {
  out << "instance,method,seed,makespan,gap,episodes\n";
  for (const RunReport& r : reports) {
    out << r.instance << ',' << r.method << ',' << r.seed << ','
        << format_makespan(r.makespan) << ',';
    if (r.gap) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.4f", *r.gap * 100.0);
      out << buf;
    }
    out << ',' << r.episodes << '\n';
  }
}

void print_report(std::ostream& out, const RunReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-12s %-8s %10s %9s %6s %10s %9s\n", "instance",
                "method", "makespan", "gap", "seed", "seconds", "episodes");
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-12s %-8s %10s %9s %6llu %10.3f %9lld\n",
                r.instance.c_str(), r.method.c_str(), format_makespan(r.makespan).c_str(),
                r.gap ? format_gap(r.gap).c_str() : "-",
                static_cast<unsigned long long>(r.seed), r.seconds, r.episodes);
  out << buf;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Programmatic dispatching policies for job-shop scheduling"};
  app.require_subcommand(1);

  std::string instance_path, directory, format_text = "standard", rule_text;
  std::string policy_path;
  std::optional<std::string> bks_path, out_path, csv_path, trace_path, log_path;
  long long budget = 1000;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  std::vector<std::string> overrides;
  std::vector<std::string> methods{"fifo", "spt", "mor", "mwr", "lor"};
  int episodes = 1;

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--instance", instance_path, "Instance file")->required();
    sub->add_option("--format", format_text, "standard|taillard");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--bks", bks_path, "CSV of best-known makespans");
    sub->add_option("--csv", csv_path, "Write the report as CSV");
  };

  CLI::App* pdr = app.add_subcommand("pdr", "Run one dispatching rule");
  add_instance(pdr);
  add_common(pdr);
  pdr->add_option("--rule", rule_text, "fifo|spt|mor|mwr|lor")->required();
  pdr->add_option("--trace", trace_path, "Write the per-decision concept trace");

  CLI::App* random = app.add_subcommand("random", "Random rule at every decision");
  add_instance(random);
  add_common(random);
  random->add_option("--seed", seed, "Random seed");
  random->add_option("--episodes", episodes, "Episodes to average");
  random->add_option("--trace", trace_path, "Write the first episode's trace");

  CLI::App* train_cmd = app.add_subcommand("train", "Learn a programmatic policy");
  add_instance(train_cmd);
  add_common(train_cmd);
  train_cmd->add_option("--budget", budget, "Training episode budget");
  train_cmd->add_option("--seed", seed, "Random seed");
  train_cmd->add_option("--out", out_path, "Policy output file");
  train_cmd->add_option("--log", log_path, "Per-generation training log (CSV)");
  train_cmd->add_option("--set", overrides, "Config override key=value");
  train_cmd->add_option("--trace", trace_path, "Trace of the final policy");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a saved policy");
  eval->add_option("--policy", policy_path, "Policy file")->required();
  add_instance(eval);
  add_common(eval);
  eval->add_option("--trace", trace_path, "Write the per-decision concept trace");

  CLI::App* bench = app.add_subcommand("bench", "Sweep methods over a directory");
  bench->add_option("--dir", directory, "Directory of instance files")->required();
  bench->add_option("--format", format_text, "standard|taillard");
  add_common(bench);
  bench->add_option("--methods", methods, "Comma-separated methods")->delimiter(',');
  bench->add_option("--budget", budget, "Training budget for prorl");
  bench->add_option("--seeds", seeds, "Comma-separated seeds")->delimiter(',');
  bench->add_option("--episodes", episodes, "Episodes per random run");
  bench->add_option("--set", overrides, "Config override key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  auto emit_csv = [&](const std::vector<RunReport>& reports) {
    if (!csv_path) return;
    auto f = open_output(*csv_path);
    write_reports_csv(f, reports);
    if (!f) throw IoError("failed writing " + *csv_path);
  };

  try {
    InstanceFormat format;
    try {
      format = parse_format(format_text);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    SearchConfig config;
    config.episode_budget = budget;
    config.seed = seed;
    config.workers = workers_from_env();
    for (const auto& o : overrides) apply_override(config, o);
    if (budget < 0) throw UsageError("--budget must be >= 0");

    const auto bks = read_bks(bks_path);
    const InstanceSource source{instance_path, format};

    if (*pdr) {
      Heuristic rule;
      try {
        rule = parse_heuristic(rule_text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      RunReport r = cmd_pdr(source, rule, bks, trace_path);
      print_report(out, r);
      emit_csv({r});
    } else if (*random) {
      RunReport r = cmd_random(source, seed, episodes, bks, trace_path);
      print_report(out, r);
      emit_csv({r});
    } else if (*train_cmd) {
      TrainOutcome t = cmd_train(source, config, bks, out_path, log_path, trace_path);
      out << pretty_print(t.state.incumbent) << "\n\n";
      print_report(out, t.report);
      emit_csv({t.report});
    } else if (*eval) {
      RunReport r = cmd_eval(policy_path, source, bks, trace_path);
      print_report(out, r);
      emit_csv({r});
    } else if (*bench) {
      if (episodes < 1) throw UsageError("--episodes must be >= 1");
      BenchResult b = cmd_bench(directory, format, methods, config, seeds, bks, episodes);
      print_bench_table(out, b);
      emit_csv(b.runs);
      int code = kExitOk;
      for (const auto& f : b.failures) {
        err << "failed: " << f.path << ": " << f.message << '\n';
        code = std::max(code, f.exit_code);
      }
      return code;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace prorl::cli
