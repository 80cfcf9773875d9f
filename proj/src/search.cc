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

#include "prorl/search.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "prorl/sim.hpp"

namespace prorl {

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974;   // "init"
constexpr std::uint64_t kMutateStream = 0x6d757461;  // "muta"
constexpr std::uint64_t kBoStream = 0x626f;          // "bo"

int resolve_workers(int requested, std::size_t tasks) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

// Runs fn(i) for i in [0, count) on up to `workers` threads; rethrows the
// first failure.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

void SearchConfig::validate() const {
  if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
  if (episode_budget < 0) throw std::invalid_argument("episode budget must be >= 0");
  if (mutation_rate < 0 || mutation_rate > 1) {
    throw std::invalid_argument("mutation rate must lie in [0, 1]");
  }
  if (max_extra_mutations < 0) {
    throw std::invalid_argument("max extra mutations must be >= 0");
  }
  if (limits.max_depth < 1 || limits.max_tokens < 1) {
    throw std::invalid_argument("program limits must be positive");
  }
  if (bo.init_points < 1) throw std::invalid_argument("bo.init_points must be >= 1");
  if (bo.iterations < 0) throw std::invalid_argument("bo.iterations must be >= 0");
  if (bo.candidates < 1) throw std::invalid_argument("bo.candidates must be >= 1");
  if (bo.beta < 0) throw std::invalid_argument("bo.beta must be >= 0");
}

std::vector<Program> make_neighborhood(const Program& incumbent, int lambda,
                                       double mutation_rate, Rng& rng,
                                       const ProgramLimits& limits,
                                       int max_extra_mutations) {
  std::vector<Program> out;
  out.reserve(std::max(lambda, 0));
  for (int j = 0; j < lambda; ++j) {
    Program candidate = mutate(incumbent, rng, limits);
    for (int extra = 0; extra < max_extra_mutations; ++extra) {
      if (mutation_rate <= 0 || !rng.bernoulli(mutation_rate)) break;
      candidate = mutate(candidate, rng, limits);
    }
    out.push_back(std::move(candidate));
  }
  return out;
}

long long candidate_cost(const Program& program, const BoSettings& bo) {
  if (program.if_count() == 0) return 1;
  return static_cast<long long>(bo.init_points) + bo.iterations;
}

SearchState train(const Instance& instance, const SearchConfig& config,
                  const std::optional<Program>& initial) {
  config.validate();
  SearchState state;
  if (initial) {
    initial->check_limits(config.limits);
    state.incumbent = *initial;
  } else {
    Rng rng(derive_seed({config.seed, kInitStream}));
    state.incumbent = random_program(rng, config.limits);
  }
  state.incumbent_return = episode_return(state.incumbent, instance);

  EpisodeMeter meter(config.episode_budget);
  while (meter.remaining() > 0) {
    ++state.generation;
    const auto gen = static_cast<std::uint64_t>(state.generation);
    Rng mutation_rng(derive_seed({config.seed, gen, kMutateStream}));
    std::vector<Program> neighbors =
        make_neighborhood(state.incumbent, config.lambda, config.mutation_rate,
                          mutation_rng, config.limits, config.max_extra_mutations);

    // Allowances are fixed up front, in index order, so the outcome is the
    // same for any number of workers.
    std::vector<long long> allowance(neighbors.size(), 0);
    std::size_t funded = 0;
    for (std::size_t j = 0; j < neighbors.size(); ++j) {
      allowance[j] = meter.acquire_up_to(candidate_cost(neighbors[j], config.bo));
      if (allowance[j] > 0) funded = j + 1;
    }

    std::vector<CandidateOutcome> outcomes(funded);
    parallel_for(funded, resolve_workers(config.workers, funded), [&](std::size_t j) {
      EpisodeMeter local(allowance[j]);
      Rng rng(derive_seed({config.seed, gen, static_cast<std::uint64_t>(j), kBoStream}));
      ParamSearchResult r = optimize_params(neighbors[j], instance, config.bo, local, rng);
      outcomes[j] = {std::move(r.program), r.best_return, r.episodes};
    });

    // Strict improvement only: ties keep the incumbent, then the lower index.
    for (const CandidateOutcome& c : outcomes) {
      if (c.best_return > state.incumbent_return) {
        state.incumbent = c.program;
        state.incumbent_return = c.best_return;
      }
    }
    state.episodes_used = meter.used();
    state.history.push_back({state.generation, state.episodes_used,
                             state.incumbent_return, state.incumbent.token_count(),
                             state.incumbent.depth(), std::move(outcomes)});
  }
  return state;
}

double gap(Time makespan, Time bks) {
  if (bks < 1) throw std::invalid_argument("best-known makespan must be >= 1");
  return static_cast<double>(makespan - bks) / static_cast<double>(bks);
}

PolicyEvaluation evaluate_policy(const Program& program, const Instance& instance,
                                 std::optional<Time> bks) {
  PolicyEvaluation eval;
  eval.makespan =
      run_episode(instance, make_policy(program), {.record_decisions = false}).makespan;
  if (bks) eval.gap = gap(eval.makespan, *bks);
  return eval;
}

void write_training_log(std::ostream& out, const SearchState& state) {
  out << "gen,episodes_used,best_return,incumbent_tokens,incumbent_depth\n";
  for (const GenerationRecord& r : state.history) {
    out << r.generation << ',' << r.episodes_used << ',' << r.best_return << ','
        << r.incumbent_tokens << ',' << r.incumbent_depth << '\n';
  }
}

}  // namespace prorl
