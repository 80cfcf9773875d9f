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

// (1 + lambda) local search over program shapes with Bayesian optimization of
// each neighbor's condition weights, terminated by an episode budget.

#ifndef PRORL_SEARCH_HPP_
#define PRORL_SEARCH_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "prorl/bo.hpp"
#include "prorl/dsl.hpp"
#include "prorl/instance.hpp"

namespace prorl {

struct SearchConfig {
  int lambda = 10;
  double mutation_rate = 0.1;
  int max_extra_mutations = 5;
  long long episode_budget = 1000;
  ProgramLimits limits;
  BoSettings bo;  // bo.iterations is mu, bo.init_points is n_init
  std::uint64_t seed = 0;
  int workers = 0;  // 0: hardware concurrency

  /// Throws std::invalid_argument when a knob is out of range.
  void validate() const;
};

struct CandidateOutcome {
  Program program = Program::action(Heuristic::kFifo);
  double best_return = 0.0;
  long long episodes = 0;
};

struct GenerationRecord {
  int generation = 0;
  long long episodes_used = 0;  // cumulative, after this generation
  double best_return = 0.0;     // incumbent return after selection
  int incumbent_tokens = 0;
  int incumbent_depth = 0;
  std::vector<CandidateOutcome> candidates;  // neighbors that got budget
};

struct SearchState {
  int generation = 0;
  Program incumbent = Program::action(Heuristic::kFifo);
  double incumbent_return = 0.0;
  long long episodes_used = 0;
  std::vector<GenerationRecord> history;
};

/// lambda mutants of `incumbent`. Each gets one mutation plus, with
/// probability mutation_rate each, up to max_extra_mutations more.
std::vector<Program> make_neighborhood(const Program& incumbent, int lambda,
                                       double mutation_rate, Rng& rng,
                                       const ProgramLimits& limits = {},
                                       int max_extra_mutations = 5);

/// Episodes a candidate costs when the budget is not binding.
long long candidate_cost(const Program& program, const BoSettings& bo);

/// Runs the search. The starting incumbent is `initial` or a random program;
/// its own evaluation is not charged to the budget. Each generation carves
/// per-neighbor allowances from the remaining budget in index order, then
/// optimizes neighbors concurrently with seeds derived from (seed,
/// generation, index), so results do not depend on worker scheduling.
SearchState train(const Instance& instance, const SearchConfig& config,
                  const std::optional<Program>& initial = std::nullopt);

/// (makespan - bks) / bks.
double gap(Time makespan, Time bks);

struct PolicyEvaluation {
  Time makespan = 0;
  std::optional<double> gap;
};

/// One deterministic episode; gap only when `bks` is given.
PolicyEvaluation evaluate_policy(const Program& program, const Instance& instance,
                                 std::optional<Time> bks = std::nullopt);

/// CSV "gen,episodes_used,best_return,incumbent_tokens,incumbent_depth".
void write_training_log(std::ostream& out, const SearchState& state);

}  // namespace prorl

#endif  // PRORL_SEARCH_HPP_
