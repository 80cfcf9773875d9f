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

#ifndef PRORL_SIM_HPP_
#define PRORL_SIM_HPP_

#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "prorl/concepts.hpp"
#include "prorl/heuristic.hpp"
#include "prorl/instance.hpp"

namespace prorl {

inline constexpr Time kUnscheduled = -1;

/// An operation that can start at the current clock.
struct ReadyOp {
  int job = 0;
  int op_index = 0;
  int machine = 0;
  Time duration = 0;
  Time ready_at = 0;  // max(job ready, machine free); <= clock
  Time arrival = 0;   // completion of the job predecessor, 0 for first ops

  friend bool operator==(const ReadyOp&, const ReadyOp&) = default;
};

/// Thrown when a step or query is illegal in the current state.
class SimError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Evolving non-delay schedule. One operation is dispatched per step; after a
/// step the clock jumps to the earliest moment at which some operation can
/// start, so the ready set is non-empty at every decision point.
class SimState {
 public:
  static SimState reset(const Instance& instance);

  Time clock() const noexcept { return clock_; }
  const std::vector<Time>& machine_free_at() const noexcept {
    return machine_free_at_;
  }
  const std::vector<int>& job_next_op() const noexcept { return job_next_op_; }
  const std::vector<Time>& job_ready_at() const noexcept {
    return job_ready_at_;
  }
  /// Flat per-operation start times (Instance::op_offset indexing);
  /// kUnscheduled for pending operations.
  const std::vector<Time>& start_times() const noexcept { return start_times_; }
  int scheduled_count() const noexcept { return scheduled_count_; }

  /// Unscheduled processing time still destined for each machine.
  const std::vector<Time>& machine_remaining() const noexcept {
    return machine_remaining_;
  }

  bool done(const Instance& instance) const noexcept {
    return scheduled_count_ == instance.total_ops();
  }

  /// Candidates startable at the clock, ordered by job index.
  std::vector<ReadyOp> ready_set(const Instance& instance) const;
  void ready_set(const Instance& instance, std::vector<ReadyOp>& out) const;

  /// Starts `pick` at the clock, then advances the clock if nothing else is
  /// startable. Throws SimError if `pick` is not currently ready.
  void apply(const Instance& instance, const ReadyOp& pick);

  /// Completion time of the latest scheduled operation.
  Time makespan(const Instance& instance) const;

  friend bool operator==(const SimState&, const SimState&) = default;

 private:
  Time clock_ = 0;
  std::vector<Time> machine_free_at_;
  std::vector<int> job_next_op_;
  std::vector<Time> job_ready_at_;
  std::vector<Time> start_times_;
  std::vector<Time> machine_remaining_;
  int scheduled_count_ = 0;
};

inline SimState reset(const Instance& instance) {
  return SimState::reset(instance);
}

/// Throws SimError when no operation is left to schedule.
std::vector<ReadyOp> ready_set(const SimState& state, const Instance& instance);

/// Value-returning form of SimState::apply.
SimState step(SimState state, const Instance& instance, const ReadyOp& pick);

/// One recorded dispatch decision.
struct Decision {
  Time clock = 0;
  ConceptVector concepts;
  std::optional<Heuristic> rule;  // empty for policies that are not rule based
  int job = 0;
  int op_index = 0;
};

struct ScheduleResult {
  Time makespan = 0;
  std::vector<Time> start_times;  // flat, Instance::op_offset indexing
  std::vector<Decision> decisions;

  /// Episode return: the negative makespan, paid at the final step.
  double episode_return() const noexcept {
    return -static_cast<double>(makespan);
  }
};

/// Everything a policy may inspect at a decision point.
struct DecisionContext {
  const ConceptVector& concepts;
  const std::vector<ReadyOp>& ready;
  const SimState& state;
  const Instance& instance;
};

struct Choice {
  ReadyOp op;
  std::optional<Heuristic> rule;
};

using Policy = std::function<Choice(const DecisionContext&)>;

struct EpisodeOptions {
  bool record_decisions = true;
};

/// Runs one full episode: exactly total_ops() policy invocations.
ScheduleResult run_episode(const Instance& instance, const Policy& policy,
                           const EpisodeOptions& options = {});

/// Checks job precedence, machine exclusivity, completeness, and that the
/// reported makespan matches the start times.
bool verify_feasible(const ScheduleResult& result, const Instance& instance);

/// CSV "job,op,machine,start,end", one row per operation sorted by start time
/// (ties by job, then op).
void write_schedule_csv(std::ostream& out, const ScheduleResult& result,
                        const Instance& instance);

/// CSV "t,ld,am,ao,jd,st,action", one row per recorded decision.
void write_trace_csv(std::ostream& out, const ScheduleResult& result);

}  // namespace prorl

#endif  // PRORL_SIM_HPP_
