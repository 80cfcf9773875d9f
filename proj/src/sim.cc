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

#include "prorl/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>
#include <tuple>

namespace prorl {

SimState SimState::reset(const Instance& instance) {
  SimState s;
  s.machine_free_at_.assign(instance.num_machines(), 0);
  s.job_next_op_.assign(instance.num_jobs(), 0);
  s.job_ready_at_.assign(instance.num_jobs(), 0);
  s.start_times_.assign(instance.total_ops(), kUnscheduled);
  s.machine_remaining_.resize(instance.num_machines());
  for (int m = 0; m < instance.num_machines(); ++m) {
    s.machine_remaining_[m] = instance.machine_workload(m);
  }
  return s;
}

void SimState::ready_set(const Instance& instance,
                         std::vector<ReadyOp>& out) const {
  out.clear();
  for (int j = 0; j < instance.num_jobs(); ++j) {
    int k = job_next_op_[j];
    if (k >= instance.job_length(j)) continue;
    const Operation& op = instance.op(j, k);
    Time ready = std::max(job_ready_at_[j], machine_free_at_[op.machine]);
    if (ready <= clock_) {
      out.push_back({j, k, op.machine, op.duration, ready, job_ready_at_[j]});
    }
  }
}

std::vector<ReadyOp> SimState::ready_set(const Instance& instance) const {
  std::vector<ReadyOp> out;
  ready_set(instance, out);
  return out;
}

void SimState::apply(const Instance& instance, const ReadyOp& pick) {
  if (pick.job < 0 || pick.job >= instance.num_jobs()) {
    throw SimError("pick refers to unknown job " + std::to_string(pick.job));
  }
  const int j = pick.job;
  const int k = job_next_op_[j];
  if (k >= instance.job_length(j) || pick.op_index != k) {
    throw SimError("pick is not the next operation of job " +
                   std::to_string(j));
  }
  const Operation& op = instance.op(j, k);
  if (pick.machine != op.machine || pick.duration != op.duration) {
    throw SimError("pick does not match the instance data");
  }
  if (job_ready_at_[j] > clock_ || machine_free_at_[op.machine] > clock_) {
    throw SimError("pick is not startable at the current clock");
  }

  start_times_[instance.op_offset(j) + k] = clock_;
  const Time end = clock_ + op.duration;
  machine_free_at_[op.machine] = end;
  job_ready_at_[j] = end;
  machine_remaining_[op.machine] -= op.duration;
  ++job_next_op_[j];
  ++scheduled_count_;

  if (scheduled_count_ == instance.total_ops()) {
    return;
  }
  // Jump to the earliest startable moment when nothing can start now.
  Time next = std::numeric_limits<Time>::max();
  for (int jj = 0; jj < instance.num_jobs(); ++jj) {
    int kk = job_next_op_[jj];
    if (kk >= instance.job_length(jj)) continue;
    Time ready =
        std::max(job_ready_at_[jj], machine_free_at_[instance.op(jj, kk).machine]);
    if (ready <= clock_) return;
    next = std::min(next, ready);
  }
  clock_ = next;
}

Time SimState::makespan(const Instance& instance) const {
  Time best = 0;
  for (int j = 0; j < instance.num_jobs(); ++j) {
    for (int k = 0; k < instance.job_length(j); ++k) {
      Time s = start_times_[instance.op_offset(j) + k];
      if (s != kUnscheduled) best = std::max(best, s + instance.op(j, k).duration);
    }
  }
  return best;
}

std::vector<ReadyOp> ready_set(const SimState& state, const Instance& instance) {
  if (state.done(instance)) {
    throw SimError("no unscheduled operations remain");
  }
  return state.ready_set(instance);
}

SimState step(SimState state, const Instance& instance, const ReadyOp& pick) {
  state.apply(instance, pick);
  return state;
}

ScheduleResult run_episode(const Instance& instance, const Policy& policy,
                           const EpisodeOptions& options) {
  SimState state = SimState::reset(instance);
  ScheduleResult result;
  if (options.record_decisions) result.decisions.reserve(instance.total_ops());
  std::vector<ReadyOp> ready;
  ready.reserve(instance.num_jobs());
  while (!state.done(instance)) {
    state.ready_set(instance, ready);
    if (ready.empty()) {
      throw SimError("empty ready set at a decision point");
    }
    const ConceptVector concepts = extract(state, instance);
    const Choice choice = policy(DecisionContext{concepts, ready, state, instance});
    if (options.record_decisions) {
      result.decisions.push_back({state.clock(), concepts, choice.rule,
                                  choice.op.job, choice.op.op_index});
    }
    state.apply(instance, choice.op);
  }
  result.makespan = state.makespan(instance);
  result.start_times = state.start_times();
  return result;
}

bool verify_feasible(const ScheduleResult& result, const Instance& instance) {
  if (result.start_times.size() != static_cast<std::size_t>(instance.total_ops())) {
    return false;
  }
  struct Interval {
    Time start, end;
  };
  std::vector<std::vector<Interval>> per_machine(instance.num_machines());
  Time makespan = 0;
  for (int j = 0; j < instance.num_jobs(); ++j) {
    Time prev_end = 0;
    for (int k = 0; k < instance.job_length(j); ++k) {
      Time s = result.start_times[instance.op_offset(j) + k];
      if (s == kUnscheduled || s < 0) return false;
      if (s < prev_end) return false;
      const Operation& op = instance.op(j, k);
      prev_end = s + op.duration;
      makespan = std::max(makespan, prev_end);
      per_machine[op.machine].push_back({s, prev_end});
    }
  }
  for (auto& intervals : per_machine) {
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.start < b.start; });
    for (std::size_t i = 1; i < intervals.size(); ++i) {
      if (intervals[i].start < intervals[i - 1].end) return false;
    }
  }
  return makespan == result.makespan;
}

void write_schedule_csv(std::ostream& out, const ScheduleResult& result,
                        const Instance& instance) {
  struct Row {
    Time start;
    int job, op;
  };
  std::vector<Row> rows;
  rows.reserve(instance.total_ops());
  for (int j = 0; j < instance.num_jobs(); ++j) {
    for (int k = 0; k < instance.job_length(j); ++k) {
      rows.push_back({result.start_times.at(instance.op_offset(j) + k), j, k});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.start, a.job, a.op) < std::tie(b.start, b.job, b.op);
  });
  out << "job,op,machine,start,end\n";
  for (const Row& r : rows) {
    const Operation& op = instance.op(r.job, r.op);
    out << r.job << ',' << r.op << ',' << op.machine << ',' << r.start << ','
        << r.start + op.duration << '\n';
  }
}

void write_trace_csv(std::ostream& out, const ScheduleResult& result) {
  out << "t,ld,am,ao,jd,st,action\n";
  char buf[160];
  for (const Decision& d : result.decisions) {
    std::snprintf(buf, sizeof(buf), "%lld,%.6f,%.6f,%.6f,%.6f,%.6f,",
                  static_cast<long long>(d.clock), d.concepts.ld, d.concepts.am,
                  d.concepts.ao, d.concepts.jd, d.concepts.st);
    out << buf;
    if (d.rule) {
      out << to_string(*d.rule);
    } else {
      out << "J" << d.job;
    }
    out << '\n';
  }
}

}  // namespace prorl
