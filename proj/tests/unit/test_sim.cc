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

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "prorl/pdr.hpp"
#include "prorl/sim.hpp"

using namespace prorl;
using prorl::testing::tiny;

namespace {

// Every makespan reachable by some dispatch sequence.
void enumerate(const Instance& inst, const SimState& s, std::set<Time>& out) {
  if (s.done(inst)) {
    out.insert(s.makespan(inst));
    return;
  }
  for (const ReadyOp& op : ready_set(s, inst)) enumerate(inst, step(s, inst, op), out);
}

// Independent non-delay check from start times alone.
bool non_delay(const ScheduleResult& r, const Instance& inst) {
  struct Slot { Time start, end; };
  std::vector<std::vector<Slot>> on_machine(inst.num_machines());
  for (int j = 0; j < inst.num_jobs(); ++j) {
    for (int k = 0; k < inst.job_length(j); ++k) {
      const Time s = r.start_times[inst.op_offset(j) + k];
      on_machine[inst.op(j, k).machine].push_back({s, s + inst.op(j, k).duration});
    }
  }
  auto busy = [&](int m, Time t) {
    return std::any_of(on_machine[m].begin(), on_machine[m].end(),
                       [t](const Slot& x) { return x.start <= t && t < x.end; });
  };
  for (int j = 0; j < inst.num_jobs(); ++j) {
    for (int k = 0; k < inst.job_length(j); ++k) {
      const int m = inst.op(j, k).machine;
      const Time start = r.start_times[inst.op_offset(j) + k];
      const Time ready =
          k == 0 ? 0 : r.start_times[inst.op_offset(j) + k - 1] + inst.op(j, k - 1).duration;
      std::vector<Time> probes{ready};
      for (const Slot& x : on_machine[m]) probes.push_back(x.end);
      for (Time t : probes) {
        if (t >= ready && t < start && !busy(m, t)) return false;
      }
    }
  }
  return true;
}

Policy first_ready() {
  return [](const DecisionContext& ctx) { return Choice{ctx.ready.front(), std::nullopt}; };
}

}  // namespace

TEST_CASE("reset") {
  const Instance inst = tiny();
  const SimState s = reset(inst);
  CHECK(s.clock() == 0);
  CHECK(s.machine_free_at() == std::vector<Time>{0, 0});
  CHECK(s.job_next_op() == std::vector<int>{0, 0});
  CHECK(s.scheduled_count() == 0);
  CHECK(reset(inst) == s);
  const Instance one("one", 1, {{{0, 5}}});
  CHECK(ready_set(reset(one), one).size() == 1);
}

TEST_CASE("ready set and step on the 2x2 instance") {
  const Instance inst = tiny();
  SimState s = reset(inst);
  auto ready = ready_set(s, inst);
  REQUIRE(ready.size() == 2);
  CHECK(ready[0].job == 0);
  CHECK(ready[0].machine == 0);
  CHECK(ready[1].job == 1);
  CHECK(ready[1].machine == 1);

  s = step(s, inst, ready[1]);
  CHECK(s.machine_free_at()[1] == 2);
  CHECK(s.job_ready_at()[1] == 2);
  CHECK(s.clock() == 0);
  ready = ready_set(s, inst);
  REQUIRE(ready.size() == 1);
  CHECK(ready[0].job == 0);

  s = step(s, inst, ready[0]);
  CHECK(s.clock() == 3);
  ready = ready_set(s, inst);
  REQUIRE(ready.size() == 2);
  CHECK(ready[0].job == 0);
  CHECK(ready[0].op_index == 1);
  CHECK(ready[1].job == 1);
  CHECK(ready[1].op_index == 1);
  CHECK(ready[0].arrival == 3);
  CHECK(ready[1].arrival == 2);
}

TEST_CASE("invalid picks and finished states are rejected") {
  const Instance inst = tiny();
  const SimState s = reset(inst);
  ReadyOp bogus{0, 1, 1, 2, 0, 0};
  CHECK_THROWS_AS(step(s, inst, bogus), SimError);
  const Instance one("one", 1, {{{0, 5}}});
  const SimState done = step(reset(one), one, ready_set(reset(one), one)[0]);
  CHECK(done.done(one));
  CHECK(done.makespan(one) == 5);
  CHECK_THROWS_AS(ready_set(done, one), SimError);
}

TEST_CASE("all dispatch orders of the 2x2 instance reach 7") {
  std::set<Time> makespans;
  enumerate(tiny(), reset(tiny()), makespans);
  CHECK(makespans == std::set<Time>{7});
}

TEST_CASE("episode properties on random instances") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = prorl::testing::random_instance(
        rng, 1 + static_cast<int>(rng.below(6)), 1 + static_cast<int>(rng.below(5)), 20);
    const Heuristic rule = kAllHeuristics[trial % 5];
    const ScheduleResult r = run_pdr(inst, rule);
    CHECK(verify_feasible(r, inst));
    CHECK(r.makespan >= inst.lower_bound());
    CHECK(static_cast<int>(r.decisions.size()) == inst.total_ops());
    CHECK(non_delay(r, inst));
    CHECK(r.episode_return() == -static_cast<double>(r.makespan));
    const ScheduleResult again = run_pdr(inst, rule);
    CHECK(again.start_times == r.start_times);
  }
}

TEST_CASE("run_episode on small cases") {
  const Instance one("one", 1, {{{0, 5}}});
  CHECK(run_episode(one, first_ready()).makespan == 5);
  CHECK(run_episode(tiny(), first_ready()).makespan == 7);
  CHECK(run_pdr(tiny(), Heuristic::kSpt).makespan == 7);
}

TEST_CASE("verify_feasible catches broken schedules") {
  const Instance inst = tiny();
  ScheduleResult r = run_pdr(inst, Heuristic::kSpt);
  REQUIRE(verify_feasible(r, inst));

  ScheduleResult overlap = r;
  // J0 op0 and J1 op1 both on M0.
  overlap.start_times[inst.op_offset(1) + 1] = overlap.start_times[0];
  overlap.makespan = 0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      overlap.makespan = std::max(overlap.makespan, overlap.start_times[inst.op_offset(j) + k] +
                                                        inst.op(j, k).duration);
    }
  }
  CHECK_FALSE(verify_feasible(overlap, inst));

  ScheduleResult early;
  early.start_times = {0, 1, 0, 3};  // J0 op1 starts before op0 ends
  early.makespan = 7;
  CHECK_FALSE(verify_feasible(early, inst));

  ScheduleResult wrong_makespan = r;
  wrong_makespan.makespan += 1;
  CHECK_FALSE(verify_feasible(wrong_makespan, inst));
}

TEST_CASE("schedule and trace CSV") {
  const Instance inst = tiny();
  const ScheduleResult r = run_pdr(inst, Heuristic::kSpt);
  std::ostringstream schedule;
  write_schedule_csv(schedule, r, inst);
  CHECK(schedule.str().rfind("job,op,machine,start,end\n", 0) == 0);
  const std::string rows = schedule.str();
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 5);

  std::ostringstream trace;
  write_trace_csv(trace, r);
  const std::string text = trace.str();
  CHECK(text.rfind("t,ld,am,ao,jd,st,action\n", 0) == 0);
  CHECK(text.find("0,0.428571,1.000000,0.500000,0.166667,0.500000,SPT") != std::string::npos);
}
