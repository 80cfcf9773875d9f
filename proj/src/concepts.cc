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

#include "prorl/concepts.hpp"

#include <algorithm>
#include <limits>

#include "prorl/instance.hpp"
#include "prorl/sim.hpp"

namespace prorl {

namespace {

double spread(Time max, Time min) {
  if (max <= 0) return 0.0;
  return static_cast<double>(max - min) / static_cast<double>(max);
}

}  // namespace

ConceptVector extract(const SimState& state, const Instance& instance) {
  const int unscheduled = instance.total_ops() - state.scheduled_count();
  if (unscheduled <= 0) {
    throw SimError("concepts requested after the last operation was scheduled");
  }
  const Time clock = state.clock();
  ConceptVector c;

  const auto& load = state.machine_remaining();
  auto [lmin, lmax] = std::minmax_element(load.begin(), load.end());
  c.ld = spread(*lmax, *lmin);

  int free_machines = 0;
  for (Time t : state.machine_free_at()) free_machines += t <= clock ? 1 : 0;
  c.am = static_cast<double>(free_machines) / instance.num_machines();

  int ready = 0;
  int active_jobs = 0;
  Time jmin = std::numeric_limits<Time>::max(), jmax = 0;
  Time pmin = std::numeric_limits<Time>::max(), pmax = 0;
  for (int j = 0; j < instance.num_jobs(); ++j) {
    const int next = state.job_next_op()[j];
    if (next >= instance.job_length(j)) continue;
    const Operation& op = instance.op(j, next);
    if (state.job_ready_at()[j] <= clock &&
        state.machine_free_at()[op.machine] <= clock) {
      ++ready;
    }
    ++active_jobs;
    const Time work = instance.remaining_work(j, next);
    jmin = std::min(jmin, work);
    jmax = std::max(jmax, work);
    for (int k = next; k < instance.job_length(j); ++k) {
      const Time p = instance.op(j, k).duration;
      pmin = std::min(pmin, p);
      pmax = std::max(pmax, p);
    }
  }
  c.ao = static_cast<double>(ready) / unscheduled;
  c.jd = active_jobs > 1 ? spread(jmax, jmin) : 0.0;
  c.st = spread(pmax, pmin);
  return c;
}

}  // namespace prorl
