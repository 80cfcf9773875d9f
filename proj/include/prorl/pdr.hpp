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

#ifndef PRORL_PDR_HPP_
#define PRORL_PDR_HPP_

#include <span>

#include "prorl/heuristic.hpp"
#include "prorl/instance.hpp"
#include "prorl/sim.hpp"

namespace prorl {

/// Picks the best ready operation under `rule`. Ties go to the lowest job
/// index, then the lowest op index. "Remaining" counts include the candidate
/// operation itself. Throws std::invalid_argument on an empty ready set.
///
///   FIFO  min arrival (job predecessor completion)
///   SPT   min duration
///   MOR   max unscheduled operations of the job
///   MWR   max unscheduled work of the job
///   LOR   min unscheduled operations of the job
const ReadyOp& apply(Heuristic rule, std::span<const ReadyOp> ready,
                     const SimState& state, const Instance& instance);

/// Policy that always dispatches with `rule`.
Policy constant_rule_policy(Heuristic rule);

ScheduleResult run_pdr(const Instance& instance, Heuristic rule,
                       const EpisodeOptions& options = {});

}  // namespace prorl

#endif  // PRORL_PDR_HPP_
