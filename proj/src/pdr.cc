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

#include "prorl/pdr.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <tuple>

namespace prorl {

std::string_view to_string(Heuristic h) noexcept {
  switch (h) {
    case Heuristic::kFifo: return "FIFO";
    case Heuristic::kSpt: return "SPT";
    case Heuristic::kMor: return "MOR";
    case Heuristic::kMwr: return "MWR";
    case Heuristic::kLor: return "LOR";
  }
  return "?";
}

Heuristic parse_heuristic(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  for (Heuristic h : kAllHeuristics) {
    if (to_string(h) == upper) return h;
  }
  throw std::invalid_argument("unknown heuristic '" + std::string(name) +
                              "' (expected fifo|spt|mor|mwr|lor)");
}

namespace {

// Smaller key wins; maximizing rules negate.
long long key(Heuristic rule, const ReadyOp& op, const Instance& instance) {
  switch (rule) {
    case Heuristic::kFifo:
      return op.arrival;
    case Heuristic::kSpt:
      return op.duration;
    case Heuristic::kMor:
      return -(instance.job_length(op.job) - op.op_index);
    case Heuristic::kMwr:
      return -instance.remaining_work(op.job, op.op_index);
    case Heuristic::kLor:
      return instance.job_length(op.job) - op.op_index;
  }
  return 0;
}

}  // namespace

const ReadyOp& apply(Heuristic rule, std::span<const ReadyOp> ready,
                     const SimState& /*state*/, const Instance& instance) {
  if (ready.empty()) {
    throw std::invalid_argument("dispatching rule applied to an empty ready set");
  }
  const ReadyOp* best = &ready.front();
  long long best_key = key(rule, *best, instance);
  for (const ReadyOp& op : ready.subspan(1)) {
    long long k = key(rule, op, instance);
    if (k < best_key ||
        (k == best_key && std::tie(op.job, op.op_index) <
                              std::tie(best->job, best->op_index))) {
      best = &op;
      best_key = k;
    }
  }
  return *best;
}

Policy constant_rule_policy(Heuristic rule) {
  return [rule](const DecisionContext& ctx) {
    return Choice{apply(rule, ctx.ready, ctx.state, ctx.instance), rule};
  };
}

ScheduleResult run_pdr(const Instance& instance, Heuristic rule,
                       const EpisodeOptions& options) {
  return run_episode(instance, constant_rule_policy(rule), options);
}

}  // namespace prorl
