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

#ifndef PRORL_CONCEPTS_HPP_
#define PRORL_CONCEPTS_HPP_

#include <array>

namespace prorl {

class Instance;
class SimState;

/// Normalized state abstractions consumed by program conditions. Every field
/// lies in [0, 1].
struct ConceptVector {
  double ld = 0.0;  // machine load balance
  double am = 0.0;  // available machine ratio
  double ao = 0.0;  // available operation ratio
  double jd = 0.0;  // job remaining-time balance
  double st = 0.0;  // shortest-operation remaining-time balance

  static constexpr int kSize = 5;

  std::array<double, kSize> as_array() const noexcept {
    return {ld, am, ao, jd, st};
  }

  friend bool operator==(const ConceptVector&, const ConceptVector&) = default;
};

/// Computes concepts at the current decision clock, before dispatch.
///
///   LD = (max L - min L) / max L, L_j = unscheduled work destined for machine j
///   AM = machines free at the clock / m
///   AO = ready operations / unscheduled operations
///   JD = (max J - min J) / max J, J_i = unscheduled work of job i, over jobs
///        that still have work (0 when at most one such job remains)
///   ST = (max p - min p) / max p over unscheduled operation durations
///
/// A ratio whose max is 0 is defined as 0. Throws SimError when every
/// operation is already scheduled.
ConceptVector extract(const SimState& state, const Instance& instance);

}  // namespace prorl

#endif  // PRORL_CONCEPTS_HPP_
