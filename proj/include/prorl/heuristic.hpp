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

#ifndef PRORL_HEURISTIC_HPP_
#define PRORL_HEURISTIC_HPP_

#include <array>
#include <string>
#include <string_view>

namespace prorl {

// The action set of the policy language.
enum class Heuristic { kFifo, kSpt, kMor, kMwr, kLor };

inline constexpr std::array<Heuristic, 5> kAllHeuristics = {
    Heuristic::kFifo, Heuristic::kSpt, Heuristic::kMor, Heuristic::kMwr,
    Heuristic::kLor};

std::string_view to_string(Heuristic h) noexcept;

// Case-insensitive; throws std::invalid_argument on unknown names.
Heuristic parse_heuristic(std::string_view name);

}  // namespace prorl

#endif  // PRORL_HEURISTIC_HPP_
