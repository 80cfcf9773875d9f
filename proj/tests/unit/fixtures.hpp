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

#ifndef PRORL_TESTS_FIXTURES_HPP_
#define PRORL_TESTS_FIXTURES_HPP_

#include <string>

#include "prorl/instance.hpp"
#include "prorl/random.hpp"

namespace prorl::testing {

inline std::string data_path(const std::string& relative) {
  return std::string(PRORL_DATA_DIR) + "/" + relative;
}

// J0: (M0,3) (M1,2); J1: (M1,2) (M0,4).
inline Instance tiny() {
  return Instance("tiny", 2, {{{0, 3}, {1, 2}}, {{1, 2}, {0, 4}}});
}

inline Instance load_named(const std::string& name) {
  if (name.rfind("ta", 0) == 0) {
    return load_instance(data_path("instances/ta/" + name + ".txt"),
                         InstanceFormat::kTaillard);
  }
  const std::string family = name.substr(0, name.find_first_of("0123456789"));
  return load_instance(data_path("instances/" + family + "/" + name + ".txt"),
                       InstanceFormat::kStandard);
}

// Rectangular instance with each job visiting every machine once.
inline Instance random_instance(Rng& rng, int jobs, int machines, int max_duration) {
  std::vector<std::vector<Operation>> ops(jobs);
  for (auto& job : ops) {
    std::vector<int> order(machines);
    for (int k = 0; k < machines; ++k) order[k] = k;
    for (int k = machines - 1; k > 0; --k) {
      std::swap(order[k], order[rng.below(k + 1)]);
    }
    for (int k = 0; k < machines; ++k) {
      job.push_back({order[k], 1 + static_cast<Time>(rng.below(max_duration))});
    }
  }
  return Instance("random", machines, std::move(ops));
}

}  // namespace prorl::testing

#endif  // PRORL_TESTS_FIXTURES_HPP_
