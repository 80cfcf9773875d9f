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

#include "doctest.h"
#include "fixtures.hpp"
#include "prorl/instance.hpp"

#include <filesystem>
#include <set>

using namespace prorl;
using prorl::testing::data_path;
using prorl::testing::tiny;

namespace {

ParseError::Kind standard_error(std::string_view text) {
  try {
    parse_standard(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("expected a parse error");
  return ParseError::Kind::kMalformedInteger;
}

ParseError::Kind taillard_error(std::string_view text) {
  try {
    parse_taillard(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("expected a parse error");
  return ParseError::Kind::kMalformedInteger;
}

}  // namespace

TEST_CASE("standard format 2x2") {
  const Instance inst = parse_standard("2 2\n0 3 1 2\n1 2 0 4", "tiny");
  CHECK(inst == tiny());
  CHECK(inst.num_jobs() == 2);
  CHECK(inst.num_machines() == 2);
  CHECK(inst.total_ops() == 4);
  CHECK(inst.remaining_work(0, 0) == 5);
  CHECK(inst.remaining_work(1, 1) == 4);
  CHECK(inst.machine_workload(0) == 7);
  CHECK(inst.lower_bound() == 7);
}

TEST_CASE("standard format 1x1") {
  const Instance inst = parse_standard("1 1\n0 5");
  REQUIRE(inst.num_jobs() == 1);
  CHECK(inst.op(0, 0) == Operation{0, 5});
}

TEST_CASE("comments and blank lines are skipped") {
  const Instance inst =
      parse_standard("# header\n\n2 2\n# job 0\n0 3 1 2\n\n1 2 0 4\n", "tiny");
  CHECK(inst == tiny());
}

TEST_CASE("standard format errors") {
  CHECK(standard_error("2 2\n0 3 1 x\n1 2 0 4") == ParseError::Kind::kMalformedInteger);
  CHECK(standard_error("2 2\n0 3 1\n1 2 0 4") == ParseError::Kind::kTokenCount);
  CHECK(standard_error("2 2\n0 3 2 2\n1 2 0 4") == ParseError::Kind::kMachineIndex);
  CHECK(standard_error("2 2\n0 3 1 0\n1 2 0 4") == ParseError::Kind::kDuration);
  CHECK(standard_error("2 2\n0 3 0 2\n1 2 0 4") == ParseError::Kind::kMachineRevisit);
  try {
    parse_standard("2 2\n0 3 1 2\n1 2 0 -4");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("taillard format matches standard") {
  const Instance t = parse_taillard("2 2\n3 2\n2 4\n1 2\n2 1\n", "tiny");
  CHECK(t == tiny());
  CHECK(taillard_error("2 2\n3 2\n2 4\n0 2\n2 1\n") == ParseError::Kind::kMachineIndex);
  CHECK(taillard_error("2 2\n3 2\n2 4\n1 2\n") == ParseError::Kind::kDimension);
  CHECK(taillard_error("2 2\n3 2 1\n2 4\n1 2\n2 1\n") == ParseError::Kind::kDimension);
}

TEST_CASE("round trip through the standard writer") {
  for (const char* name : {"ft06", "ft10", "la01", "ta21"}) {
    const Instance inst = prorl::testing::load_named(name);
    CHECK(parse_standard(to_standard(inst), inst.name()) == inst);
  }
}

TEST_CASE("bundled ft06 and ta21") {
  const Instance ft06 = prorl::testing::load_named("ft06");
  CHECK(ft06.name() == "ft06");
  CHECK(ft06.total_ops() == 36);
  const Instance ta21 = prorl::testing::load_named("ta21");
  CHECK(ta21.num_jobs() == 20);
  CHECK(ta21.num_machines() == 20);
}

TEST_CASE("every bundled instance visits every machine once per job") {
  namespace fs = std::filesystem;
  int count = 0;
  for (const auto& dir : fs::directory_iterator(data_path("instances"))) {
    const auto format = dir.path().filename() == "ta" ? InstanceFormat::kTaillard
                                                      : InstanceFormat::kStandard;
    for (const auto& file : fs::directory_iterator(dir.path())) {
      const Instance inst = load_instance(file.path().string(), format);
      CHECK(inst.is_rectangular());
      for (int j = 0; j < inst.num_jobs(); ++j) {
        std::set<int> machines;
        for (const Operation& op : inst.job(j)) machines.insert(op.machine);
        CHECK(static_cast<int>(machines.size()) == inst.num_machines());
      }
      ++count;
    }
  }
  CHECK(count > 100);
}

TEST_CASE("best-known table") {
  const BksTable t = load_bks("ta21,1642\nft06,55\n");
  CHECK(t.at("ta21") == 1642);
  CHECK(t.at("ft06") == 55);
  CHECK_FALSE(t.contains("ft10"));
  CHECK_THROWS_AS(t.at("ft10"), std::out_of_range);
  CHECK_THROWS_AS(load_bks("x,0\n"), ParseError);
  CHECK_THROWS_AS(load_bks("a,5\na,6\n"), ParseError);

  const BksTable file = load_bks_file(data_path("bks.csv"));
  CHECK(file.at("ft06") == 55);
  CHECK(file.at("ft10") == 930);
  CHECK(file.at("ta21") == 1642);
}

TEST_CASE("scaling and renaming") {
  const Instance doubled = tiny().scaled(2);
  CHECK(doubled.op(1, 1).duration == 8);
  CHECK(doubled.lower_bound() == 14);
  CHECK(tiny().with_name("other").name() == "other");
  CHECK_THROWS_AS(Instance("bad", 1, {{{1, 3}}}), std::invalid_argument);
  CHECK(parse_format("taillard") == InstanceFormat::kTaillard);
  CHECK_THROWS(parse_format("json"));
}
