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

// Programmatic dispatching policies.
//
//   Program   E := h | if B then E1 else E2
//   Condition B := w . [1, LD, AM, AO, JD, ST] > 0
//   Action    h in {FIFO, SPT, MOR, MWR, LOR}
//
// A Program is an immutable value stored as a pre-order node list. Depth of
// a lone action is 1 and each `if` adds one level. Tokens: an action is 1,
// an `if` is 1 keyword + 6 weights + 1 comparison plus its branches.

#ifndef PRORL_DSL_HPP_
#define PRORL_DSL_HPP_

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prorl/concepts.hpp"
#include "prorl/heuristic.hpp"
#include "prorl/random.hpp"
#include "prorl/sim.hpp"

namespace prorl {

inline constexpr int kConditionArity = ConceptVector::kSize + 1;
inline constexpr double kWeightMin = -2.0;
inline constexpr double kWeightMax = 2.0;
inline constexpr int kIfTokens = 1 + kConditionArity + 1;

struct ProgramLimits {
  int max_depth = 4;
  int max_tokens = 85;
};

class ProgramError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear threshold over [1, LD, AM, AO, JD, ST]; bias first.
struct Condition {
  std::array<double, kConditionArity> weights{};

  double score(const ConceptVector& c) const noexcept {
    return weights[0] + weights[1] * c.ld + weights[2] * c.am +
           weights[3] * c.ao + weights[4] * c.jd + weights[5] * c.st;
  }
  /// Strict: a score of exactly 0 takes the else branch.
  bool holds(const ConceptVector& c) const noexcept { return score(c) > 0.0; }

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct ProgramNode {
  bool is_if = false;
  Heuristic action = Heuristic::kFifo;  // meaningful for leaves
  Condition condition;                  // meaningful for if nodes

  friend bool operator==(const ProgramNode&, const ProgramNode&) = default;
};

/// Per-call instrumentation for evaluate().
struct EvalStats {
  int conditions_evaluated = 0;
};

/// Flattened condition weights in pre-order; 6 per `if` node.
using ParamVector = std::vector<double>;

class Program {
 public:
  static Program action(Heuristic h);
  static Program branch(const Condition& condition, const Program& then_branch,
                        const Program& else_branch);
  /// Builds from a pre-order list; throws ProgramError unless the list is
  /// exactly one complete tree.
  static Program from_nodes(std::vector<ProgramNode> nodes);

  const std::vector<ProgramNode>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const ProgramNode& root() const noexcept { return nodes_.front(); }

  /// Number of nodes in the subtree rooted at pre-order position i.
  int subtree_size(int i) const noexcept { return subtree_size_[i]; }
  int then_child(int i) const noexcept { return i + 1; }
  int else_child(int i) const noexcept { return i + 1 + subtree_size_[i + 1]; }
  /// 1-based level of node i (root is level 1).
  int level(int i) const noexcept { return level_[i]; }

  int depth() const noexcept { return depth_; }
  int token_count() const noexcept { return tokens_; }
  int if_count() const noexcept { return if_count_; }
  int subtree_depth(int i) const;
  int subtree_tokens(int i) const;

  /// Throws ProgramError when depth or token limits are exceeded.
  void check_limits(const ProgramLimits& limits) const;

  Program subtree(int i) const;
  Program replace_subtree(int i, const Program& replacement) const;

  friend bool operator==(const Program& a, const Program& b) {
    return a.nodes_ == b.nodes_;
  }

 private:
  explicit Program(std::vector<ProgramNode> nodes);

  std::vector<ProgramNode> nodes_;
  std::vector<int> subtree_size_;
  std::vector<int> level_;
  int depth_ = 0;
  int tokens_ = 0;
  int if_count_ = 0;
};

/// Top-down walk to the selected action; at most depth - 1 conditions.
Heuristic evaluate(const Program& program, const ConceptVector& concepts,
                   EvalStats* stats = nullptr);

inline int token_count(const Program& program) { return program.token_count(); }

/// Evaluates the program to a rule, then dispatches with that rule.
Policy make_policy(Program program);

/// Grammar-driven generation: at each non-terminal, `if` with probability 1/2
/// while depth and token budget allow, otherwise an action. Actions are
/// uniform over the five rules; weights uniform on [-2, 2].
Program random_program(Rng& rng, const ProgramLimits& limits = {});

/// Picks one node uniformly. An action gets a different rule; an `if` is
/// regrown from scratch within the remaining depth and token budget. The
/// input is unchanged.
Program mutate(const Program& program, Rng& rng,
               const ProgramLimits& limits = {});

ParamVector get_params(const Program& program);
/// Throws ProgramError on a length mismatch. Structure is unchanged.
Program set_params(const Program& program, std::span<const double> params);

/// Nested if/then/else with two-decimal signed coefficients; zero terms are
/// dropped, e.g. "if (1.00 - 0.84*AM > 0):\n    then MWR\nelse SPT".
std::string pretty_print(const Program& program);

/// JSON tree: {"kind":"if","weights":[6 numbers],"then":{..},"else":{..}} or
/// {"kind":"action","heuristic":"SPT"}. Weights keep full precision.
std::string serialize(const Program& program);
/// Throws ProgramError for malformed documents, unknown heuristics, wrong
/// weight arity, or limit violations.
Program deserialize(std::string_view text, const ProgramLimits& limits = {});

}  // namespace prorl

#endif  // PRORL_DSL_HPP_
