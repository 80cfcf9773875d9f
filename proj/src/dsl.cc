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

#include "prorl/dsl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "prorl/pdr.hpp"

namespace prorl {

Program::Program(std::vector<ProgramNode> nodes) : nodes_(std::move(nodes)) {
  const int n = static_cast<int>(nodes_.size());
  subtree_size_.assign(n, 0);
  level_.assign(n, 0);
  // Resolve subtree extents with an explicit stack of pending children.
  struct Frame {
    int index;
    int pending;
  };
  std::vector<Frame> stack;
  int i = 0;
  for (; i < n; ++i) {
    if (stack.empty() && i > 0) break;
    level_[i] = static_cast<int>(stack.size()) + 1;
    if (nodes_[i].is_if) {
      ++if_count_;
      stack.push_back({i, 2});
      continue;
    }
    subtree_size_[i] = 1;
    // Close every frame this leaf completes.
    while (!stack.empty() && --stack.back().pending == 0) {
      Frame done = stack.back();
      stack.pop_back();
      subtree_size_[done.index] = i - done.index + 1;
    }
  }
  if (n == 0 || !stack.empty() || i != n) {
    throw ProgramError("node list is not exactly one complete program tree");
  }
  for (int k = 0; k < n; ++k) {
    depth_ = std::max(depth_, level_[k]);
    tokens_ += nodes_[k].is_if ? kIfTokens : 1;
  }
}

Program Program::action(Heuristic h) {
  return Program({ProgramNode{false, h, {}}});
}

Program Program::branch(const Condition& condition, const Program& then_branch,
                        const Program& else_branch) {
  std::vector<ProgramNode> nodes;
  nodes.reserve(1 + then_branch.size() + else_branch.size());
  nodes.push_back(ProgramNode{true, Heuristic::kFifo, condition});
  nodes.insert(nodes.end(), then_branch.nodes_.begin(), then_branch.nodes_.end());
  nodes.insert(nodes.end(), else_branch.nodes_.begin(), else_branch.nodes_.end());
  return Program(std::move(nodes));
}

Program Program::from_nodes(std::vector<ProgramNode> nodes) {
  return Program(std::move(nodes));
}

int Program::subtree_depth(int i) const {
  int deepest = level_[i];
  for (int k = i; k < i + subtree_size_[i]; ++k) deepest = std::max(deepest, level_[k]);
  return deepest - level_[i] + 1;
}

int Program::subtree_tokens(int i) const {
  int tokens = 0;
  for (int k = i; k < i + subtree_size_[i]; ++k) {
    tokens += nodes_[k].is_if ? kIfTokens : 1;
  }
  return tokens;
}

void Program::check_limits(const ProgramLimits& limits) const {
  if (depth_ > limits.max_depth) {
    throw ProgramError("program depth " + std::to_string(depth_) +
                       " exceeds the limit of " +
                       std::to_string(limits.max_depth));
  }
  if (tokens_ > limits.max_tokens) {
    throw ProgramError("program has " + std::to_string(tokens_) +
                       " tokens, limit is " + std::to_string(limits.max_tokens));
  }
}

Program Program::subtree(int i) const {
  return Program(std::vector<ProgramNode>(nodes_.begin() + i,
                                          nodes_.begin() + i + subtree_size_[i]));
}

Program Program::replace_subtree(int i, const Program& replacement) const {
  std::vector<ProgramNode> nodes;
  nodes.reserve(nodes_.size() - subtree_size_[i] + replacement.size());
  nodes.insert(nodes.end(), nodes_.begin(), nodes_.begin() + i);
  nodes.insert(nodes.end(), replacement.nodes_.begin(), replacement.nodes_.end());
  nodes.insert(nodes.end(), nodes_.begin() + i + subtree_size_[i], nodes_.end());
  return Program(std::move(nodes));
}

Heuristic evaluate(const Program& program, const ConceptVector& concepts,
                   EvalStats* stats) {
  const auto& nodes = program.nodes();
  int i = 0;
  int evaluated = 0;
  while (nodes[i].is_if) {
    ++evaluated;
    i = nodes[i].condition.holds(concepts) ? program.then_child(i)
                                           : program.else_child(i);
  }
  if (stats) stats->conditions_evaluated = evaluated;
  return nodes[i].action;
}

Policy make_policy(Program program) {
  return [program = std::move(program)](const DecisionContext& ctx) {
    const Heuristic rule = evaluate(program, ctx.concepts);
    return Choice{apply(rule, ctx.ready, ctx.state, ctx.instance), rule};
  };
}

namespace {

Heuristic random_heuristic(Rng& rng) {
  return kAllHeuristics[rng.below(kAllHeuristics.size())];
}

Condition random_condition(Rng& rng) {
  Condition c;
  for (double& w : c.weights) w = rng.uniform(kWeightMin, kWeightMax);
  return c;
}

// Expands a non-terminal sitting at `level`; appends its pre-order nodes.
// Returns the tokens used, never more than `token_budget` (>= 1).
int expand(int level, int token_budget, const ProgramLimits& limits, Rng& rng,
           std::vector<ProgramNode>& out) {
  const bool can_branch = level < limits.max_depth && token_budget >= kIfTokens + 2;
  if (can_branch && rng.bernoulli(0.5)) {
    out.push_back(ProgramNode{true, Heuristic::kFifo, random_condition(rng)});
    int used = kIfTokens;
    // Reserve one token for the else branch.
    used += expand(level + 1, token_budget - used - 1, limits, rng, out);
    used += expand(level + 1, token_budget - used, limits, rng, out);
    return used;
  }
  out.push_back(ProgramNode{false, random_heuristic(rng), {}});
  return 1;
}

}  // namespace

Program random_program(Rng& rng, const ProgramLimits& limits) {
  std::vector<ProgramNode> nodes;
  expand(1, limits.max_tokens, limits, rng, nodes);
  return Program::from_nodes(std::move(nodes));
}

Program mutate(const Program& program, Rng& rng, const ProgramLimits& limits) {
  const int target = static_cast<int>(rng.below(program.size()));
  const ProgramNode& node = program.nodes()[target];
  if (!node.is_if) {
    // Uniform over the four other rules.
    auto pick = rng.below(kAllHeuristics.size() - 1);
    Heuristic h = kAllHeuristics[pick];
    if (h == node.action) h = kAllHeuristics.back();
    return program.replace_subtree(target, Program::action(h));
  }
  const int budget =
      limits.max_tokens - (program.token_count() - program.subtree_tokens(target));
  std::vector<ProgramNode> grown;
  expand(program.level(target), std::max(budget, 1), limits, rng, grown);
  return program.replace_subtree(target, Program::from_nodes(std::move(grown)));
}

ParamVector get_params(const Program& program) {
  ParamVector params;
  params.reserve(static_cast<std::size_t>(program.if_count()) * kConditionArity);
  for (const ProgramNode& node : program.nodes()) {
    if (node.is_if) {
      params.insert(params.end(), node.condition.weights.begin(),
                    node.condition.weights.end());
    }
  }
  return params;
}

Program set_params(const Program& program, std::span<const double> params) {
  const std::size_t expected =
      static_cast<std::size_t>(program.if_count()) * kConditionArity;
  if (params.size() != expected) {
    throw ProgramError("parameter vector has length " +
                       std::to_string(params.size()) + ", program needs " +
                       std::to_string(expected));
  }
  std::vector<ProgramNode> nodes = program.nodes();
  std::size_t k = 0;
  for (ProgramNode& node : nodes) {
    if (!node.is_if) continue;
    std::copy_n(params.begin() + k, kConditionArity, node.condition.weights.begin());
    k += kConditionArity;
  }
  return Program::from_nodes(std::move(nodes));
}

namespace {

constexpr std::array<const char*, ConceptVector::kSize> kConceptNames = {
    "LD", "AM", "AO", "JD", "ST"};

std::string format_condition(const Condition& c) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", c.weights[0]);
  std::string text = buf;
  if (text == "-0.00") text = "0.00";
  for (int k = 1; k < kConditionArity; ++k) {
    std::snprintf(buf, sizeof(buf), "%.2f", std::fabs(c.weights[k]));
    if (std::string_view(buf) == "0.00") continue;
    text += c.weights[k] < 0 ? " - " : " + ";
    text += buf;
    text += '*';
    text += kConceptNames[k - 1];
  }
  return text + " > 0";
}

void print_node(const Program& p, int i, int indent, std::string& out) {
  const ProgramNode& node = p.nodes()[i];
  if (!node.is_if) {
    out += to_string(node.action);
    return;
  }
  out += "if (" + format_condition(node.condition) + "):\n";
  out += std::string(indent + 4, ' ') + "then ";
  print_node(p, p.then_child(i), indent + 4, out);
  out += '\n' + std::string(indent, ' ') + "else ";
  print_node(p, p.else_child(i), indent, out);
}

using nlohmann::json;

json to_json(const Program& p, int i) {
  const ProgramNode& node = p.nodes()[i];
  if (!node.is_if) {
    return json{{"kind", "action"}, {"heuristic", std::string(to_string(node.action))}};
  }
  return json{{"kind", "if"},
              {"weights", node.condition.weights},
              {"then", to_json(p, p.then_child(i))},
              {"else", to_json(p, p.else_child(i))}};
}

void from_json(const json& doc, int level, const ProgramLimits& limits,
               std::vector<ProgramNode>& out) {
  if (level > limits.max_depth) {
    throw ProgramError("program depth exceeds the limit of " +
                       std::to_string(limits.max_depth));
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw ProgramError("program node must be an object with a string \"kind\"");
  }
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "action") {
    if (!doc.contains("heuristic") || !doc["heuristic"].is_string()) {
      throw ProgramError("action node needs a string \"heuristic\"");
    }
    try {
      out.push_back({false, parse_heuristic(doc["heuristic"].get<std::string>()), {}});
    } catch (const std::invalid_argument& e) {
      throw ProgramError(e.what());
    }
    return;
  }
  if (kind != "if") throw ProgramError("unknown node kind '" + kind + "'");
  if (!doc.contains("weights") || !doc["weights"].is_array()) {
    throw ProgramError("if node needs a \"weights\" array");
  }
  const json& weights = doc["weights"];
  if (weights.size() != kConditionArity) {
    throw ProgramError("condition needs " + std::to_string(kConditionArity) +
                       " weights, found " + std::to_string(weights.size()));
  }
  ProgramNode node{true, Heuristic::kFifo, {}};
  for (int k = 0; k < kConditionArity; ++k) {
    if (!weights[k].is_number()) throw ProgramError("weights must be numbers");
    node.condition.weights[k] = weights[k].get<double>();
    if (!std::isfinite(node.condition.weights[k])) {
      throw ProgramError("weights must be finite");
    }
  }
  if (!doc.contains("then") || !doc.contains("else")) {
    throw ProgramError("if node needs \"then\" and \"else\" branches");
  }
  out.push_back(node);
  from_json(doc["then"], level + 1, limits, out);
  from_json(doc["else"], level + 1, limits, out);
}

}  // namespace

std::string pretty_print(const Program& program) {
  std::string out;
  print_node(program, 0, 0, out);
  return out;
}

std::string serialize(const Program& program) {
  return to_json(program, 0).dump(2) + "\n";
}

Program deserialize(std::string_view text, const ProgramLimits& limits) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) throw ProgramError("policy document is not valid JSON");
  std::vector<ProgramNode> nodes;
  from_json(doc, 1, limits, nodes);
  Program program = Program::from_nodes(std::move(nodes));
  program.check_limits(limits);
  return program;
}

}  // namespace prorl
