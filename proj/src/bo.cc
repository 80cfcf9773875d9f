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

#include "prorl/bo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "prorl/sim.hpp"

namespace prorl {

void BoDataset::add(std::span<const double> params, double value) {
  if (dim_ >= 0 && static_cast<int>(params.size()) != dim_) {
    throw std::invalid_argument("observation has dimension " +
                                std::to_string(params.size()) + ", dataset has " +
                                std::to_string(dim_));
  }
  if (!std::isfinite(value) ||
      !std::all_of(params.begin(), params.end(),
                   [](double x) { return std::isfinite(x); })) {
    throw std::invalid_argument("observations must be finite");
  }
  dim_ = static_cast<int>(params.size());
  inputs_.emplace_back(params.begin(), params.end());
  values_.push_back(value);
}

GpModel::Real GpModel::kernel(const Eigen::Ref<const Vector>& a,
                              const Eigen::Ref<const Vector>& b) const {
  const Real r2 = (a - b).squaredNorm();
  const Real l = settings_.length_scale;
  return settings_.signal_var * std::exp(-0.5L * r2 / (l * l));
}

GpModel GpModel::fit(const BoDataset& data, const KernelSettings& kernel) {
  if (data.empty()) {
    throw std::invalid_argument("cannot fit a Gaussian process to no data");
  }
  if (!(kernel.length_scale > 0) || !(kernel.signal_var > 0) ||
      !(kernel.jitter > 0)) {
    throw std::invalid_argument("kernel settings must be positive");
  }
  GpModel model;
  model.settings_ = kernel;
  const int n = static_cast<int>(data.size());
  const int d = data.dim();
  model.inputs_.resize(n, d);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      model.inputs_(i, k) = data.inputs()[i][k] * kernel.input_scale;
    }
    y(i) = data.values()[i];
  }

  model.y_mean_ = static_cast<double>(y.mean());
  const double var = static_cast<double>((y.array() - model.y_mean_).square().mean());
  const double sd = std::sqrt(var);
  model.y_scale_ = sd > 1e-12 * std::max(1.0, std::fabs(model.y_mean_)) ? sd : 1.0;
  const Vector z = (y.array() - model.y_mean_) / model.y_scale_;

  Matrix gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      gram(i, j) = gram(j, i) =
          model.kernel(model.inputs_.row(i).transpose(), model.inputs_.row(j).transpose());
    }
  }
  for (double jitter = kernel.jitter;; jitter *= 10.0) {
    if (jitter > kernel.max_jitter * (1.0 + 1e-9)) {
      throw GpError("Gram matrix is not positive definite up to jitter " +
                    std::to_string(kernel.max_jitter));
    }
    Matrix k = gram;
    k.diagonal().array() += jitter;
    model.factor_.compute(k);
    if (model.factor_.info() == Eigen::Success) {
      model.jitter_used_ = jitter;
      break;
    }
  }
  model.alpha_ = model.factor_.solve(z);
  return model;
}

GpPrediction GpModel::posterior(std::span<const double> query) const {
  if (static_cast<int>(query.size()) != dim()) {
    throw std::invalid_argument("query has dimension " +
                                std::to_string(query.size()) + ", model has " +
                                std::to_string(dim()));
  }
  const int n = static_cast<int>(inputs_.rows());
  Vector x(dim());
  for (int k = 0; k < dim(); ++k) x(k) = static_cast<Real>(query[k]) * settings_.input_scale;
  Vector kstar(n);
  for (int i = 0; i < n; ++i) kstar(i) = kernel(inputs_.row(i).transpose(), x);

  const Real mean = kstar.dot(alpha_);
  const Vector v = factor_.matrixL().solve(kstar);
  const Real var = std::max(Real(0), settings_.signal_var - v.squaredNorm());
  return {static_cast<double>(y_mean_ + y_scale_ * mean),
          static_cast<double>(y_scale_ * std::sqrt(var))};
}

double ucb(const GpModel& model, std::span<const double> query, double beta) {
  if (beta < 0) throw std::invalid_argument("beta must be non-negative");
  const GpPrediction p = model.posterior(query);
  return p.mean + beta * p.stddev;
}

ParamVector propose(const GpModel& model, int dim, double beta, Rng& rng,
                    int n_candidates) {
  if (dim <= 0) return {};
  if (model.dim() != dim) {
    throw std::invalid_argument("model dimension does not match the request");
  }
  if (n_candidates < 1) throw std::invalid_argument("need at least one candidate");
  ParamVector best, candidate(dim);
  double best_score = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < n_candidates; ++c) {
    for (double& w : candidate) w = rng.uniform(kWeightMin, kWeightMax);
    const double score = ucb(model, candidate, beta);
    if (best.empty() || score > best_score) {
      best = candidate;
      best_score = score;
    }
  }
  return best;
}

long long EpisodeMeter::acquire_up_to(long long n) {
  if (n <= 0) return 0;
  long long used = used_.load();
  while (true) {
    const long long grant = std::min(n, budget_ - used);
    if (grant <= 0) return 0;
    if (used_.compare_exchange_weak(used, used + grant)) return grant;
  }
}

double episode_return(const Program& program, const Instance& instance) {
  return run_episode(instance, make_policy(program), {.record_decisions = false})
      .episode_return();
}

ParamSearchResult optimize_params(const Program& program,
                                  const Instance& instance,
                                  const BoSettings& settings,
                                  EpisodeMeter& meter, Rng& rng) {
  const int dim = program.if_count() * kConditionArity;
  if (meter.remaining() <= 0) {
    throw BudgetExhausted("episode budget exhausted before parameter search");
  }
  ParamSearchResult result{program, 0.0, 0, {}};

  if (dim == 0) {
    if (!meter.try_charge()) {
      throw BudgetExhausted("episode budget exhausted before parameter search");
    }
    result.episodes = 1;
    result.best_return = episode_return(program, instance);
    result.returns.push_back(result.best_return);
    return result;
  }
  if (settings.init_points < 1) {
    throw std::invalid_argument("parameter search needs at least one initial point");
  }

  BoDataset data;
  bool have_best = false;
  // Charges, runs, and records one parameter vector.
  auto evaluate = [&](const ParamVector& params) {
    if (!meter.try_charge()) return false;
    Program candidate = set_params(program, params);
    const double value = episode_return(candidate, instance);
    ++result.episodes;
    result.returns.push_back(value);
    data.add(params, value);
    if (!have_best || value > result.best_return) {
      have_best = true;
      result.best_return = value;
      result.program = std::move(candidate);
    }
    return true;
  };

  ParamVector params(dim);
  for (int i = 0; i < settings.init_points; ++i) {
    for (double& w : params) w = rng.uniform(kWeightMin, kWeightMax);
    if (!evaluate(params)) break;
  }
  for (int it = 0; it < settings.iterations && meter.remaining() > 0; ++it) {
    const GpModel model = GpModel::fit(data, settings.kernel);
    params = propose(model, dim, settings.beta, rng, settings.candidates);
    if (!evaluate(params)) break;
  }
  if (result.episodes == 0) {
    throw BudgetExhausted("episode budget exhausted before parameter search");
  }
  return result;
}

}  // namespace prorl
