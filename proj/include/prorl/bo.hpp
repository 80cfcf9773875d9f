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

// Bayesian optimization of the condition weights of a fixed program shape.
// The surrogate is a zero-mean Gaussian process on standardized targets with
// a squared-exponential kernel; candidates are ranked by upper confidence
// bound.

#ifndef PRORL_BO_HPP_
#define PRORL_BO_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <atomic>
#include <span>
#include <stdexcept>
#include <vector>

#include "prorl/dsl.hpp"
#include "prorl/instance.hpp"
#include "prorl/random.hpp"

namespace prorl {

struct KernelSettings {
  double length_scale = 1.0;
  double signal_var = 1.0;
  double jitter = 1e-6;
  double max_jitter = 1e-2;
  // Raw parameters are multiplied by this before entering the kernel; 0.5
  // maps the [-2, 2] weight box onto [-1, 1].
  double input_scale = 0.5;
};

struct BoSettings {
  KernelSettings kernel;
  double beta = 2.0;
  int candidates = 256;
  int init_points = 10;
  int iterations = 20;
};

class GpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Observed (parameters, return) pairs sharing one dimension.
class BoDataset {
 public:
  BoDataset() = default;

  /// Throws std::invalid_argument on dimension mismatch or non-finite values.
  void add(std::span<const double> params, double value);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  int dim() const noexcept { return dim_; }
  const std::vector<std::vector<double>>& inputs() const noexcept {
    return inputs_;
  }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  int dim_ = -1;
  std::vector<std::vector<double>> inputs_;
  std::vector<double> values_;
};

struct GpPrediction {
  double mean = 0.0;
  double stddev = 0.0;
};

class GpModel {
 public:
  /// Throws std::invalid_argument for an empty dataset and GpError when the
  /// Gram matrix stays indefinite up to max_jitter.
  static GpModel fit(const BoDataset& data, const KernelSettings& kernel = {});

  /// Predictive mean and standard deviation in return units. Throws
  /// std::invalid_argument on dimension mismatch.
  GpPrediction posterior(std::span<const double> query) const;

  int dim() const noexcept { return static_cast<int>(inputs_.cols()); }
  double jitter_used() const noexcept { return jitter_used_; }
  double target_mean() const noexcept { return y_mean_; }
  double target_scale() const noexcept { return y_scale_; }

 private:
  GpModel() = default;
  // The Gram system is solved in extended precision; with tiny jitter it is
  // badly conditioned.
  using Real = long double;
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

  Real kernel(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) const;

  KernelSettings settings_;
  Matrix inputs_;  // one scaled observation per row
  Eigen::LLT<Matrix> factor_;
  Vector alpha_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  double jitter_used_ = 0.0;
};

/// mean + beta * stddev; beta must be >= 0.
double ucb(const GpModel& model, std::span<const double> query, double beta);

/// Best-UCB point among `n_candidates` uniform draws from [-2, 2]^dim (first
/// occurrence wins ties). Returns an empty vector for dim == 0 without
/// touching the model.
ParamVector propose(const GpModel& model, int dim, double beta, Rng& rng,
                    int n_candidates);

/// Thread-safe episode budget. Charges never exceed the budget.
class EpisodeMeter {
 public:
  explicit EpisodeMeter(long long budget) : budget_(budget) {}
  EpisodeMeter(const EpisodeMeter&) = delete;
  EpisodeMeter& operator=(const EpisodeMeter&) = delete;

  /// Charges one episode; false when the budget is spent.
  bool try_charge() { return acquire_up_to(1) == 1; }
  /// Charges min(n, remaining) episodes and returns that count.
  long long acquire_up_to(long long n);

  long long budget() const noexcept { return budget_; }
  long long used() const noexcept { return used_.load(); }
  long long remaining() const noexcept { return budget_ - used_.load(); }

 private:
  const long long budget_;
  std::atomic<long long> used_{0};
};

struct ParamSearchResult {
  Program program;                // best observed parameters installed
  double best_return = 0.0;       // best observed episode return
  long long episodes = 0;         // episodes charged
  std::vector<double> returns;    // every observed return, in order
};

/// Evaluates init_points uniform parameter vectors, then runs `iterations`
/// rounds of fit -> propose -> evaluate, charging one episode per
/// evaluation and stopping early when the meter runs dry. A program without
/// conditions is evaluated once. Throws BudgetExhausted if not even one
/// episode can be charged.
ParamSearchResult optimize_params(const Program& program,
                                  const Instance& instance,
                                  const BoSettings& settings,
                                  EpisodeMeter& meter, Rng& rng);

/// One deterministic episode of `program`; returns -makespan.
double episode_return(const Program& program, const Instance& instance);

}  // namespace prorl

#endif  // PRORL_BO_HPP_
