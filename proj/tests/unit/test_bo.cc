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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "prorl/bo.hpp"
#include "gp_oracle.hpp"
#include "prorl/pdr.hpp"

using namespace prorl;
using doctest::Approx;

namespace {

BoDataset make_data(std::initializer_list<std::pair<std::vector<double>, double>> points) {
  BoDataset d;
  for (const auto& [x, y] : points) d.add(x, y);
  return d;
}

}  // namespace

TEST_CASE("single point interpolation") {
  const GpModel m = GpModel::fit(make_data({{{0.0, 0.0}, -100.0}}));
  const GpPrediction p = m.posterior(std::vector<double>{0.0, 0.0});
  CHECK(std::fabs(p.mean + 100.0) < 1e-6);
  CHECK_THROWS_AS(m.posterior(std::vector<double>{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(GpModel::fit(BoDataset{}), std::invalid_argument);
}

TEST_CASE("duplicate inputs with different targets") {
  const GpModel m = GpModel::fit(make_data({{{0.5}, 0.0}, {{0.5}, 10.0}}));
  const GpPrediction p = m.posterior(std::vector<double>{0.5});
  CHECK(p.mean > 0.0);
  CHECK(p.mean < 10.0);
  CHECK(p.mean == Approx(5.0));
}

TEST_CASE("two-point closed form") {
  KernelSettings ks;
  ks.input_scale = 1.0;
  const GpModel m = GpModel::fit(make_data({{{0.0}, 0.0}, {{1.0}, 1.0}}), ks);
  REQUIRE(m.jitter_used() == 1e-6);
  // Standardized targets are -1, +1; by antisymmetry the mean at 0.5 is the
  // target mean and k* = (b, b) projects onto the symmetric eigenvector.
  const double a = std::exp(-0.5), b = std::exp(-0.125), j = 1e-6;
  const double sd = 0.5 * std::sqrt(1.0 - 2.0 * b * b / (1.0 + j + a));
  const GpPrediction p = m.posterior(std::vector<double>{0.5});
  CHECK(p.mean == Approx(0.5).epsilon(1e-12));
  CHECK(p.stddev == Approx(sd).epsilon(1e-9));
}

TEST_CASE("dense solve oracle on random datasets") {
  Rng rng(21);
  const prorl::testing::GpOracle oracle;
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + trial % 2;
    const int n = 1 + static_cast<int>(rng.below(12));
    BoDataset data;
    for (int i = 0; i < n; ++i) {
      std::vector<double> x(dim);
      for (double& v : x) v = rng.uniform(-2, 2);
      data.add(x, rng.uniform(-500, -50));
    }
    const GpModel m = GpModel::fit(data);
    for (int q = 0; q < 10; ++q) {
      std::vector<double> x(dim);
      for (double& v : x) v = rng.uniform(-2.5, 2.5);
      const GpPrediction got = m.posterior(x);
      const GpPrediction want = oracle(data, x, {}, m.jitter_used());
      // Relative to the return scale; targets are makespan-sized.
      CHECK(std::fabs(got.mean - want.mean) <= 1e-8 * std::max(1.0, std::fabs(want.mean)));
      CHECK(std::fabs(got.stddev - want.stddev) <= 1e-8 * std::max(1.0, m.target_scale()));
    }
  }
}

TEST_CASE("interpolation and variance reduction at training inputs") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    BoDataset data;
    for (int i = 0; i < 6; ++i) {
      std::vector<double> x(3);
      for (double& v : x) v = rng.uniform(-2, 2);
      data.add(x, rng.uniform(-1000, -500));
    }
    const GpModel m = GpModel::fit(data);
    const double prior_sd = m.target_scale();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const GpPrediction p = m.posterior(data.inputs()[i]);
      CHECK(std::fabs(p.mean - data.values()[i]) <= 1e-4 * std::fabs(data.values()[i]));
      CHECK(p.stddev <= prior_sd);
      CHECK(p.stddev <= 1e-2 * prior_sd);
    }
  }
}

TEST_CASE("prior recovery far from data") {
  const BoDataset data = make_data({{{0.0}, -10.0}, {{1.0}, -20.0}, {{-1.0}, -15.0}});
  const GpModel m = GpModel::fit(data);
  const GpPrediction p = m.posterior(std::vector<double>{40.0});
  CHECK(p.mean == Approx(-15.0));
  CHECK(p.stddev == Approx(m.target_scale()));
}

TEST_CASE("permutation symmetry") {
  Rng rng(23);
  std::vector<std::pair<std::vector<double>, double>> points;
  for (int i = 0; i < 8; ++i) {
    points.push_back({{rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(-10, 0)});
  }
  BoDataset forward, backward;
  for (const auto& [x, y] : points) forward.add(x, y);
  for (auto it = points.rbegin(); it != points.rend(); ++it) backward.add(it->first, it->second);
  const GpModel a = GpModel::fit(forward), b = GpModel::fit(backward);
  for (int q = 0; q < 20; ++q) {
    const std::vector<double> x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    CHECK(std::fabs(a.posterior(x).mean - b.posterior(x).mean) <= 1e-10);
    CHECK(std::fabs(a.posterior(x).stddev - b.posterior(x).stddev) <= 1e-10);
  }
}

TEST_CASE("dataset validation") {
  BoDataset d;
  d.add(std::vector<double>{1.0}, 2.0);
  CHECK_THROWS_AS(d.add(std::vector<double>{1.0, 2.0}, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(d.add(std::vector<double>{1.0}, NAN), std::invalid_argument);
  CHECK_THROWS_AS(d.add(std::vector<double>{INFINITY}, 1.0), std::invalid_argument);
}

TEST_CASE("upper confidence bound") {
  const GpModel m = GpModel::fit(make_data({{{0.0}, 0.0}, {{1.0}, 1.0}}));
  const std::vector<double> q{1.7};
  const GpPrediction p = m.posterior(q);
  CHECK(ucb(m, q, 0.0) == p.mean);
  REQUIRE(p.stddev > 0);
  CHECK(ucb(m, q, 1.0) < ucb(m, q, 2.0));
  CHECK(ucb(m, q, 2.0) == Approx(p.mean + 2.0 * p.stddev));
  CHECK(ucb(m, std::vector<double>{1.0}, 5.0) == Approx(1.0).epsilon(1e-2));
  CHECK_THROWS_AS(ucb(m, q, -1.0), std::invalid_argument);
}

TEST_CASE("propose") {
  const BoDataset data = make_data({{{-1.0}, 0.0}, {{1.0}, 10.0}});
  const GpModel m = GpModel::fit(data);
  Rng rng(5);
  CHECK(propose(m, 0, 2.0, rng, 10).empty());

  Rng one(6), copy(6);
  const ParamVector single = propose(m, 1, 2.0, one, 1);
  CHECK(single == ParamVector{copy.uniform(kWeightMin, kWeightMax)});

  // Closed-form argmax of the posterior mean on a fine grid.
  double best_x = 0, best = -1e300;
  for (int i = 0; i <= 40000; ++i) {
    const double x = -2.0 + 4.0 * i / 40000.0;
    const double mean = prorl::testing::GpOracle{}(data, {x}, {}, m.jitter_used()).mean;
    if (mean > best) {
      best = mean;
      best_x = x;
    }
  }
  CHECK(best_x > 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const ParamVector x = propose(m, 1, 0.0, rng, 1024);
    CHECK(std::fabs(x[0] - best_x) < 0.05);
  }
}

TEST_CASE("episode meter") {
  EpisodeMeter meter(5);
  CHECK(meter.acquire_up_to(3) == 3);
  CHECK(meter.try_charge());
  CHECK(meter.acquire_up_to(10) == 1);
  CHECK_FALSE(meter.try_charge());
  CHECK(meter.used() == 5);
  CHECK(meter.remaining() == 0);

  EpisodeMeter shared(1000);
  std::vector<std::thread> pool;
  std::atomic<long long> granted{0};
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&] {
      while (shared.try_charge()) ++granted;
    });
  }
  for (auto& t : pool) t.join();
  CHECK(granted == 1000);
  CHECK(shared.used() == 1000);
}

TEST_CASE("optimize_params budget paths") {
  const Instance ft06 = prorl::testing::load_named("ft06");
  const BoSettings defaults;
  Rng rng(9);

  EpisodeMeter m1(100);
  const Program spt = Program::action(Heuristic::kSpt);
  const ParamSearchResult a = optimize_params(spt, ft06, defaults, m1, rng);
  CHECK(a.episodes == 1);
  CHECK(m1.used() == 1);
  CHECK(a.best_return == -static_cast<double>(run_pdr(ft06, Heuristic::kSpt).makespan));

  Rng gen(10);
  Program shaped = random_program(gen);
  while (shaped.if_count() == 0) shaped = random_program(gen);

  BoSettings no_bo;
  no_bo.iterations = 0;
  EpisodeMeter m2(100);
  const ParamSearchResult b = optimize_params(shaped, ft06, no_bo, m2, rng);
  CHECK(b.episodes == 10);
  CHECK(b.best_return == *std::max_element(b.returns.begin(), b.returns.end()));

  EpisodeMeter m3(100);
  const ParamSearchResult c = optimize_params(shaped, ft06, defaults, m3, rng);
  CHECK(c.episodes == 30);
  CHECK(m3.used() == 30);
  CHECK(c.returns.size() == 30);
  // Returned program reproduces its best observed return.
  CHECK(episode_return(c.program, ft06) == c.best_return);
  double running = -1e300;
  for (double r : c.returns) running = std::max(running, r);
  CHECK(running == c.best_return);

  EpisodeMeter m4(7);
  CHECK(optimize_params(shaped, ft06, defaults, m4, rng).episodes == 7);
  CHECK_THROWS_AS(optimize_params(shaped, ft06, defaults, m4, rng), BudgetExhausted);
  EpisodeMeter m5(0);
  CHECK_THROWS_AS(optimize_params(spt, ft06, defaults, m5, rng), BudgetExhausted);
}
