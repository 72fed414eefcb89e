// Copyright 2026 The auxbandit Authors.
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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "auxbandit/sim.hpp"

namespace auxbandit {
namespace {

ProblemInstance fig2() { return ProblemInstance::aux_equals_reward({0.7, 0.5, 0.5}, 0.5); }

PolicyConfig cfg(PolicyKind k, double c = 1.0) {
  PolicyConfig p;
  p.kind = k;
  p.c = c;
  if (is_greedy_family(k)) p.delta = 0.2;
  return p;
}

EpisodeResult synthetic(std::vector<double> cum) {
  EpisodeResult e;
  e.label = "x";
  e.cum_regret = std::move(cum);
  return e;
}

TEST(Episode, RegretIsSumOfGapsOfChosenArms) {
  const auto inst = fig2();
  const auto H = gen_stationary(3, 3000, 0.01, 3);
  for (auto k : {PolicyKind::kUCB1, PolicyKind::kaTS, PolicyKind::kaEG, PolicyKind::kMyopic}) {
    const auto e = run_episode(inst, H, cfg(k), 17);
    ASSERT_EQ(e.arms.size(), 3000u);
    double cum = 0.0;
    for (std::size_t t = 0; t < e.arms.size(); ++t) {
      const double g = inst.gap(e.arms[t]);
      ASSERT_EQ(e.per_step_regret[t], g);
      cum += g;
      ASSERT_EQ(e.cum_regret[t], cum);
    }
  }
}

TEST(Episode, OptimalArmOnlyGivesZeroRegret) {
  // Every arm optimal: no choice can incur regret.
  const auto inst = ProblemInstance::aux_equals_reward({0.4, 0.4}, 0.5);
  const auto e = run_episode(inst, ArrivalMatrix(2, 500), cfg(PolicyKind::kUCB1), 1);
  EXPECT_EQ(e.final_regret(), 0.0);
}

TEST(Episode, ForcedWorstArmAccruesMaxGapPerStep) {
  // Noiseless caps pin the best arm's index below the worst arm's, so
  // UCB1plus keeps the worst arm after the initial pulls.
  ProblemInstance inst;
  inst.mu = {0.9, 0.1};
  inst.y = {0.0, 1.0};
  inst.alpha = {1.0, 1.0};
  inst.sigma = 0.0;
  inst.sigma_hat = 0.0;
  inst.aux_family = Family::kConstant;
  const std::size_t T = 200;
  ArrivalMatrix H(2, T);
  H.set(0, 0, 1);
  H.set(1, 0, 1);
  PolicyConfig p = cfg(PolicyKind::kUCB1Plus, 3.0);
  p.alpha_bar = 0.05;  // caps arm 0 at 0, arm 1 at 0.05
  const auto e = run_episode(inst, H, p, 2);
  EXPECT_EQ(e.arms[0], 0u);
  for (std::size_t t = 1; t < T; ++t) ASSERT_EQ(e.arms[t], 1u);
  EXPECT_NEAR(e.final_regret(), (T - 1) * 0.8, 1e-9);
}

TEST(Episode, DeterministicGivenSeed) {
  const auto inst = fig2();
  const auto H = gen_stationary(3, 2000, 0.05, 5);
  for (auto k : {PolicyKind::kaUCB1, PolicyKind::kTS, PolicyKind::knEG}) {
    const auto a = run_episode(inst, H, cfg(k), 99);
    const auto b = run_episode(inst, H, cfg(k), 99);
    EXPECT_EQ(a.arms, b.arms);
    EXPECT_EQ(a.cum_regret, b.cum_regret);
  }
}

TEST(Episode, CommonNoiseAcrossPolicies) {
  // Without arrivals the aux-aware variant sees exactly what UCB1 sees.
  const auto inst = fig2();
  const ArrivalMatrix H(3, 3000);
  EXPECT_EQ(run_episode(inst, H, cfg(PolicyKind::kUCB1), 8).arms,
            run_episode(inst, H, cfg(PolicyKind::kaUCB1), 8).arms);
  EXPECT_EQ(run_episode(inst, H, cfg(PolicyKind::kTS, 0.5), 8).arms,
            run_episode(inst, H, cfg(PolicyKind::kaTS, 0.5), 8).arms);
}

TEST(Episode, DimensionMismatch) {
  EXPECT_THROW(run_episode(fig2(), ArrivalMatrix(2, 10), cfg(PolicyKind::kUCB1), 1), ConfigError);
}

TEST(Summary, SingleReplicationEqualsEpisode) {
  const auto e = synthetic({0.0, 1.0, 3.0});
  const std::vector<EpisodeResult> v{e};
  const auto s = summarize(v);
  EXPECT_EQ(s.mean, e.cum_regret);
  EXPECT_EQ(s.std_error, std::vector<double>(3, 0.0));
  EXPECT_EQ(s.n_reps, 1u);
}

TEST(Summary, IdenticalReplicationsHaveZeroSpread) {
  const std::vector<EpisodeResult> v(5, synthetic({1.0, 2.0}));
  const auto s = summarize(v);
  EXPECT_EQ(s.final_std_error(), 0.0);
  EXPECT_EQ(s.final_mean(), 2.0);
}

TEST(Summary, MeanOfTwo) {
  const std::vector<EpisodeResult> v{synthetic({10.0}), synthetic({20.0})};
  const auto s = summarize(v);
  EXPECT_EQ(s.final_mean(), 15.0);
  EXPECT_NEAR(s.final_std_error(), 5.0, 1e-12);  // sd 7.071 / sqrt 2
}

TEST(Summary, MomentsMatchTwoPassOracle) {
  RandomStream rng(4);
  std::vector<EpisodeResult> v;
  for (int i = 0; i < 57; ++i) v.push_back(synthetic({rng.normal(3.0, 2.0), 100.0 + rng.uniform()}));
  const auto s = summarize(v);
  for (std::size_t t = 0; t < 2; ++t) {
    double m = 0.0;
    for (const auto& e : v) m += e.cum_regret[t];
    m /= v.size();
    double ss = 0.0;
    for (const auto& e : v) ss += (e.cum_regret[t] - m) * (e.cum_regret[t] - m);
    const double se = std::sqrt(ss / (v.size() - 1.0) / v.size());
    EXPECT_NEAR(s.mean[t], m, 1e-12 * std::max(1.0, m));
    EXPECT_NEAR(s.std_error[t], se, 1e-12);
  }
}

TEST(Summary, NearestRankQuantiles) {
  RandomStream rng(6);
  std::vector<EpisodeResult> v;
  for (int i = 0; i < 400; ++i) v.push_back(synthetic({rng.normal(0.0, 1.0)}));
  const auto s = summarize(v);
  std::vector<double> sorted;
  for (const auto& e : v) sorted.push_back(e.final_regret());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < kQuantilePercents.size(); ++i) {
    const double p = kQuantilePercents[i] / 100.0;
    const auto rank = static_cast<std::size_t>(std::ceil(p * 400 - 1e-9));
    EXPECT_EQ(s.quantiles[i], sorted[rank - 1]) << kQuantilePercents[i];
  }
}

TEST(Summary, Errors) {
  EXPECT_THROW(summarize(std::vector<EpisodeResult>{}), DomainError);
  const std::vector<EpisodeResult> v{synthetic({1.0}), synthetic({1.0, 2.0})};
  EXPECT_THROW(summarize(v), DomainError);
}

TEST(Replications, IndependentOfThreadCount) {
  const auto inst = fig2();
  ArrivalSpec spec;
  spec.lambda = 0.01;
  const std::vector<PolicyConfig> cfgs{cfg(PolicyKind::kUCB1), cfg(PolicyKind::kaTS, 0.5)};
  ReplicationOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto a = run_replications(inst, spec, 1500, cfgs, 13, 42, true, one);
  const auto b = run_replications(inst, spec, 1500, cfgs, 13, 42, true, four);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].mean, b[i].mean);
    EXPECT_EQ(a[i].std_error, b[i].std_error);
    EXPECT_EQ(a[i].finals, b[i].finals);
  }
}

TEST(Replications, CallbackOrderAndSeeds) {
  const auto inst = fig2();
  ArrivalSpec spec;
  spec.lambda = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> seen;
  ReplicationOptions opt;
  opt.threads = 3;
  opt.on_episode = [&](std::size_t p, std::size_t r, const EpisodeResult& e) {
    seen.emplace_back(p, r);
    EXPECT_EQ(e.seed, replication_seed(9, r));
  };
  run_replications(inst, spec, 100, {cfg(PolicyKind::kUCB1), cfg(PolicyKind::kTS)}, 11, 9, true, opt);
  ASSERT_EQ(seen.size(), 22u);
  for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i], std::make_pair(i / 11, i % 11));
}

TEST(Replications, SharedMatrixWhenNotRegenerated) {
  ArrivalSpec spec;
  spec.lambda = 0.3;
  EXPECT_EQ(replication_arrivals(spec, 2, 50, 1, 0, false), replication_arrivals(spec, 2, 50, 1, 7, false));
  EXPECT_FALSE(replication_arrivals(spec, 2, 50, 1, 0, true) == replication_arrivals(spec, 2, 50, 1, 7, true));
}

TEST(Replications, ExceptionsPropagateFromWorkers) {
  EXPECT_THROW(parallel_for(0, 10, 4, [](std::size_t i) {
                 if (i == 6) throw DomainError("boom");
               }),
               DomainError);
}

}  // namespace
}  // namespace auxbandit
