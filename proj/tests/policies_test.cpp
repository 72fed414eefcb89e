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

#include <cmath>
#include <limits>
#include <vector>

#include "auxbandit/policies.hpp"
#include "auxbandit/sim.hpp"

namespace auxbandit {
namespace {

PolicyConfig make(PolicyKind k, double c = 1.0) {
  PolicyConfig p;
  p.kind = k;
  p.c = c;
  if (is_greedy_family(k)) p.delta = 0.2;
  if (k == PolicyKind::kUCB1Plus || k == PolicyKind::kTwoUCBs) p.alpha_bar = 1.0;
  return p;
}

double ucb_oracle(double mean, double count, double c, double sigma, double t) {
  return mean + std::sqrt(c * sigma * sigma * std::log(t) / count);
}

TEST(Kinds, NamesRoundTripAndAliases) {
  for (auto k : {PolicyKind::kUCB1, PolicyKind::kaUCB1, PolicyKind::kTS, PolicyKind::kaTS, PolicyKind::kEG,
                 PolicyKind::knEG, PolicyKind::kaEG, PolicyKind::kMyopic, PolicyKind::kUCB1Plus,
                 PolicyKind::kTwoUCBs})
    EXPECT_EQ(policy_kind_from_string(to_string(k)), k);
  EXPECT_EQ(policy_kind_from_string("TwoUCBs"), PolicyKind::kTwoUCBs);
  EXPECT_EQ(policy_kind_from_string("UCB1+"), PolicyKind::kUCB1Plus);
  EXPECT_FALSE(policy_kind_from_string("ucb"));
}

TEST(Config, Validation) {
  PolicyConfig eg;
  eg.kind = PolicyKind::kEG;
  EXPECT_THROW(eg.validate(), ConfigError);
  eg.delta = -0.1;
  EXPECT_THROW(eg.validate(), ConfigError);
  PolicyConfig two;
  two.kind = PolicyKind::kTwoUCBs;
  EXPECT_THROW(two.validate(), ConfigError);
  two.alpha_bar = 0.0;
  EXPECT_THROW(two.validate(), ConfigError);
  PolicyConfig ucb;
  ucb.c = 0.0;
  EXPECT_THROW(ucb.validate(), ConfigError);
  EXPECT_EQ(make(PolicyKind::kUCB1, 1.0).warnings(0.5).size(), 1u);
  EXPECT_TRUE(make(PolicyKind::kUCB1, 3.0).warnings(0.5).empty());
}

TEST(Ucb, InitialRoundRobin) {
  Policy p(make(PolicyKind::kUCB1), 3, 0.5, 0.5);
  RandomStream rng(1);
  for (std::size_t t = 0; t < 3; ++t) {
    p.begin_epoch();
    const auto a = p.select(rng);
    EXPECT_EQ(a, t);
    p.observe_reward(a, 0.0);
  }
}

TEST(Ucb, TiesGoToSmallestIndex) {
  const std::vector<double> v{0.3, 0.7, 0.7};
  EXPECT_EQ(smallest_argmax(v), 1u);
  Policy p(make(PolicyKind::kUCB1), 2, 0.5, 0.5);
  RandomStream rng(1);
  for (int t = 0; t < 2; ++t) {
    p.begin_epoch();
    p.observe_reward(p.select(rng), 0.5);
  }
  p.begin_epoch();
  EXPECT_EQ(p.select(rng), 0u);
}

TEST(Ucb, HandEvaluatedIndex) {
  // c = 2, sigma = 0.5, t = 10; arm 0 mean 0.6 over 4, arm 1 mean 0.5 over 1.
  Policy p(make(PolicyKind::kUCB1, 2.0), 2, 0.5, 0.5);
  for (int i = 0; i < 10; ++i) p.begin_epoch();
  for (int i = 0; i < 4; ++i) p.observe_reward(0, 0.6);
  p.observe_reward(1, 0.5);
  EXPECT_NEAR(p.upper_index(0), ucb_oracle(0.6, 4, 2.0, 0.5, 10), 1e-12);
  EXPECT_NEAR(p.upper_index(1), ucb_oracle(0.5, 1, 2.0, 0.5, 10), 1e-12);
  EXPECT_NEAR(p.upper_index(0), 1.1365, 5e-5);
  EXPECT_NEAR(p.upper_index(1), 1.5730, 5e-5);
  RandomStream rng(1);
  EXPECT_EQ(p.select(rng), 1u);
}

TEST(Ucb, UnpulledArmHasInfiniteIndex) {
  Policy p(make(PolicyKind::kUCB1), 2, 0.5, 0.5, {}, TimeIndex::kClicks);
  p.begin_epoch();
  EXPECT_TRUE(std::isinf(p.upper_index(0)));
  EXPECT_EQ(p.log_time(), 0.0);
  p.observe_reward(0, 1.0, true);
  p.observe_reward(0, 1.0, false);
  EXPECT_EQ(p.state().clicks(), 1);
}

TEST(Ucb, AuxPoolingShrinksRadius) {
  Policy plain(make(PolicyKind::kUCB1), 2, 0.5, 0.5);
  Policy aux(make(PolicyKind::kaUCB1), 2, 0.5, 0.5);
  for (auto* p : {&plain, &aux}) {
    for (int i = 0; i < 5; ++i) p->begin_epoch();
    p->observe_reward(1, 0.4);
    const std::vector<double> ys{0.5, 0.5, 0.5};
    p->observe_aux(1, ys);
  }
  EXPECT_EQ(plain.state().arm(1).aux_count, 0);
  EXPECT_EQ(aux.estimate(1).count, 4.0);
  EXPECT_LT(aux.upper_index(1), plain.upper_index(1));
}

TEST(Ts, FreshStateDrawsCenteredNoise) {
  // With no data theta_k ~ N(0, c sigma^2); two arms split evenly.
  int first = 0;
  const int n = 20000;
  for (int s = 0; s < n; ++s) {
    Policy p(make(PolicyKind::kTS, 0.5), 2, 0.5, 0.5);
    p.begin_epoch();
    RandomStream rng(derive_key(3, static_cast<std::uint64_t>(s)));
    RandomStream copy = rng;
    const auto a = p.select(rng);
    const double sd = std::sqrt(0.5 * 0.25);
    const double t0 = sd * copy.normal(), t1 = sd * copy.normal();
    ASSERT_EQ(a, t1 > t0 ? 1u : 0u);
    if (a == 0) ++first;
  }
  EXPECT_NEAR(static_cast<double>(first) / n, 0.5, 0.02);
}

TEST(Ts, ConcentratedPosteriorPicksBest) {
  Policy p(make(PolicyKind::kTS, 0.5), 2, 0.5, 0.5);
  for (int i = 0; i < 10000; ++i) {
    p.observe_reward(0, 0.6);
    p.observe_reward(1, 0.5);
  }
  p.begin_epoch();
  int best = 0;
  for (int s = 0; s < 1000; ++s) {
    RandomStream rng(derive_key(8, static_cast<std::uint64_t>(s)));
    if (p.select(rng) == 0) ++best;
  }
  EXPECT_EQ(best, 1000);
}

TEST(Ts, SeededSelectionIsReproducible) {
  auto run = [] {
    Policy p(make(PolicyKind::kaTS, 0.5), 3, 0.5, 0.5);
    std::vector<std::size_t> arms;
    for (std::uint64_t t = 0; t < 50; ++t) {
      p.begin_epoch();
      RandomStream rng(derive_key(4, t));
      const auto a = p.select(rng);
      arms.push_back(a);
      p.observe_reward(a, 0.1 * static_cast<double>(a));
    }
    return arms;
  };
  EXPECT_EQ(run(), run());
}

TEST(Greedy, NoArrivalsKeepPlainTime) {
  Policy p(make(PolicyKind::kaEG), 3, 0.5, 0.5);
  for (int t = 1; t <= 20; ++t) {
    p.begin_epoch();
    for (std::size_t k = 0; k < 3; ++k) ASSERT_EQ(p.virtual_time(k), t);
  }
}

TEST(Greedy, ExploresSurelyAtFirstEpoch) {
  Policy p(make(PolicyKind::kEG), 3, 0.5, 0.5);
  p.begin_epoch();
  RandomStream rng(1);
  const auto d = p.greedy_step(rng);
  // min{1, (0.25 / 0.04) * 3}
  EXPECT_EQ(d.explore_probability, 1.0);
  EXPECT_TRUE(d.explore);
}

TEST(Greedy, SingleArrivalDoublesVirtualTime) {
  // delta^2 / (c sigma_hat^2) = ln 2.
  const double sh = 0.2 / std::sqrt(std::log(2.0));
  Policy aeg(make(PolicyKind::kaEG), 2, 0.5, sh);
  Policy neg(make(PolicyKind::knEG), 2, 0.5, sh);
  const std::vector<double> one{0.5};
  for (auto* p : {&aeg, &neg}) {
    p->begin_epoch();
    p->observe_aux(0, one);
  }
  EXPECT_NEAR(aeg.virtual_time(0), 2.0, 1e-14);
  EXPECT_EQ(aeg.virtual_time(1), 1.0);
  EXPECT_EQ(neg.virtual_time(0), 1.0);
  EXPECT_EQ(neg.state().arm(0).aux_count, 1);
}

TEST(Greedy, ExploitsSmallestArgmaxOfEstimates) {
  Policy p(make(PolicyKind::kEG), 2, 0.5, 0.5);
  for (int t = 0; t < 100000; ++t) p.begin_epoch();
  p.observe_reward(0, 0.3);
  p.observe_reward(1, 0.6);
  int exploits = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    RandomStream rng(derive_key(6, s));
    const auto d = p.greedy_step(rng);
    if (!d.explore) {
      ++exploits;
      EXPECT_EQ(d.arm, 1u);
    }
  }
  EXPECT_GT(exploits, 190);
}

TEST(Myopic, PullsEachArmOnceThenGreedy) {
  Policy p(make(PolicyKind::kMyopic), 2, 0.5, 0.5);
  RandomStream rng(1);
  p.begin_epoch();
  EXPECT_EQ(p.select(rng), 0u);
  p.observe_reward(0, 0.2);
  p.begin_epoch();
  EXPECT_EQ(p.select(rng), 1u);
  p.observe_reward(1, 0.7);
  p.begin_epoch();
  EXPECT_EQ(p.select(rng), 1u);
}

TEST(Myopic, TiesBrokenUniformly) {
  Policy p(make(PolicyKind::kMyopic), 2, 0.5, 0.5);
  for (int t = 0; t < 3; ++t) p.begin_epoch();
  p.observe_reward(0, 0.5);
  p.observe_reward(1, 0.5);
  int zero = 0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    RandomStream rng(derive_key(12, static_cast<std::uint64_t>(s)));
    if (p.select(rng) == 0) ++zero;
  }
  EXPECT_NEAR(static_cast<double>(zero) / n, 0.5, 0.05);
}

TEST(Ucb1Plus, IndexIsCappedByAuxMean) {
  auto cfg = make(PolicyKind::kUCB1Plus, 3.0);
  cfg.alpha_bar = 1.0;
  Policy p(cfg, 2, 0.5, 0.0);
  p.begin_epoch();
  const std::vector<double> y0{0.9}, y1{0.2};
  p.observe_aux(0, y0);
  p.observe_aux(1, y1);
  p.observe_reward(0, 0.8);
  p.observe_reward(1, 0.8);
  for (int i = 0; i < 50; ++i) p.begin_epoch();
  EXPECT_EQ(p.upper_index(1), 0.2);
  EXPECT_LE(p.upper_index(0), 0.9);
}

TEST(Ucb1Plus, InfiniteCapIsPlainUcb) {
  auto cfg = make(PolicyKind::kUCB1Plus, 3.0);
  cfg.alpha_bar = std::numeric_limits<double>::infinity();
  Policy p(cfg, 2, 0.5, 0.0);
  Policy u(make(PolicyKind::kUCB1, 3.0), 2, 0.5, 0.0);
  for (auto* q : {&p, &u}) {
    for (int i = 0; i < 7; ++i) q->begin_epoch();
    q->observe_reward(0, 0.4);
    q->observe_reward(1, 0.1);
  }
  EXPECT_EQ(p.upper_index(0), u.upper_index(0));
  EXPECT_EQ(p.upper_index(1), u.upper_index(1));
}

TEST(Ucb1Plus, MissingAuxIsAConfigError) {
  auto cfg = make(PolicyKind::kUCB1Plus, 3.0);
  Policy p(cfg, 2, 0.5, 0.0);
  for (int i = 0; i < 3; ++i) p.begin_epoch();
  p.observe_reward(0, 0.4);
  EXPECT_THROW(p.upper_index(0), ConfigError);
}

TEST(Ucb1Plus, CappedArmStopsBeingPulled) {
  // alpha_bar y_2 = 0.5 < mu_1 = 0.7, one noiseless aux mean per arm at t = 1.
  ProblemInstance inst;
  inst.mu = {0.7, 0.5};
  inst.y = {0.7, 0.5};
  inst.alpha = {1.0, 1.0};
  inst.sigma = 0.5;
  inst.sigma_hat = 0.0;
  inst.aux_family = Family::kConstant;
  const std::size_t T = 5000;
  ArrivalMatrix H(2, T);
  H.set(0, 0, 1);
  H.set(1, 0, 1);
  auto cfg = make(PolicyKind::kUCB1Plus, 3.0);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto e = run_episode(inst, H, cfg, replication_seed(21, s));
    std::size_t late = 0;
    for (std::size_t t = T / 2; t < T; ++t) late += e.arms[t] == 1;
    EXPECT_EQ(late, 0u) << s;
  }
}

TEST(TwoUcbs, WithoutAuxMatchesUcb1) {
  const auto inst = ProblemInstance::aux_equals_reward({0.7, 0.5, 0.5}, 0.5);
  const ArrivalMatrix H(3, 2000);
  const auto a = run_episode(inst, H, make(PolicyKind::kUCB1, 1.0), 5);
  const auto b = run_episode(inst, H, make(PolicyKind::kTwoUCBs, 1.0), 5);
  EXPECT_EQ(a.arms, b.arms);
}

TEST(TwoUcbs, HandEvaluatedIndex) {
  auto cfg = make(PolicyKind::kTwoUCBs, 2.0);
  cfg.alpha_bar = 2.0;
  Policy p(cfg, 1, 0.5, 0.5);
  for (int i = 0; i < 100; ++i) p.begin_epoch();
  p.observe_reward(0, 0.4);
  const std::vector<double> ys{0.3, 0.3, 0.3, 0.3};
  p.observe_aux(0, ys);
  const double plain = ucb_oracle(0.4, 1.0, 2.0, 0.5, 100.0);
  const double opt = ucb_oracle(0.5, 2.0, 2.0, 0.5, 100.0);
  EXPECT_NEAR(plain, 1.9174, 5e-5);
  EXPECT_NEAR(opt, 1.5730, 5e-5);
  EXPECT_NEAR(p.upper_index(0), std::min(plain, opt), 1e-12);
}

TEST(TwoUcbs, IndexNeverExceedsEitherBound) {
  auto cfg = make(PolicyKind::kTwoUCBs, 2.5);
  cfg.alpha_bar = 1.3;
  Policy p(cfg, 3, 0.5, 0.4);
  RandomStream rng(77);
  for (int t = 0; t < 400; ++t) {
    p.begin_epoch();
    for (std::size_t k = 0; k < 3; ++k)
      if (rng.bernoulli(0.3)) {
        const std::vector<double> y{rng.normal(0.4, 0.4)};
        p.observe_aux(k, y);
      }
    const auto a = p.select(rng);
    p.observe_reward(a, rng.normal(0.5, 0.5));
    const double lt = p.log_time();
    for (std::size_t k = 0; k < 3; ++k) {
      const auto r = p.state().reward_stats(k);
      const auto o = p.state().optimistic_stats(k, 0.5, 0.4, 1.3);
      const double u = p.upper_index(k);
      ASSERT_LE(u, r.mean + ucb_radius(2.5, 0.5, lt, r.count));
      ASSERT_LE(u, o.mean + ucb_radius(2.5, 0.5, lt, o.count));
    }
  }
}

TEST(KnownMapping, ZeroMappedScaleRejectsAux) {
  Policy p(make(PolicyKind::kaUCB1), 2, 0.5, 0.5, {0.0, 1.0});
  p.begin_epoch();
  const std::vector<double> y{0.1};
  EXPECT_THROW(p.observe_aux(0, y), ConfigError);
  EXPECT_NO_THROW(p.observe_aux(1, y));
  EXPECT_EQ(p.mapped_sigma_hat(1), 0.5);
}

}  // namespace
}  // namespace auxbandit
