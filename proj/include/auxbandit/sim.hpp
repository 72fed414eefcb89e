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


#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "auxbandit/arrivals.hpp"
#include "auxbandit/core.hpp"
#include "auxbandit/errors.hpp"
#include "auxbandit/policies.hpp"
#include "auxbandit/random.hpp"

namespace auxbandit {

struct EpisodeResult {
  std::string label;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> arms;
  std::vector<double> per_step_regret;
  std::vector<double> cum_regret;

  double final_regret() const { return cum_regret.empty() ? 0.0 : cum_regret.back(); }
};

// One draw from `family` with mean m and scale s.
inline double draw_observation(Family family, double m, double s, RandomStream& rng) {
  switch (family) {
    case Family::kGaussian: return rng.normal(m, s);
    case Family::kBernoulli: return rng.bernoulli(m) ? 1.0 : 0.0;
    case Family::kConstant: return m;
  }
  return m;
}

// Plays one policy for H.horizon() epochs. Within an epoch: auxiliary
// batches arrive, the policy selects, the reward is observed. Auxiliary and
// reward draws are keyed by (seed, arm, epoch) so every policy run under the
// same seed sees the same noise.
inline EpisodeResult run_episode(const ProblemInstance& inst, const ArrivalMatrix& H, const PolicyConfig& cfg,
                                 std::uint64_t seed) {
  inst.validate();
  cfg.validate();
  const std::size_t K = inst.arms();
  if (H.arms() != K) throw ConfigError("arrival matrix has " + std::to_string(H.arms()) + " rows, instance has " +
                                       std::to_string(K) + " arms");
  const std::size_t T = H.horizon();
  Policy policy(cfg, K, inst.sigma, inst.sigma_hat, inst.alpha);
  const auto gaps = inst.gaps();
  const std::uint64_t aux_key = phase_key(seed, Phase::kAuxNoise);
  const std::uint64_t reward_key = phase_key(seed, Phase::kRewardNoise);
  const std::uint64_t policy_key = phase_key(seed, Phase::kPolicy);
  const bool feeds_aux = uses_aux(cfg.kind);

  EpisodeResult out;
  out.label = cfg.name();
  out.seed = seed;
  out.arms.resize(T);
  out.per_step_regret.resize(T);
  out.cum_regret.resize(T);
  std::vector<double> batch;
  double cum = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    policy.begin_epoch();
    if (feeds_aux) {
      for (std::size_t k = 0; k < K; ++k) {
        const auto n = H.at(k, t);
        if (n == 0) continue;
        RandomStream rng(derive_key(aux_key, k, t));
        batch.resize(static_cast<std::size_t>(n));
        for (auto& v : batch) v = draw_observation(inst.aux_family, inst.y[k], inst.sigma_hat, rng);
        policy.observe_aux(k, batch);
      }
    }
    RandomStream prng(derive_key(policy_key, t));
    const std::size_t arm = policy.select(prng);
    RandomStream rrng(derive_key(reward_key, arm, t));
    policy.observe_reward(arm, draw_observation(inst.reward_family, inst.mu[arm], inst.sigma, rrng));
    out.arms[t] = static_cast<std::uint32_t>(arm);
    out.per_step_regret[t] = gaps[arm];
    cum += gaps[arm];
    out.cum_regret[t] = cum;
  }
  return out;
}

struct BatchSummary {
  std::string label;
  std::size_t n_reps = 0;
  std::vector<double> mean;       // pointwise mean cumulative regret
  std::vector<double> std_error;  // pointwise standard error of that mean
  std::array<double, 5> quantiles{};  // final regret at 5, 25, 50, 75, 95 %
  std::vector<double> finals;     // final regret per replication

  double final_mean() const { return mean.empty() ? 0.0 : mean.back(); }
  double final_std_error() const { return std_error.empty() ? 0.0 : std_error.back(); }
};

inline constexpr std::array<int, 5> kQuantilePercents{5, 25, 50, 75, 95};

// Nearest-rank quantile: the ceil(p n / 100)-th smallest value.
inline double nearest_rank(std::span<const double> sorted, int percent) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  const std::size_t n = sorted.size();
  std::size_t rank = (static_cast<std::size_t>(percent) * n + 99) / 100;
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

// Streaming pointwise mean and variance (Welford) in insertion order.
class RegretAccumulator {
 public:
  void add(const EpisodeResult& e) {
    if (n_ == 0) {
      label_ = e.label;
      mean_.assign(e.cum_regret.size(), 0.0);
      m2_.assign(e.cum_regret.size(), 0.0);
    } else if (e.cum_regret.size() != mean_.size()) {
      throw DomainError("episodes have different horizons");
    }
    ++n_;
    const double inv = 1.0 / static_cast<double>(n_);
    for (std::size_t t = 0; t < mean_.size(); ++t) {
      const double x = e.cum_regret[t];
      const double d = x - mean_[t];
      mean_[t] += d * inv;
      m2_[t] += d * (x - mean_[t]);
    }
    finals_.push_back(e.final_regret());
  }

  std::size_t count() const { return n_; }

  BatchSummary finish() const {
    if (n_ == 0) throw DomainError("summary of no episodes");
    BatchSummary s;
    s.label = label_;
    s.n_reps = n_;
    s.mean = mean_;
    s.std_error.assign(mean_.size(), 0.0);
    if (n_ > 1) {
      const double n = static_cast<double>(n_);
      for (std::size_t t = 0; t < mean_.size(); ++t)
        s.std_error[t] = std::sqrt(std::max(0.0, m2_[t] / (n - 1.0)) / n);
    }
    s.finals = finals_;
    std::vector<double> sorted = finals_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < kQuantilePercents.size(); ++i)
      s.quantiles[i] = nearest_rank(sorted, kQuantilePercents[i]);
    return s;
  }

 private:
  std::string label_;
  std::size_t n_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
  std::vector<double> finals_;
};

inline BatchSummary summarize(std::span<const EpisodeResult> results) {
  if (results.empty()) throw DomainError("summary of no episodes");
  RegretAccumulator acc;
  for (const auto& r : results) acc.add(r);
  return acc.finish();
}

// Runs f(i) for i in [begin, end) on up to `threads` workers. The first
// exception thrown is rethrown after all workers finish.
inline void parallel_for(std::size_t begin, std::size_t end, std::size_t threads,
                         const std::function<void(std::size_t)>& f) {
  const std::size_t n = end > begin ? end - begin : 0;
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), n);
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) f(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = begin + w; i < end; i += workers) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct ReplicationOptions {
  std::size_t threads = 1;
  // Called on the calling thread for every episode, ordered by policy and
  // then by replication index.
  std::function<void(std::size_t policy, std::size_t rep, const EpisodeResult&)> on_episode;
  Warnings* warnings = nullptr;
};

// Arrival matrix used by replication r.
inline ArrivalMatrix replication_arrivals(const ArrivalSpec& spec, std::size_t K, std::size_t T,
                                          std::uint64_t base_seed, std::size_t r, bool regenerate_H,
                                          Warnings* warnings = nullptr) {
  const std::uint64_t s = regenerate_H ? replication_seed(base_seed, r)
                                       : derive_key(base_seed, static_cast<std::uint64_t>(Phase::kSharedArrivals));
  return generate(spec, K, T, s, warnings);
}

// Replication r runs under seed replication_seed(base_seed, r). All
// policies share that seed, hence the same matrix and the same noise.
inline std::vector<BatchSummary> run_replications(const ProblemInstance& inst, const ArrivalSpec& spec,
                                                  std::size_t T, const std::vector<PolicyConfig>& cfgs,
                                                  std::size_t n_reps, std::uint64_t base_seed, bool regenerate_H,
                                                  const ReplicationOptions& opt = {}) {
  if (n_reps < 1) throw ConfigError("n_reps must be >= 1");
  if (T < 1) throw ConfigError("horizon must be >= 1");
  inst.validate();
  for (const auto& c : cfgs) c.validate();
  const std::size_t K = inst.arms();
  const bool fresh = regenerate_H && is_stochastic(spec);
  std::optional<ArrivalMatrix> shared;
  if (!fresh) shared = replication_arrivals(spec, K, T, base_seed, 0, false, opt.warnings);

  const std::size_t threads = std::max<std::size_t>(opt.threads, 1);
  const std::size_t chunk = std::max<std::size_t>(threads * 2, 8);
  std::vector<BatchSummary> out;
  out.reserve(cfgs.size());
  for (std::size_t p = 0; p < cfgs.size(); ++p) {
    RegretAccumulator acc;
    std::vector<EpisodeResult> slot(chunk);
    for (std::size_t r0 = 0; r0 < n_reps; r0 += chunk) {
      const std::size_t r1 = std::min(n_reps, r0 + chunk);
      parallel_for(r0, r1, threads, [&](std::size_t r) {
        const std::uint64_t seed = replication_seed(base_seed, r);
        if (shared) {
          slot[r - r0] = run_episode(inst, *shared, cfgs[p], seed);
        } else {
          Warnings* w = (p == 0 && r == 0) ? opt.warnings : nullptr;
          const auto H = replication_arrivals(spec, K, T, base_seed, r, true, w);
          slot[r - r0] = run_episode(inst, H, cfgs[p], seed);
        }
      });
      for (std::size_t r = r0; r < r1; ++r) {
        if (opt.on_episode) opt.on_episode(p, r, slot[r - r0]);
        acc.add(slot[r - r0]);
      }
    }
    out.push_back(acc.finish());
  }
  return out;
}

}  // namespace auxbandit
