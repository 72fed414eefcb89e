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
#include <cmath>
#include <cstddef>
#include <limits>
#include <locale>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "auxbandit/core.hpp"
#include "auxbandit/errors.hpp"
#include "auxbandit/random.hpp"

namespace auxbandit {

enum class PolicyKind { kUCB1, kaUCB1, kTS, kaTS, kEG, knEG, kaEG, kMyopic, kUCB1Plus, kTwoUCBs };

inline const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::kUCB1: return "UCB1";
    case PolicyKind::kaUCB1: return "aUCB1";
    case PolicyKind::kTS: return "TS";
    case PolicyKind::kaTS: return "aTS";
    case PolicyKind::kEG: return "EG";
    case PolicyKind::knEG: return "nEG";
    case PolicyKind::kaEG: return "aEG";
    case PolicyKind::kMyopic: return "Myopic";
    case PolicyKind::kUCB1Plus: return "UCB1plus";
    case PolicyKind::kTwoUCBs: return "2-UCBs";
  }
  return "?";
}

inline std::optional<PolicyKind> policy_kind_from_string(const std::string& s) {
  for (auto k : {PolicyKind::kUCB1, PolicyKind::kaUCB1, PolicyKind::kTS, PolicyKind::kaTS,
                 PolicyKind::kEG, PolicyKind::knEG, PolicyKind::kaEG, PolicyKind::kMyopic,
                 PolicyKind::kUCB1Plus, PolicyKind::kTwoUCBs})
    if (s == to_string(k)) return k;
  if (s == "TwoUCBs" || s == "2UCBs") return PolicyKind::kTwoUCBs;
  if (s == "UCB1+") return PolicyKind::kUCB1Plus;
  return std::nullopt;
}

// Feeds auxiliary observations into its estimates.
inline bool uses_aux(PolicyKind k) {
  return !(k == PolicyKind::kUCB1 || k == PolicyKind::kTS || k == PolicyKind::kEG);
}

// Pools mapped auxiliary observations with rewards (mapping assumed known).
inline bool uses_known_mapping(PolicyKind k) {
  return uses_aux(k) && k != PolicyKind::kUCB1Plus && k != PolicyKind::kTwoUCBs;
}

inline bool is_greedy_family(PolicyKind k) {
  return k == PolicyKind::kEG || k == PolicyKind::knEG || k == PolicyKind::kaEG;
}

inline bool has_upper_index(PolicyKind k) {
  return k == PolicyKind::kUCB1 || k == PolicyKind::kaUCB1 || k == PolicyKind::kUCB1Plus ||
         k == PolicyKind::kTwoUCBs;
}

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kUCB1;
  double c = 1.0;
  std::optional<double> delta;      // gap input of the greedy family
  std::optional<double> alpha_bar;  // mapping upper bound; +inf disables it
  double alpha_low = 0.0;
  std::string label;

  std::string name() const { return label.empty() ? to_string(kind) : label; }

  std::vector<std::string> problems(const std::string& where = "policy") const {
    std::vector<std::string> out;
    if (!(c > 0.0) || !std::isfinite(c)) out.push_back(where + ".c: must be > 0");
    if (is_greedy_family(kind) && !(delta && *delta > 0.0))
      out.push_back(where + ".delta: required and > 0 for " + to_string(kind));
    if ((kind == PolicyKind::kUCB1Plus || kind == PolicyKind::kTwoUCBs) &&
        !(alpha_bar && *alpha_bar > 0.0))
      out.push_back(where + ".alpha_bar: required and > 0 for " + to_string(kind));
    if (!(alpha_low >= 0.0)) out.push_back(where + ".alpha_low: must be >= 0");
    return out;
  }

  void validate() const {
    const auto p = problems();
    if (!p.empty()) throw ConfigError(p.front());
  }

  // Tuning outside the ranges covered by the guarantees; advisory only.
  std::vector<std::string> warnings(double sigma) const {
    std::vector<std::string> out;
    if (has_upper_index(kind) && c <= 2.0)
      out.push_back(name() + ": c <= 2 is outside the range covered by the UCB guarantees");
    if (kind == PolicyKind::kaEG && delta) {
      const double need = std::max(16.0, 10.0 * *delta * *delta / (sigma * sigma));
      if (c <= need) {
        std::ostringstream v;
        v.imbue(std::locale::classic());
        v << need;
        out.push_back(name() + ": c <= " + v.str() + " is outside the range covered by the greedy guarantee");
      }
    }
    return out;
  }
};

// Which counter drives the logarithm of UCB radii.
enum class TimeIndex { kEpoch, kClicks };

// Smallest index attaining the maximum. +inf entries win over finite ones.
inline std::size_t smallest_argmax(std::span<const double> v) {
  if (v.empty()) throw DomainError("argmax of an empty sequence");
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] > v[best]) best = k;
  return best;
}

// sqrt(c sigma^2 log_t / count); +inf for an empty count.
inline double ucb_radius(double c, double sigma, double log_t, double count) {
  if (!(count > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(c * sigma * sigma * log_t / count);
}

struct GreedyDecision {
  bool explore = false;
  std::size_t arm = 0;
  double explore_probability = 0.0;
};

// One bandit policy bound to its own counters.
class Policy {
 public:
  // sigma_hat is the raw auxiliary scale; known-mapping kinds rescale it by
  // mapping[k]. An empty mapping means the identity.
  Policy(PolicyConfig cfg, std::size_t arms, double sigma, double sigma_hat,
         std::vector<double> mapping = {}, TimeIndex time_index = TimeIndex::kEpoch)
      : cfg_(std::move(cfg)),
        sigma_(sigma),
        sigma_hat_(sigma_hat),
        mapping_(mapping.empty() ? std::vector<double>(arms, 1.0) : std::move(mapping)),
        time_index_(time_index),
        state_(uses_known_mapping(cfg_.kind) ? PolicyState(arms, mapping_) : PolicyState(arms)),
        scratch_(arms) {
    cfg_.validate();
    if (arms == 0) throw ConfigError("policy needs at least one arm");
    if (mapping_.size() != arms) throw ConfigError("mapping length must equal the number of arms");
    if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
    if (!(sigma_hat >= 0.0)) throw ConfigError("sigma_hat must be >= 0");
  }

  const PolicyConfig& config() const { return cfg_; }
  const PolicyState& state() const { return state_; }
  std::size_t arms() const { return state_.arms(); }

  // Noise scale of one auxiliary observation as the estimator sees it.
  double mapped_sigma_hat(std::size_t k) const {
    return uses_known_mapping(cfg_.kind) ? mapping_.at(k) * sigma_hat_ : sigma_hat_;
  }

  void begin_epoch() { state_.begin_epoch(); }

  void observe_aux(std::size_t k, std::span<const double> ys) {
    if (!uses_aux(cfg_.kind) || ys.empty()) return;
    if (uses_known_mapping(cfg_.kind) && !(mapped_sigma_hat(k) > 0.0))
      throw ConfigError(cfg_.name() + ": auxiliary data on arm " + std::to_string(k) +
                        " but its mapped noise scale is zero");
    state_.update_on_aux(k, ys);
    if (cfg_.kind == PolicyKind::kaEG) {
      const double s = mapped_sigma_hat(k);
      state_.inflate_virtual_time(
          k, static_cast<double>(ys.size()) * (*cfg_.delta) * (*cfg_.delta) / (cfg_.c * s * s));
    }
  }

  void observe_reward(std::size_t k, double reward, bool clicked = true) {
    state_.update_on_reward(k, reward, clicked);
  }

  // Estimate the policy acts on for arm k.
  Estimate estimate(std::size_t k) const {
    if (uses_known_mapping(cfg_.kind)) return state_.known_mapping_stats(k, sigma_, mapped_sigma_hat(k));
    return state_.reward_stats(k);
  }

  double log_time() const {
    const double t = static_cast<double>(time_index_ == TimeIndex::kEpoch ? state_.epoch() : state_.clicks());
    return t > 0.0 ? std::log(t) : 0.0;
  }

  // Upper confidence index of arm k for the UCB-type kinds.
  double upper_index(std::size_t k) const {
    const double lt = log_time();
    switch (cfg_.kind) {
      case PolicyKind::kUCB1:
      case PolicyKind::kaUCB1: {
        const auto e = estimate(k);
        return e.mean + ucb_radius(cfg_.c, sigma_, lt, e.count);
      }
      case PolicyKind::kUCB1Plus: {
        const auto e = state_.reward_stats(k);
        const double u = e.mean + ucb_radius(cfg_.c, sigma_, lt, e.count);
        const double ab = *cfg_.alpha_bar;
        if (std::isinf(ab)) return u;
        if (state_.arm(k).aux_count == 0)
          throw ConfigError(cfg_.name() + ": no auxiliary observation of arm " + std::to_string(k));
        return std::min(u, ab * state_.aux_mean(k));
      }
      case PolicyKind::kTwoUCBs: {
        const auto plain = state_.reward_stats(k);
        const auto opt = state_.optimistic_stats(k, sigma_, sigma_hat_, *cfg_.alpha_bar);
        const double u1 = plain.mean + ucb_radius(cfg_.c, sigma_, lt, plain.count);
        const double u2 = opt.mean + ucb_radius(cfg_.c, sigma_, lt, opt.count);
        return std::min(u1, u2);
      }
      default:
        throw ConfigError(std::string(to_string(cfg_.kind)) + " has no upper confidence index");
    }
  }

  // Chooses the arm for the current epoch (begin_epoch and observe_aux first).
  std::size_t select(RandomStream& rng) {
    switch (cfg_.kind) {
      case PolicyKind::kUCB1:
      case PolicyKind::kaUCB1:
        return ucb_select();
      case PolicyKind::kUCB1Plus:
      case PolicyKind::kTwoUCBs:
        return unpulled_first_select();
      case PolicyKind::kTS:
      case PolicyKind::kaTS:
        return ts_select(rng);
      case PolicyKind::kEG:
      case PolicyKind::knEG:
      case PolicyKind::kaEG:
        return greedy_step(rng).arm;
      case PolicyKind::kMyopic:
        return myopic_select(rng);
    }
    throw ConfigError("unknown policy kind");
  }

  std::size_t ucb_select() const {
    const auto t = state_.epoch();
    if (time_index_ == TimeIndex::kEpoch && t >= 1 && static_cast<std::size_t>(t) <= arms())
      return static_cast<std::size_t>(t - 1);
    return argmax_index();
  }

  std::size_t unpulled_first_select() const {
    if (time_index_ == TimeIndex::kEpoch)
      for (std::size_t k = 0; k < arms(); ++k)
        if (state_.arm(k).pulls == 0) return k;
    return argmax_index();
  }

  std::size_t ts_select(RandomStream& rng) {
    const double s2 = cfg_.c * sigma_ * sigma_;
    for (std::size_t k = 0; k < arms(); ++k) {
      const auto e = estimate(k);
      scratch_[k] = e.mean + std::sqrt(s2 / (e.count + 1.0)) * rng.normal();
    }
    return smallest_argmax(scratch_);
  }

  // Exploration probability and arm for the greedy family.
  GreedyDecision greedy_step(RandomStream& rng) const {
    if (!is_greedy_family(cfg_.kind)) throw ConfigError("greedy step on a non-greedy policy");
    const double d = *cfg_.delta;
    double inv_sum = 0.0;
    for (std::size_t k = 0; k < arms(); ++k) inv_sum += 1.0 / virtual_time(k);
    GreedyDecision out;
    out.explore_probability = std::min(1.0, cfg_.c * sigma_ * sigma_ / (d * d) * inv_sum);
    if (rng.uniform() < out.explore_probability) {
      out.explore = true;
      const double target = rng.uniform() * inv_sum;
      double acc = 0.0;
      out.arm = arms() - 1;
      for (std::size_t k = 0; k < arms(); ++k) {
        acc += 1.0 / virtual_time(k);
        if (target < acc) {
          out.arm = k;
          break;
        }
      }
      return out;
    }
    std::vector<double> means(arms());
    for (std::size_t k = 0; k < arms(); ++k) means[k] = estimate(k).mean;
    out.arm = smallest_argmax(means);
    return out;
  }

  // Virtual clock of arm k: plain time unless the adaptive variant inflated it.
  double virtual_time(std::size_t k) const { return state_.arm(k).virtual_time; }

  std::size_t myopic_select(RandomStream& rng) const {
    const auto t = state_.epoch();
    if (t >= 1 && static_cast<std::size_t>(t) <= arms()) return static_cast<std::size_t>(t - 1);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> ties;
    for (std::size_t k = 0; k < arms(); ++k) {
      const double m = estimate(k).mean;
      if (m > best) {
        best = m;
        ties.assign(1, k);
      } else if (m == best) {
        ties.push_back(k);
      }
    }
    return ties.size() == 1 ? ties.front() : ties[rng.below(ties.size())];
  }

 private:
  std::size_t argmax_index() const {
    std::vector<double> u(arms());
    for (std::size_t k = 0; k < arms(); ++k) u[k] = upper_index(k);
    return smallest_argmax(u);
  }

  PolicyConfig cfg_;
  double sigma_;
  double sigma_hat_;
  std::vector<double> mapping_;
  TimeIndex time_index_;
  PolicyState state_;
  std::vector<double> scratch_;
};

}  // namespace auxbandit
