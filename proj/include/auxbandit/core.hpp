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
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "auxbandit/errors.hpp"

namespace auxbandit {

// Observation laws. Constant emits its mean exactly and is meant for
// auxiliary streams in adversarial scenarios.
enum class Family { kGaussian, kBernoulli, kConstant };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::kGaussian: return "gaussian";
    case Family::kBernoulli: return "bernoulli";
    case Family::kConstant: return "constant";
  }
  return "?";
}

struct ProblemInstance {
  std::vector<double> mu;
  double sigma = 0.5;
  double sigma_hat = 0.5;  // scale of a raw auxiliary observation
  std::vector<double> y;
  std::vector<double> alpha;
  Family reward_family = Family::kGaussian;
  Family aux_family = Family::kGaussian;

  std::size_t arms() const { return mu.size(); }

  // Smallest index attaining the maximal mean.
  std::size_t best_arm() const {
    if (mu.empty()) throw DomainError("instance has no arms");
    return static_cast<std::size_t>(std::max_element(mu.begin(), mu.end()) - mu.begin());
  }

  double best_mean() const { return mu[best_arm()]; }

  double gap(std::size_t k) const {
    if (k >= mu.size()) throw DomainError("arm index out of range");
    return best_mean() - mu[k];
  }

  std::vector<double> gaps() const {
    std::vector<double> g(mu.size());
    for (std::size_t k = 0; k < mu.size(); ++k) g[k] = gap(k);
    return g;
  }

  // Smallest positive gap; 0 if every arm is optimal.
  double min_gap() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mu.size(); ++k) {
      const double d = gap(k);
      if (d > 0.0) best = std::min(best, d);
    }
    return std::isinf(best) ? 0.0 : best;
  }

  // True when alpha_k * y_k = mu_k for every arm with alpha_k > 0.
  bool well_specified(double tol = 1e-12) const {
    for (std::size_t k = 0; k < mu.size(); ++k) {
      if (alpha[k] > 0.0 && std::abs(alpha[k] * y[k] - mu[k]) > tol) return false;
    }
    return true;
  }

  // Collects every violated constraint; empty means valid.
  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    const std::size_t K = mu.size();
    if (K < 2) out.push_back("instance.mu: need at least 2 arms");
    if (y.size() != K) out.push_back("instance.y: length must equal the number of arms");
    if (alpha.size() != K) out.push_back("instance.alpha: length must equal the number of arms");
    // sigma = 0 is accepted as a noiseless degenerate case.
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) out.push_back("instance.sigma: must be >= 0");
    if (!(sigma_hat >= 0.0) || !std::isfinite(sigma_hat)) out.push_back("instance.sigma_hat: must be >= 0");
    if (reward_family == Family::kConstant)
      out.push_back("instance.reward_family: constant rewards are not supported");
    for (double m : mu)
      if (!std::isfinite(m)) out.push_back("instance.mu: entries must be finite");
    for (double v : y)
      if (!(v >= 0.0) || !std::isfinite(v)) out.push_back("instance.y: entries must be finite and >= 0");
    for (double a : alpha)
      if (!(a >= 0.0) || !std::isfinite(a)) out.push_back("instance.alpha: entries must be finite and >= 0");
    if (reward_family == Family::kBernoulli)
      for (double m : mu)
        if (m < 0.0 || m > 1.0) out.push_back("instance.mu: Bernoulli means must lie in [0,1]");
    if (aux_family == Family::kBernoulli)
      for (double v : y)
        if (v > 1.0) out.push_back("instance.y: Bernoulli means must lie in [0,1]");
    return out;
  }

  void validate() const {
    const auto p = problems();
    if (p.empty()) return;
    std::string msg;
    for (const auto& s : p) msg += (msg.empty() ? "" : "; ") + s;
    throw ConfigError(msg);
  }

  // Auxiliary observations distributed exactly like rewards.
  static ProblemInstance aux_equals_reward(std::vector<double> mu, double sigma,
                                           Family family = Family::kGaussian) {
    ProblemInstance p;
    p.y = mu;
    p.alpha.assign(mu.size(), 1.0);
    p.mu = std::move(mu);
    p.sigma = sigma;
    p.sigma_hat = sigma;
    p.reward_family = family;
    p.aux_family = family;
    return p;
  }
};

// K x T grid of arrival counts, row major. Epochs are 0-based in the API.
class ArrivalMatrix {
 public:
  ArrivalMatrix() = default;
  ArrivalMatrix(std::size_t K, std::size_t T) : K_(K), T_(T), h_(K * T, 0) {}

  std::size_t arms() const { return K_; }
  std::size_t horizon() const { return T_; }

  std::int64_t at(std::size_t k, std::size_t t) const {
    check(k, t);
    return h_[k * T_ + t];
  }

  void set(std::size_t k, std::size_t t, std::int64_t v) {
    check(k, t);
    if (v < 0) throw DomainError("arrival counts must be non-negative");
    h_[k * T_ + t] = v;
  }

  std::span<const std::int64_t> row(std::size_t k) const {
    if (k >= K_) throw DomainError("arm index out of range");
    return {h_.data() + k * T_, T_};
  }

  // Arrivals on arm k in epochs 0..t inclusive.
  std::int64_t cum(std::size_t k, std::size_t t) const {
    check(k, t);
    std::int64_t s = 0;
    for (std::size_t u = 0; u <= t; ++u) s += h_[k * T_ + u];
    return s;
  }

  std::vector<std::int64_t> cumulative_row(std::size_t k) const {
    const auto r = row(k);
    std::vector<std::int64_t> c(T_);
    std::int64_t s = 0;
    for (std::size_t t = 0; t < T_; ++t) c[t] = (s += r[t]);
    return c;
  }

  std::int64_t total(std::size_t k) const {
    std::int64_t s = 0;
    for (auto v : row(k)) s += v;
    return s;
  }

  bool operator==(const ArrivalMatrix&) const = default;

 private:
  void check(std::size_t k, std::size_t t) const {
    if (k >= K_ || t >= T_) throw DomainError("arrival matrix index out of range");
  }

  std::size_t K_ = 0;
  std::size_t T_ = 0;
  std::vector<std::int64_t> h_;
};

// Weighted mean and (possibly fractional) sample count.
struct Estimate {
  double mean = 0.0;
  double count = 0.0;
};

struct ArmTally {
  std::int64_t pulls = 0;
  double reward_sum = 0.0;
  std::int64_t aux_count = 0;
  double aux_sum = 0.0;
  double mapped_aux_sum = 0.0;
  double virtual_time = 0.0;
};

// Per-arm counters behind every policy. Derived statistics are recomputed
// from running sums on demand, so they equal any same-order recomputation.
class PolicyState {
 public:
  PolicyState() = default;
  explicit PolicyState(std::size_t arms) : arms_(arms) {}
  PolicyState(std::size_t arms, std::vector<double> mapping)
      : arms_(arms), mapping_(std::move(mapping)) {
    if (mapping_.size() != arms) throw ConfigError("mapping length must equal the number of arms");
  }

  std::size_t arms() const { return arms_.size(); }
  const ArmTally& arm(std::size_t k) const { return arms_.at(check(k)); }
  bool has_mapping() const { return !mapping_.empty(); }
  double mapping(std::size_t k) const { return has_mapping() ? mapping_[check(k)] : 1.0; }

  // Current epoch, 1-based once begin_epoch has been called.
  std::int64_t epoch() const { return epoch_; }
  // Number of clicked (observed) rewards so far.
  std::int64_t clicks() const { return clicks_; }

  // Opens the next epoch: t += 1 and every virtual clock advances by one.
  void begin_epoch() {
    ++epoch_;
    for (auto& a : arms_) a.virtual_time += 1.0;
  }

  // Multiplies arm k's virtual clock by exp(exponent).
  void inflate_virtual_time(std::size_t k, double exponent) {
    arms_[check(k)].virtual_time *= std::exp(exponent);
  }

  void update_on_reward(std::size_t k, double reward, bool clicked = true) {
    auto& a = arms_[check(k)];
    if (!clicked) return;
    a.pulls += 1;
    a.reward_sum += reward;
    ++clicks_;
  }

  void update_on_aux(std::size_t k, std::span<const double> ys) {
    auto& a = arms_[check(k)];
    const double m = mapping(k);
    for (double v : ys) {
      a.aux_count += 1;
      a.aux_sum += v;
      if (has_mapping()) a.mapped_aux_sum += m * v;
    }
  }

  // Reward-only sample mean and pull count.
  Estimate reward_stats(std::size_t k) const {
    const auto& a = arm(k);
    const double n = static_cast<double>(a.pulls);
    return {a.pulls > 0 ? a.reward_sum / n : 0.0, n};
  }

  // Raw auxiliary average, 0 when nothing arrived.
  double aux_mean(std::size_t k) const {
    const auto& a = arm(k);
    return a.aux_count > 0 ? a.aux_sum / static_cast<double>(a.aux_count) : 0.0;
  }

  // Precision-weighted pooling of rewards and mapped auxiliary observations.
  // sigma_hat is the scale of a mapped observation.
  Estimate known_mapping_stats(std::size_t k, double sigma, double sigma_hat) const {
    const auto& a = arm(k);
    const double n_pi = static_cast<double>(a.pulls);
    const double mapped = has_mapping() ? a.mapped_aux_sum : a.aux_sum;
    if (a.aux_count == 0) return {a.pulls > 0 ? a.reward_sum / n_pi : 0.0, n_pi};
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(sigma_hat > 0.0)) throw DomainError("sigma_hat must be positive once auxiliary data arrived");
    const double n_aux = static_cast<double>(a.aux_count);
    const double s2 = sigma * sigma;
    const double sh2 = sigma_hat * sigma_hat;
    const double count = n_pi + (s2 / sh2) * n_aux;
    const double mean = (a.reward_sum / s2 + mapped / sh2) / (n_pi / s2 + n_aux / sh2);
    return {mean, count};
  }

  // Optimistic blend using the raw auxiliary average scaled by alpha_bar.
  // sigma_hat is the scale of a raw observation.
  Estimate optimistic_stats(std::size_t k, double sigma, double sigma_hat, double alpha_bar) const {
    const auto& a = arm(k);
    if (!(alpha_bar > 0.0)) throw DomainError("alpha_bar must be positive");
    const double n_pi = static_cast<double>(a.pulls);
    if (a.aux_count == 0 || std::isinf(alpha_bar))
      return {a.pulls > 0 ? a.reward_sum / n_pi : 0.0, n_pi};
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(sigma_hat > 0.0)) throw DomainError("sigma_hat must be positive once auxiliary data arrived");
    const double n_aux = static_cast<double>(a.aux_count);
    const double w = (sigma * sigma) / (alpha_bar * alpha_bar * sigma_hat * sigma_hat);
    const double count = n_pi + w * n_aux;
    const double mean = (a.reward_sum + w * alpha_bar * a.aux_sum) / std::max(1.0, count);
    return {mean, count};
  }

 private:
  std::size_t check(std::size_t k) const {
    if (k >= arms_.size()) throw DomainError("arm index out of range");
    return k;
  }

  std::vector<ArmTally> arms_;
  std::vector<double> mapping_;
  std::int64_t epoch_ = 0;
  std::int64_t clicks_ = 0;
};

}  // namespace auxbandit
