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
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "auxbandit/core.hpp"
#include "auxbandit/errors.hpp"

namespace auxbandit {

namespace detail {

// log sum_{t=1..T} exp(-rate * S_t) with S_t the arrivals in periods before t
// (lagged) or up to and including t. The leading term is the largest; the
// others are taken relative to it with exact integer differences.
inline double log_sum_exp_decay(std::span<const std::int64_t> h, double rate, bool lagged) {
  if (h.empty()) throw DomainError("empty arrival row");
  if (!(rate >= 0.0)) throw DomainError("rate must be >= 0");
  if (rate == 0.0) return std::log(static_cast<double>(h.size()));
  const std::int64_t first = lagged ? 0 : h[0];
  std::int64_t cum = 0;
  double rest = 0.0;  // sum over t >= 2
  for (std::size_t t = 0; t < h.size(); ++t) {
    const std::int64_t s = lagged ? cum : cum + h[t];
    cum += h[t];
    if (t == 0) continue;
    rest += std::exp(-rate * static_cast<double>(s - first));
  }
  return -rate * static_cast<double>(first) + std::log1p(rest);
}

}  // namespace detail

// log sum_t exp(-c * cum_t), cum_t counting arrivals up to and including t.
inline double logsumexp_rate(std::span<const std::int64_t> h, double c) {
  return detail::log_sum_exp_decay(h, c, false);
}

// log T minus the rate functional at c = c_tilde (delta / (sigma_hat alpha))^2.
inline double aie_index(std::span<const std::int64_t> h, std::size_t T, double delta, double sigma_hat,
                        double alpha, double c_tilde) {
  if (T < 1) throw DomainError("T must be >= 1");
  if (h.size() != T) throw DomainError("arrival row length must equal T");
  if (!(sigma_hat > 0.0) || !(alpha > 0.0)) throw DomainError("sigma_hat and alpha must be positive");
  const double r = delta / (sigma_hat * alpha);
  const double rate = logsumexp_rate(h, c_tilde * r * r);
  return std::log(static_cast<double>(T)) - rate;
}

struct LowerBound {
  double value = 0.0;
  bool vacuous = false;  // negative: carries no information
};

// Worst-case regret lower bound with known mappings.
inline LowerBound minimax_lower_bound(const ArrivalMatrix& H, double delta, double sigma, double sigma_hat) {
  if (!(sigma > 0.0) || !(sigma_hat > 0.0)) throw DomainError("sigma and sigma_hat must be positive");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const auto K = static_cast<double>(H.arms());
  if (H.arms() < 1 || H.horizon() < 1) throw DomainError("empty arrival matrix");
  const double d2 = delta * delta;
  const double rate = 2.0 * d2 / (sigma_hat * sigma_hat);
  const double scale = std::log(d2 / (sigma * sigma * K));
  double sum = 0.0;
  for (std::size_t k = 0; k < H.arms(); ++k) sum += scale + logsumexp_rate(H.row(k), rate);
  LowerBound out;
  out.value = sigma * sigma * (K - 1.0) / (4.0 * K * delta) * sum;
  out.vacuous = out.value < 0.0;
  return out;
}

// sum_{t=1..T} 2 / t^(c/2).
inline double ucb_tail_series(std::size_t T, double c) {
  double s = 0.0;
  for (std::size_t t = 1; t <= T; ++t) s += 2.0 / std::pow(static_cast<double>(t), c / 2.0);
  return s;
}

// Regret upper bound for aUCB1 on a fixed matrix: each suboptimal arm
// contributes gap * (pull-count bound), pull-count bound = log term + tail.
inline double aucb1_upper_bound(const ArrivalMatrix& H, std::span<const double> gaps, double sigma,
                                double sigma_hat, double c) {
  if (!(c > 2.0)) throw DomainError("aUCB1 bound needs c > 2");
  if (gaps.size() != H.arms()) throw DomainError("one gap per arm required");
  if (!(sigma > 0.0) || !(sigma_hat > 0.0)) throw DomainError("sigma and sigma_hat must be positive");
  const double tail = ucb_tail_series(H.horizon(), c);
  double total = 0.0;
  for (std::size_t k = 0; k < H.arms(); ++k) {
    const double d = gaps[k];
    if (d < 0.0) throw DomainError("gaps must be >= 0");
    if (d == 0.0) continue;
    const double d2 = d * d;
    const double lse = detail::log_sum_exp_decay(H.row(k), d2 / (4.0 * c * sigma_hat * sigma_hat), true);
    total += d * (4.0 * c * sigma * sigma / d2 * lse + tail);
  }
  return total;
}

enum class CorollaryKind { kStationaryTS, kDiminishingTS };

struct CorollaryParams {
  double c = 1.0;
  double delta = 0.0;        // minimum gap
  std::vector<double> gaps;  // per arm, 0 for optimal arms
  double sigma = 0.5;
  double sigma_hat = 0.5;
  double T = 1.0;
  double lambda = 0.0;  // stationary
  double kappa = 0.0;   // diminishing
  double C = 0.0;       // caller-supplied constant
};

namespace detail {

// (T^(1-x) - 1) / (1 - x), continuous at x = 1.
inline double power_sum_kernel(double T, double x) {
  if (std::abs(1.0 - x) < 1e-12) return std::log(T);
  return std::expm1((1.0 - x) * std::log(T)) / (1.0 - x);
}

}  // namespace detail

// Expected-regret bounds for aTS under stationary or diminishing arrivals.
inline double corollary_bound(CorollaryKind kind, const CorollaryParams& p) {
  if (!(p.c > 0.0) || !(p.delta > 0.0) || !(p.sigma > 0.0) || !(p.sigma_hat > 0.0) || !(p.T >= 1.0))
    throw DomainError("corollary bound: c, delta, sigma, sigma_hat must be positive and T >= 1");
  if (p.C < 0.0) throw DomainError("corollary bound: C must be >= 0");
  double arg = 0.0;
  if (kind == CorollaryKind::kStationaryTS) {
    if (!(p.lambda >= 0.0 && p.lambda <= 1.0)) throw DomainError("lambda must lie in [0,1]");
    const double d2 = p.delta * p.delta;
    const double cap = p.lambda > 0.0
                           ? (18.0 * p.c * p.sigma_hat * p.sigma_hat + 10.0 * d2) / (d2 * p.lambda)
                           : std::numeric_limits<double>::infinity();
    arg = std::min(p.T + 1.0, cap);
  } else {
    if (!(p.kappa > 0.0)) throw DomainError("kappa must be positive");
    const double a = p.kappa / (72.0 * p.c);
    const double b = p.kappa * p.sigma_hat * p.sigma_hat / (20.0 * p.delta * p.delta);
    arg = 2.0 + detail::power_sum_kernel(p.T, a) + detail::power_sum_kernel(p.T, b);
  }
  const double kernel = 18.0 * p.c * p.sigma * p.sigma / (p.delta * p.delta) * std::log(arg);
  double total = 0.0;
  for (double g : p.gaps) {
    if (g < 0.0) throw DomainError("gaps must be >= 0");
    if (g == 0.0) continue;
    total += g * (kernel + p.C * (1.0 + 1.0 / (g * g * g * g)));
  }
  return total;
}

struct UnknownMappingConstants {
  double C5 = 1.0;
  double C6 = 1.0;
  double C7 = 1.0;
};

// Lower bound on expected pulls of arm k when mappings are unknown.
// delta_k = mu* - alpha_bar y_k; its sign selects the case.
inline double unknown_mapping_lower_bound(std::span<const std::int64_t> h, std::size_t K, double gap,
                                          double delta_k, const UnknownMappingConstants& C) {
  const std::size_t T = h.size();
  if (T < 2) throw DomainError("T must be >= 2");
  if (delta_k == 0.0) throw DomainError("delta_k = 0 lies outside both cases");
  if (!(gap > 0.0)) throw DomainError("gap must be positive");
  if (K < 1) throw DomainError("K must be >= 1");
  const double Td = static_cast<double>(T);
  const double denom = static_cast<double>(K) * std::log(Td);
  const double lead = C.C5 / (gap * gap);
  if (delta_k < 0.0) {
    const double m = std::min(4.0 * std::pow(gap, 4), std::pow(gap - delta_k, 2) * delta_k * delta_k);
    return lead * std::log(C.C6 * m * Td / denom);
  }
  const double pre = C.C6 * std::pow(gap + delta_k, 2) * delta_k * delta_k / denom;
  return lead * (std::log(pre) + logsumexp_rate(h, C.C7 * delta_k * delta_k));
}

}  // namespace auxbandit
