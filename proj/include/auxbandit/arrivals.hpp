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

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "auxbandit/core.hpp"
#include "auxbandit/errors.hpp"
#include "auxbandit/random.hpp"

namespace auxbandit {

enum class ArrivalKind {
  kStationary,
  kDiminishingBernoulli,
  kDiminishingDeterministic,
  kGammaFamily,
  kFromFile,
};

inline const char* to_string(ArrivalKind k) {
  switch (k) {
    case ArrivalKind::kStationary: return "stationary";
    case ArrivalKind::kDiminishingBernoulli: return "diminishing-bernoulli";
    case ArrivalKind::kDiminishingDeterministic: return "diminishing-deterministic";
    case ArrivalKind::kGammaFamily: return "gamma-family";
    case ArrivalKind::kFromFile: return "file";
  }
  return "?";
}

struct ArrivalSpec {
  ArrivalKind kind = ArrivalKind::kStationary;
  std::optional<double> lambda;
  std::optional<double> kappa;      // deterministic diminishing
  std::optional<double> kappa_aux;  // Bernoulli diminishing
  std::optional<double> gamma;
  std::optional<double> delta;
  std::optional<double> sigma_hat;
  std::string path;
  // Restricts arrivals to these arms (0-based); empty means every arm.
  std::vector<std::size_t> arms;

  std::vector<std::string> problems(const std::string& where = "arrivals") const {
    std::vector<std::string> out;
    auto need = [&](const std::optional<double>& v, const char* name) {
      if (!v) out.push_back(where + "." + name + ": required for kind " + to_string(kind));
      return v.has_value();
    };
    switch (kind) {
      case ArrivalKind::kStationary:
        if (need(lambda, "lambda") && !(*lambda >= 0.0 && *lambda <= 1.0))
          out.push_back(where + ".lambda: must lie in [0,1]");
        break;
      case ArrivalKind::kGammaFamily:
        if (need(lambda, "lambda") && !(*lambda >= 0.0 && *lambda <= 1.0))
          out.push_back(where + ".lambda: must lie in [0,1]");
        if (need(gamma, "gamma") && !(*gamma >= 0.0 && *gamma < 1.0))
          out.push_back(where + ".gamma: must lie in [0,1); use a diminishing kind for gamma >= 1");
        break;
      case ArrivalKind::kDiminishingBernoulli:
        if (need(kappa_aux, "kappa_aux") && !(*kappa_aux > 0.0))
          out.push_back(where + ".kappa_aux: must be > 0");
        break;
      case ArrivalKind::kDiminishingDeterministic:
        if (need(kappa, "kappa") && !(*kappa > 0.0)) out.push_back(where + ".kappa: must be > 0");
        if (need(delta, "delta") && !(*delta > 0.0)) out.push_back(where + ".delta: must be > 0");
        if (need(sigma_hat, "sigma_hat") && !(*sigma_hat > 0.0))
          out.push_back(where + ".sigma_hat: must be > 0");
        break;
      case ArrivalKind::kFromFile:
        if (path.empty()) out.push_back(where + ".path: required for kind file");
        break;
    }
    return out;
  }
};

// Non-fatal notes raised while generating (e.g. clipped probabilities).
using Warnings = std::vector<std::string>;

namespace detail {

inline bool arm_enabled(const std::vector<std::size_t>& arms, std::size_t k) {
  if (arms.empty()) return true;
  for (auto a : arms)
    if (a == k) return true;
  return false;
}

// Bernoulli(p(t)) per cell, drawn from the cell's own stream so that any two
// generators sharing a seed and a probability produce the same cell.
template <typename Prob>
ArrivalMatrix bernoulli_grid(std::size_t K, std::size_t T, std::uint64_t seed, Prob prob,
                             const std::vector<std::size_t>& arms = {}) {
  ArrivalMatrix H(K, T);
  const std::uint64_t base = phase_key(seed, Phase::kArrivals);
  for (std::size_t k = 0; k < K; ++k) {
    if (!arm_enabled(arms, k)) continue;
    const std::uint64_t arm_key = derive_key(base, k);
    for (std::size_t t = 0; t < T; ++t) {
      RandomStream rng(derive_key(arm_key, t));
      if (rng.uniform() < prob(t + 1)) H.set(k, t, 1);
    }
  }
  return H;
}

}  // namespace detail

inline ArrivalMatrix gen_stationary(std::size_t K, std::size_t T, double lambda, std::uint64_t seed,
                                    const std::vector<std::size_t>& arms = {}) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0,1]");
  return detail::bernoulli_grid(K, T, seed, [lambda](std::size_t) { return lambda; }, arms);
}

// Bernoulli(min{1, kappa_aux / t}) per cell.
inline ArrivalMatrix gen_diminishing_bernoulli(std::size_t K, std::size_t T, double kappa_aux,
                                               std::uint64_t seed, Warnings* warnings = nullptr,
                                               const std::vector<std::size_t>& arms = {}) {
  if (!(kappa_aux > 0.0)) throw DomainError("kappa_aux must be positive");
  if (warnings && kappa_aux > 1.0)
    warnings->push_back("diminishing-bernoulli: probability clipped to 1 for t <= " +
                        std::to_string(static_cast<long long>(std::floor(kappa_aux))));
  return detail::bernoulli_grid(
      K, T, seed,
      [kappa_aux](std::size_t t) { return std::min(1.0, kappa_aux / static_cast<double>(t)); }, arms);
}

// Cumulative count floor(c log t) with c = sigma_hat^2 kappa / (2 delta^2).
inline ArrivalMatrix gen_diminishing_deterministic(std::size_t K, std::size_t T, double kappa,
                                                   double delta, double sigma_hat,
                                                   const std::vector<std::size_t>& arms = {}) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  if (!(delta > 0.0) || !(sigma_hat > 0.0)) throw DomainError("delta and sigma_hat must be positive");
  const double c = sigma_hat * sigma_hat * kappa / (2.0 * delta * delta);
  ArrivalMatrix H(K, T);
  for (std::size_t k = 0; k < K; ++k) {
    if (!detail::arm_enabled(arms, k)) continue;
    std::int64_t prev = 0;
    for (std::size_t t = 1; t <= T; ++t) {
      const auto cum = static_cast<std::int64_t>(std::floor(c * std::log(static_cast<double>(t))));
      H.set(k, t - 1, cum - prev);
      prev = cum;
    }
  }
  return H;
}

// Per-period probability of the gamma family: increments of the cumulative
// mean lambda T (t^(1-g) - 1) / (T^(1-g) - 1), so period 1 carries nothing
// and the cumulative mean reaches lambda T at t = T.
inline double gamma_family_probability(std::size_t t, std::size_t T, double lambda, double gamma) {
  const double e = 1.0 - gamma;
  const double td = static_cast<double>(t);
  const double Td = static_cast<double>(T);
  const double denom = std::pow(Td, e) - 1.0;
  if (t <= 1 || denom <= 0.0) return 0.0;
  return lambda * Td * (std::pow(td, e) - std::pow(td - 1.0, e)) / denom;
}

inline ArrivalMatrix gen_gamma_family(std::size_t K, std::size_t T, double lambda, double gamma,
                                      std::uint64_t seed, Warnings* warnings = nullptr,
                                      const std::vector<std::size_t>& arms = {}) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0,1]");
  if (!(gamma >= 0.0)) throw DomainError("gamma must be >= 0");
  if (gamma >= 1.0) throw DomainError("gamma >= 1: use a diminishing arrival kind");
  std::size_t clipped = 0;
  std::vector<double> p(T + 1, 0.0);
  for (std::size_t t = 1; t <= T; ++t) {
    p[t] = gamma_family_probability(t, T, lambda, gamma);
    if (p[t] > 1.0) {
      p[t] = 1.0;
      ++clipped;
    }
  }
  if (warnings && clipped > 0)
    warnings->push_back("gamma-family: per-period probability clipped to 1 in " +
                        std::to_string(clipped) + " periods; expected total is reduced");
  return detail::bernoulli_grid(K, T, seed, [&p](std::size_t t) { return p[t]; }, arms);
}

// CSV grid: K lines, T comma-separated non-negative integers, no header.
inline ArrivalMatrix parse_matrix(std::istream& in) {
  std::vector<std::vector<std::int64_t>> rows;
  std::string line;
  std::size_t r = 0;
  while (std::getline(in, line)) {
    ++r;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::int64_t> row;
    std::size_t col = 0;
    std::size_t pos = 0;
    while (true) {
      ++col;
      const std::size_t comma = line.find(',', pos);
      std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      cell = first == std::string::npos ? std::string() : cell.substr(first, last - first + 1);
      std::int64_t v = 0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw ParseError("arrival matrix cell '" + cell + "' is not an integer", r, col);
      if (v < 0) throw ParseError("arrival matrix cell " + cell + " is negative", r, col);
      row.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("ragged arrival matrix: expected " + std::to_string(rows.front().size()) +
                           " columns, found " + std::to_string(row.size()),
                       r, row.size());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("arrival matrix is empty", 0, 0);
  ArrivalMatrix H(rows.size(), rows.front().size());
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t t = 0; t < rows[k].size(); ++t) H.set(k, t, rows[k][t]);
  return H;
}

inline ArrivalMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open arrival matrix '" + path + "'", 0, 0);
  return parse_matrix(in);
}

inline void write_matrix(std::ostream& out, const ArrivalMatrix& H) {
  for (std::size_t k = 0; k < H.arms(); ++k) {
    const auto r = H.row(k);
    for (std::size_t t = 0; t < r.size(); ++t) {
      if (t) out << ',';
      out << r[t];
    }
    out << '\n';
  }
}

inline void save_matrix(const ArrivalMatrix& H, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write arrival matrix '" + path + "'");
  write_matrix(out, H);
}

// Dispatches on spec.kind.
inline ArrivalMatrix generate(const ArrivalSpec& spec, std::size_t K, std::size_t T, std::uint64_t seed,
                              Warnings* warnings = nullptr) {
  const auto p = spec.problems();
  if (!p.empty()) throw ConfigError(p.front());
  switch (spec.kind) {
    case ArrivalKind::kStationary:
      return gen_stationary(K, T, *spec.lambda, seed, spec.arms);
    case ArrivalKind::kDiminishingBernoulli:
      return gen_diminishing_bernoulli(K, T, *spec.kappa_aux, seed, warnings, spec.arms);
    case ArrivalKind::kDiminishingDeterministic:
      return gen_diminishing_deterministic(K, T, *spec.kappa, *spec.delta, *spec.sigma_hat, spec.arms);
    case ArrivalKind::kGammaFamily:
      return gen_gamma_family(K, T, *spec.lambda, *spec.gamma, seed, warnings, spec.arms);
    case ArrivalKind::kFromFile: {
      auto H = load_matrix(spec.path);
      if (H.arms() != K || H.horizon() != T)
        throw ConfigError("arrival matrix '" + spec.path + "' is " + std::to_string(H.arms()) + "x" +
                          std::to_string(H.horizon()) + ", expected " + std::to_string(K) + "x" +
                          std::to_string(T));
      return H;
    }
  }
  throw ConfigError("unknown arrival kind");
}

// True when the arrival process draws randomness (a fresh matrix per replication makes sense).
inline bool is_stochastic(const ArrivalSpec& spec) {
  return spec.kind == ArrivalKind::kStationary || spec.kind == ArrivalKind::kDiminishingBernoulli ||
         spec.kind == ArrivalKind::kGammaFamily;
}

}  // namespace auxbandit
