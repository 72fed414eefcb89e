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
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "auxbandit/bounds.hpp"
#include "auxbandit/errors.hpp"
#include "auxbandit/policies.hpp"
#include "auxbandit/random.hpp"
#include "auxbandit/sim.hpp"

namespace auxbandit {

// One article-day: a known outside option (arm 0) against an experimental
// version (arm 1) whose conversion rate is learned from clicked
// recommendations and from a frozen stream of auxiliary outcomes.
struct ReplayCase {
  std::string case_id;
  std::size_t T = 2000;
  double ctr = 0.0;
  double cvr_recom = 0.0;  // arm 1
  double delta = 0.0;      // arm 0 sits at cvr_recom +/- delta
  double cvr_search = 0.0;
  double alpha_true = 1.0;
  double alpha_hat = 1.0;
  double alpha_bar = 1.1;
  std::vector<std::int64_t> h_row;
  std::vector<std::uint8_t> y_stream;

  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    const std::string w = "case " + case_id + ": ";
    if (T < 1) out.push_back(w + "T must be >= 1");
    if (h_row.size() != T) out.push_back(w + "h_row length must equal T");
    std::int64_t total = 0;
    for (auto v : h_row) {
      if (v < 0) out.push_back(w + "h_row entries must be >= 0");
      total += v;
    }
    if (static_cast<std::int64_t>(y_stream.size()) != total)
      out.push_back(w + "y_stream length must equal the total of h_row");
    for (auto v : y_stream)
      if (v > 1) {
        out.push_back(w + "y_stream entries must be 0 or 1");
        break;
      }
    if (!(ctr >= 0.0 && ctr <= 1.0)) out.push_back(w + "ctr must lie in [0,1]");
    if (!(cvr_recom > 0.0 && cvr_recom < 1.0)) out.push_back(w + "cvr_recom must lie in (0,1)");
    if (!(delta >= 0.0) || !(cvr_recom - delta > 0.0) || !(cvr_recom + delta < 1.0))
      out.push_back(w + "cvr_recom +/- delta must lie in (0,1)");
    if (!(cvr_search > 0.0 && cvr_search < 1.0)) out.push_back(w + "cvr_search must lie in (0,1)");
    if (!(alpha_true > 0.0)) out.push_back(w + "alpha_true must be > 0");
    if (!(alpha_hat > 0.0)) out.push_back(w + "alpha_hat must be > 0");
    if (!(alpha_bar > 0.0)) out.push_back(w + "alpha_bar must be > 0");
    return out;
  }

  void validate() const {
    const auto p = problems();
    if (!p.empty()) throw ConfigError(p.front());
  }
};

struct ReplayParams {
  double sigma = 0.5;      // reward scale
  double sigma_hat = 0.5;  // raw auxiliary scale; aUCB1 rescales by alpha_hat
  double aie_sigma_hat = 0.25;
};

struct ReplayTrace {
  std::vector<std::uint8_t> arm;
  std::vector<std::uint8_t> clicked;
  std::vector<std::uint8_t> outcome;
};

struct ReplayOutcome {
  double regret = 0.0;
  int sign = 1;  // +1: outside option better
  double cvr0 = 0.0;
  double cvr1 = 0.0;
  std::optional<ReplayTrace> trace;
};

inline bool replay_supported(PolicyKind k) {
  return k == PolicyKind::kUCB1 || k == PolicyKind::kaUCB1 || k == PolicyKind::kTwoUCBs;
}

// Realized click-gated regret of one replication. The sign, clicks and
// conversion outcomes are keyed by (seed, arm, t), shared across policies.
inline ReplayOutcome simulate_article_day(const ReplayCase& c, const PolicyConfig& cfg, std::uint64_t seed,
                                          const ReplayParams& params = {}, bool record = false) {
  c.validate();
  if (!replay_supported(cfg.kind))
    throw ConfigError(std::string("policy ") + to_string(cfg.kind) + " is not supported in replay");
  PolicyConfig pc = cfg;
  if (pc.kind == PolicyKind::kTwoUCBs && !pc.alpha_bar) pc.alpha_bar = c.alpha_bar;

  ReplayOutcome out;
  RandomStream sign_rng(phase_key(seed, Phase::kReplaySign));
  out.sign = sign_rng.uniform() < 0.5 ? 1 : -1;
  out.cvr1 = c.cvr_recom;
  out.cvr0 = c.cvr_recom + out.sign * c.delta;
  const double best = std::max(out.cvr0, out.cvr1);
  const std::array<double, 2> cvr{out.cvr0, out.cvr1};

  Policy policy(pc, 2, params.sigma, params.sigma_hat, {c.alpha_hat, c.alpha_hat}, TimeIndex::kClicks);
  const std::uint64_t click_key = phase_key(seed, Phase::kReplayClick);
  const std::uint64_t outcome_key = phase_key(seed, Phase::kReplayOutcome);
  if (record) {
    out.trace.emplace();
    out.trace->arm.resize(c.T);
    out.trace->clicked.resize(c.T);
    out.trace->outcome.resize(c.T);
  }
  std::vector<double> batch;
  std::size_t cursor = 0;
  for (std::size_t t = 0; t < c.T; ++t) {
    policy.begin_epoch();
    const auto n = static_cast<std::size_t>(c.h_row[t]);
    if (n > 0) {
      batch.resize(n);
      for (std::size_t i = 0; i < n; ++i) batch[i] = c.y_stream[cursor + i];
      cursor += n;
      policy.observe_aux(1, batch);
    }
    const std::size_t arm = policy.upper_index(1) >= out.cvr0 ? 1 : 0;
    RandomStream click_rng(derive_key(click_key, t));
    const bool clicked = click_rng.bernoulli(c.ctr);
    double x = 0.0;
    if (clicked) {
      RandomStream xr(derive_key(outcome_key, arm, t));
      x = xr.bernoulli(cvr[arm]) ? 1.0 : 0.0;
      out.regret += best - x;
    }
    policy.observe_reward(arm, x, clicked);
    if (record) {
      out.trace->arm[t] = static_cast<std::uint8_t>(arm);
      out.trace->clicked[t] = clicked;
      out.trace->outcome[t] = static_cast<std::uint8_t>(x);
    }
  }
  return out;
}

// (r_ucb1 - r_policy) / r_ucb1; missing when r_ucb1 <= 0.
inline std::optional<double> relative_improvement(double r_ucb1, double r_policy) {
  if (!(r_ucb1 > 0.0)) return std::nullopt;
  return (r_ucb1 - r_policy) / r_ucb1;
}

inline double relative_mapping_misspecification(double cvr, double alpha_hat, double alpha_true) {
  if (!(alpha_true > 0.0)) throw DomainError("alpha_true must be positive");
  return cvr * std::abs(1.0 - alpha_hat / alpha_true);
}

struct RegretPair {
  double policy = 0.0;
  double ucb1 = 0.0;
};

// Share of cases where the policy did not do worse than UCB1.
inline double no_harm_rate(std::span<const RegretPair> pairs) {
  if (pairs.empty()) throw DomainError("no-harm rate of no cases");
  std::size_t ok = 0;
  for (const auto& p : pairs)
    if (p.policy <= p.ucb1) ++ok;
  return static_cast<double>(ok) / static_cast<double>(pairs.size());
}

struct SynthParams {
  std::size_t T = 2000;
  double ctr_min = 0.01, ctr_max = 0.2;
  double cvr_min = 0.05, cvr_max = 0.5;
  double alpha_min = 1.0, alpha_max = 16.0;
  double delta_min = 0.01, delta_max = 0.04;
  double misspecification = 0.0;  // alpha_hat = alpha_true * (1 + level)
  double intensity = 1.0;         // Poisson mean of arrivals per epoch
  double alpha_bar_factor = 1.1;  // alpha_bar = factor * alpha_hat

  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    auto range = [&](double lo, double hi, double a, double b, const char* name) {
      if (!(lo <= hi) || lo < a || hi > b)
        out.push_back(std::string(name) + " range must lie within [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
    };
    range(ctr_min, ctr_max, 0.01, 0.2, "ctr");
    range(cvr_min, cvr_max, 0.05, 0.5, "cvr");
    range(alpha_min, alpha_max, 1.0, 16.0, "alpha");
    range(delta_min, delta_max, 0.01, 0.04, "delta");
    if (T < 1) out.push_back("T must be >= 1");
    if (!(misspecification > -1.0)) out.push_back("misspecification must be > -1");
    if (!(intensity >= 0.0 && intensity <= 50.0)) out.push_back("intensity must lie in [0,50]");
    if (!(alpha_bar_factor > 0.0)) out.push_back("alpha_bar_factor must be > 0");
    return out;
  }
};

// Deterministic synthetic corpus; arrivals and auxiliary outcomes are frozen
// into each case.
inline std::vector<ReplayCase> synth_article_days(std::size_t n_cases, const SynthParams& p, std::uint64_t seed) {
  const auto errs = p.problems();
  if (!errs.empty()) throw ConfigError(errs.front());
  std::vector<ReplayCase> out;
  out.reserve(n_cases);
  const std::uint64_t base = phase_key(seed, Phase::kCorpus);
  for (std::size_t i = 0; i < n_cases; ++i) {
    RandomStream rng(derive_key(base, i));
    ReplayCase c;
    c.case_id = "case-" + std::to_string(i);
    c.T = p.T;
    c.ctr = p.ctr_min + (p.ctr_max - p.ctr_min) * rng.uniform();
    c.cvr_recom = p.cvr_min + (p.cvr_max - p.cvr_min) * rng.uniform();
    c.alpha_true = p.alpha_min + (p.alpha_max - p.alpha_min) * rng.uniform();
    c.delta = p.delta_min + (p.delta_max - p.delta_min) * rng.uniform();
    c.cvr_search = c.cvr_recom / c.alpha_true;
    c.alpha_hat = c.alpha_true * (1.0 + p.misspecification);
    c.alpha_bar = p.alpha_bar_factor * c.alpha_hat;
    c.h_row.resize(p.T);
    for (auto& h : c.h_row) h = rng.poisson(p.intensity);
    for (auto h : c.h_row)
      for (std::int64_t j = 0; j < h; ++j) c.y_stream.push_back(rng.bernoulli(c.cvr_search) ? 1 : 0);
    out.push_back(std::move(c));
  }
  return out;
}

inline double case_aie(const ReplayCase& c, double ucb_c, const ReplayParams& params = {}) {
  return aie_index(c.h_row, c.T, c.delta, params.aie_sigma_hat, c.alpha_true, 4.0 * ucb_c);
}

inline double case_rmm(const ReplayCase& c) {
  return relative_mapping_misspecification(c.cvr_recom, c.alpha_hat, c.alpha_true);
}

struct CaseResult {
  std::string case_id;
  double aie = 0.0;
  double rmm = 0.0;
  std::vector<double> mean_regret;         // per policy
  std::vector<std::optional<double>> ri;   // per policy, against the first UCB1
};

// Replication r of case i runs under replication_seed(derive_key(seed, i), r).
inline std::vector<CaseResult> run_replay(const std::vector<ReplayCase>& cases, const std::vector<PolicyConfig>& cfgs,
                                          std::size_t n_reps, std::uint64_t base_seed, std::size_t threads = 1,
                                          const ReplayParams& params = {}) {
  if (n_reps < 1) throw ConfigError("n_reps must be >= 1");
  if (cfgs.empty()) throw ConfigError("replay needs at least one policy");
  for (const auto& c : cases) c.validate();
  for (const auto& p : cfgs) {
    PolicyConfig probe = p;
    if (!probe.alpha_bar) probe.alpha_bar = 1.0;  // filled per case
    probe.validate();
    if (!replay_supported(p.kind)) throw ConfigError(std::string("policy ") + to_string(p.kind) + " is not supported in replay");
  }
  std::optional<std::size_t> baseline;
  for (std::size_t j = 0; j < cfgs.size(); ++j)
    if (cfgs[j].kind == PolicyKind::kUCB1) {
      baseline = j;
      break;
    }
  const double ucb_c = baseline ? cfgs[*baseline].c : cfgs.front().c;
  std::vector<CaseResult> out(cases.size());
  parallel_for(0, cases.size(), threads, [&](std::size_t i) {
    const auto& c = cases[i];
    CaseResult res;
    res.case_id = c.case_id;
    res.aie = case_aie(c, ucb_c, params);
    res.rmm = case_rmm(c);
    const std::uint64_t case_seed = derive_key(base_seed, i);
    for (const auto& p : cfgs) {
      double sum = 0.0;
      for (std::size_t r = 0; r < n_reps; ++r)
        sum += simulate_article_day(c, p, replication_seed(case_seed, r), params).regret;
      res.mean_regret.push_back(sum / static_cast<double>(n_reps));
    }
    for (std::size_t j = 0; j < cfgs.size(); ++j)
      res.ri.push_back(baseline ? relative_improvement(res.mean_regret[*baseline], res.mean_regret[j])
                                : std::nullopt);
    out[i] = std::move(res);
  });
  return out;
}

// JSON-lines corpus I/O.
inline nlohmann::json to_json(const ReplayCase& c) {
  nlohmann::json j;
  j["case_id"] = c.case_id;
  j["T"] = c.T;
  j["ctr"] = c.ctr;
  j["cvr_recom"] = c.cvr_recom;
  j["delta"] = c.delta;
  j["cvr_search"] = c.cvr_search;
  j["alpha_true"] = c.alpha_true;
  j["alpha_hat"] = c.alpha_hat;
  j["alpha_bar"] = c.alpha_bar;
  j["h_row"] = c.h_row;
  j["y_stream"] = c.y_stream;
  return j;
}

inline ReplayCase case_from_json(const nlohmann::json& j, std::size_t line) {
  static const std::vector<std::string> known{"case_id", "T", "ctr", "cvr_recom", "delta", "cvr_search",
                                              "alpha_true", "alpha_hat", "alpha_bar", "h_row", "y_stream"};
  if (!j.is_object()) throw ParseError("corpus line is not a JSON object", line, 0);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ParseError("unknown corpus field '" + it.key() + "'", line, 0);
  try {
    ReplayCase c;
    c.case_id = j.value("case_id", "line-" + std::to_string(line));
    c.T = j.at("T").get<std::size_t>();
    c.ctr = j.at("ctr").get<double>();
    c.cvr_recom = j.at("cvr_recom").get<double>();
    c.delta = j.at("delta").get<double>();
    c.alpha_true = j.at("alpha_true").get<double>();
    c.cvr_search = j.contains("cvr_search") ? j.at("cvr_search").get<double>() : c.cvr_recom / c.alpha_true;
    c.alpha_hat = j.at("alpha_hat").get<double>();
    c.alpha_bar = j.contains("alpha_bar") ? j.at("alpha_bar").get<double>() : 1.1 * c.alpha_hat;
    c.h_row = j.at("h_row").get<std::vector<std::int64_t>>();
    for (const auto& v : j.at("y_stream")) {
      const auto x = v.get<std::int64_t>();
      if (x != 0 && x != 1) throw ParseError("y_stream entries must be 0 or 1", line, 0);
      c.y_stream.push_back(static_cast<std::uint8_t>(x));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("corpus field error: ") + e.what(), line, 0);
  }
}

inline void write_corpus(std::ostream& out, const std::vector<ReplayCase>& cases) {
  for (const auto& c : cases) out << to_json(c).dump() << '\n';
}

inline std::vector<ReplayCase> read_corpus(std::istream& in) {
  std::vector<ReplayCase> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), n, e.byte);
    }
    out.push_back(case_from_json(j, n));
  }
  return out;
}

inline std::vector<ReplayCase> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus '" + path + "'", 0, 0);
  return read_corpus(in);
}

}  // namespace auxbandit
