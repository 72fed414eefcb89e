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
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "auxbandit/arrivals.hpp"
#include "auxbandit/core.hpp"
#include "auxbandit/errors.hpp"
#include "auxbandit/policies.hpp"
#include "auxbandit/replay.hpp"

namespace auxbandit {

using Json = nlohmann::json;

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr std::uint64_t kDefaultSeed = 42;

// Every problem found while validating a document.
class ValidationError : public ConfigError {
 public:
  explicit ValidationError(std::vector<std::string> errors)
      : ConfigError(join(errors)), errors_(std::move(errors)) {}
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& e) {
    std::string s;
    for (const auto& x : e) s += (s.empty() ? "" : "\n") + x;
    return s;
  }
  std::vector<std::string> errors_;
};

namespace detail {

class Reader {
 public:
  std::vector<std::string> errors;

  void unknown_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (const char* k : keys) ok = ok || it.key() == k;
      if (!ok) errors.push_back(path + "." + it.key() + ": unknown key");
    }
  }

  bool object(const Json& obj, const std::string& path) {
    if (obj.is_object()) return true;
    errors.push_back(path + ": expected an object");
    return false;
  }

  std::optional<double> number(const Json& obj, const char* key, const std::string& path, bool required) {
    const std::string where = path + "." + key;
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) errors.push_back(where + ": required");
      return std::nullopt;
    }
    const auto& v = obj.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    }
    errors.push_back(where + ": expected a number");
    return std::nullopt;
  }

  std::optional<std::int64_t> integer(const Json& obj, const char* key, const std::string& path, bool required) {
    const std::string where = path + "." + key;
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) errors.push_back(where + ": required");
      return std::nullopt;
    }
    const auto& v = obj.at(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    errors.push_back(where + ": expected an integer");
    return std::nullopt;
  }

  std::optional<std::uint64_t> seed(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    errors.push_back(path + "." + key + ": expected a non-negative integer");
    return std::nullopt;
  }

  std::optional<bool> boolean(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (v.is_boolean()) return v.get<bool>();
    errors.push_back(path + "." + key + ": expected true or false");
    return std::nullopt;
  }

  std::optional<std::string> string(const Json& obj, const char* key, const std::string& path, bool required) {
    const std::string where = path + "." + key;
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) errors.push_back(where + ": required");
      return std::nullopt;
    }
    const auto& v = obj.at(key);
    if (v.is_string()) return v.get<std::string>();
    errors.push_back(where + ": expected a string");
    return std::nullopt;
  }

  std::optional<std::vector<double>> numbers(const Json& obj, const char* key, const std::string& path,
                                             bool required) {
    const std::string where = path + "." + key;
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) errors.push_back(where + ": required");
      return std::nullopt;
    }
    const auto& v = obj.at(key);
    if (!v.is_array()) {
      errors.push_back(where + ": expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) {
        errors.push_back(where + ": expected an array of numbers");
        return std::nullopt;
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

  void add(const std::vector<std::string>& more) { errors.insert(errors.end(), more.begin(), more.end()); }
};

inline std::optional<Family> family_from_string(const std::string& s) {
  if (s == "gaussian") return Family::kGaussian;
  if (s == "bernoulli") return Family::kBernoulli;
  if (s == "constant") return Family::kConstant;
  return std::nullopt;
}

inline std::optional<ArrivalKind> arrival_kind_from_string(const std::string& s) {
  for (auto k : {ArrivalKind::kStationary, ArrivalKind::kDiminishingBernoulli,
                 ArrivalKind::kDiminishingDeterministic, ArrivalKind::kGammaFamily, ArrivalKind::kFromFile})
    if (s == to_string(k)) return k;
  if (s == "none") return ArrivalKind::kStationary;
  return std::nullopt;
}

inline std::optional<ArrivalSpec> read_arrivals(Reader& r, const Json& j, const std::string& path) {
  if (!r.object(j, path)) return std::nullopt;
  r.unknown_keys(j, path, {"kind", "lambda", "kappa", "kappa_aux", "gamma", "delta", "sigma_hat", "path", "arms"});
  ArrivalSpec s;
  const auto kind = r.string(j, "kind", path, true);
  if (!kind) return std::nullopt;
  const auto k = arrival_kind_from_string(*kind);
  if (!k) {
    r.errors.push_back(path + ".kind: unknown arrival kind '" + *kind + "'");
    return std::nullopt;
  }
  s.kind = *k;
  if (*kind == "none") s.lambda = 0.0;
  if (auto v = r.number(j, "lambda", path, false)) s.lambda = v;
  s.kappa = r.number(j, "kappa", path, false);
  s.kappa_aux = r.number(j, "kappa_aux", path, false);
  s.gamma = r.number(j, "gamma", path, false);
  s.delta = r.number(j, "delta", path, false);
  s.sigma_hat = r.number(j, "sigma_hat", path, false);
  if (auto p = r.string(j, "path", path, false)) s.path = *p;
  if (j.contains("arms")) {
    const auto& a = j.at("arms");
    bool ok = a.is_array();
    if (ok)
      for (const auto& x : a) ok = ok && x.is_number_unsigned();
    if (!ok) {
      r.errors.push_back(path + ".arms: expected an array of arm indices");
    } else {
      for (const auto& x : a) s.arms.push_back(x.get<std::size_t>());
    }
  }
  const auto before = r.errors.size();
  r.add(s.problems(path));
  return r.errors.size() == before ? std::optional<ArrivalSpec>(s) : std::nullopt;
}

// In replay mode alpha_bar may be left out and is then taken from each case.
inline std::optional<PolicyConfig> read_policy(Reader& r, const Json& j, const std::string& path,
                                               bool allow_arrivals, bool replay = false) {
  if (!r.object(j, path)) return std::nullopt;
  if (allow_arrivals)
    r.unknown_keys(j, path, {"kind", "c", "delta", "alpha_bar", "alpha_low", "label", "arrivals"});
  else
    r.unknown_keys(j, path, {"kind", "c", "delta", "alpha_bar", "alpha_low", "label"});
  PolicyConfig p;
  const auto kind = r.string(j, "kind", path, true);
  if (!kind) return std::nullopt;
  const auto k = policy_kind_from_string(*kind);
  if (!k) {
    r.errors.push_back(path + ".kind: unknown policy kind '" + *kind + "'");
    return std::nullopt;
  }
  p.kind = *k;
  if (auto c = r.number(j, "c", path, false)) p.c = *c;
  p.delta = r.number(j, "delta", path, false);
  p.alpha_bar = r.number(j, "alpha_bar", path, false);
  if (auto a = r.number(j, "alpha_low", path, false)) p.alpha_low = *a;
  if (auto l = r.string(j, "label", path, false)) p.label = *l;
  const auto before = r.errors.size();
  PolicyConfig probe = p;
  if (replay && !probe.alpha_bar) probe.alpha_bar = 1.0;
  r.add(probe.problems(path));
  return r.errors.size() == before ? std::optional<PolicyConfig>(p) : std::nullopt;
}

}  // namespace detail

// One simulated curve: a policy under an arrival process.
struct Series {
  PolicyConfig policy;
  ArrivalSpec arrivals;
};

struct ExperimentConfig {
  ProblemInstance instance;
  std::size_t horizon = 0;
  std::vector<Series> series;
  std::size_t n_reps = 1;
  std::optional<std::uint64_t> seed;
  bool regenerate_H = true;
  std::size_t trajectory_stride = 1;
  bool write_trajectory = true;
  std::optional<std::size_t> threads;
  std::string out_dir = ".";
  Json source;  // the validated document
};

// Validates a simulate document, reporting every problem at once.
inline ExperimentConfig parse_config(const Json& doc) {
  detail::Reader r;
  ExperimentConfig cfg;
  if (!doc.is_object()) throw ValidationError({"config: expected a JSON object"});
  r.unknown_keys(doc, "config", {"command", "description", "instance", "horizon", "arrivals", "policies", "n_reps",
                                 "seed", "regenerate_H", "trajectory_stride", "write_trajectory", "threads", "output"});
  if (doc.contains("command") && doc.at("command") != "simulate")
    r.errors.push_back("config.command: expected \"simulate\"");

  // instance
  if (!doc.contains("instance")) {
    r.errors.push_back("config.instance: required");
  } else if (r.object(doc.at("instance"), "instance")) {
    const auto& j = doc.at("instance");
    r.unknown_keys(j, "instance", {"mu", "sigma", "sigma_hat", "y", "alpha", "reward_family", "aux_family",
                                   "aux_equals_reward"});
    auto& inst = cfg.instance;
    const auto mu = r.numbers(j, "mu", "instance", true);
    const auto sigma = r.number(j, "sigma", "instance", true);
    const bool same = r.boolean(j, "aux_equals_reward", "instance").value_or(false);
    auto family = [&](const char* key, Family def) {
      const auto s = r.string(j, key, "instance", false);
      if (!s) return def;
      const auto f = detail::family_from_string(*s);
      if (!f) r.errors.push_back(std::string("instance.") + key + ": unknown family '" + *s + "'");
      return f.value_or(def);
    };
    inst.reward_family = family("reward_family", Family::kGaussian);
    if (same) {
      for (const char* k : {"y", "alpha", "sigma_hat", "aux_family"})
        if (j.contains(k))
          r.errors.push_back(std::string("instance.") + k + ": not allowed together with aux_equals_reward");
      if (mu && sigma) {
        const auto fam = inst.reward_family;
        inst = ProblemInstance::aux_equals_reward(*mu, *sigma, fam);
      }
    } else {
      const auto y = r.numbers(j, "y", "instance", true);
      const auto alpha = r.numbers(j, "alpha", "instance", true);
      const auto sh = r.number(j, "sigma_hat", "instance", true);
      inst.aux_family = family("aux_family", Family::kGaussian);
      if (mu) inst.mu = *mu;
      if (sigma) inst.sigma = *sigma;
      if (y) inst.y = *y;
      if (alpha) inst.alpha = *alpha;
      if (sh) inst.sigma_hat = *sh;
    }
    if (mu && sigma) r.add(inst.problems());
  }

  if (auto h = r.integer(doc, "horizon", "config", true)) {
    if (*h < 1) r.errors.push_back("config.horizon: must be >= 1");
    else cfg.horizon = static_cast<std::size_t>(*h);
  }
  if (auto n = r.integer(doc, "n_reps", "config", true)) {
    if (*n < 1) r.errors.push_back("config.n_reps: must be >= 1");
    else cfg.n_reps = static_cast<std::size_t>(*n);
  }
  cfg.seed = r.seed(doc, "seed", "config");
  cfg.regenerate_H = r.boolean(doc, "regenerate_H", "config").value_or(true);
  cfg.write_trajectory = r.boolean(doc, "write_trajectory", "config").value_or(true);
  if (auto s = r.integer(doc, "trajectory_stride", "config", false)) {
    if (*s < 1) r.errors.push_back("config.trajectory_stride: must be >= 1");
    else cfg.trajectory_stride = static_cast<std::size_t>(*s);
  }
  if (auto t = r.integer(doc, "threads", "config", false)) {
    if (*t < 0) r.errors.push_back("config.threads: must be >= 0");
    else if (*t > 0) cfg.threads = static_cast<std::size_t>(*t);
  }
  if (doc.contains("output") && r.object(doc.at("output"), "output")) {
    r.unknown_keys(doc.at("output"), "output", {"dir"});
    if (auto d = r.string(doc.at("output"), "dir", "output", false)) cfg.out_dir = *d;
  }

  std::optional<ArrivalSpec> default_arrivals;
  if (doc.contains("arrivals")) default_arrivals = detail::read_arrivals(r, doc.at("arrivals"), "arrivals");

  if (!doc.contains("policies")) {
    r.errors.push_back("config.policies: required");
  } else if (!doc.at("policies").is_array() || doc.at("policies").empty()) {
    r.errors.push_back("config.policies: expected a non-empty array");
  } else {
    std::set<std::string> labels;
    const auto& arr = doc.at("policies");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "policies[" + std::to_string(i) + "]";
      const auto p = detail::read_policy(r, arr[i], path, true);
      std::optional<ArrivalSpec> a;
      if (arr[i].is_object() && arr[i].contains("arrivals")) {
        a = detail::read_arrivals(r, arr[i].at("arrivals"), path + ".arrivals");
      } else if (doc.contains("arrivals")) {
        a = default_arrivals;
      } else {
        ArrivalSpec none;
        none.lambda = 0.0;
        a = none;
      }
      if (!p || !a) continue;
      if (!labels.insert(p->name()).second)
        r.errors.push_back(path + ".label: duplicate series label '" + p->name() + "'");
      for (auto k : a->arms)
        if (k >= cfg.instance.arms())
          r.errors.push_back(path + ".arrivals.arms: arm index " + std::to_string(k) + " out of range");
      cfg.series.push_back({*p, *a});
    }
  }
  if (!r.errors.empty()) throw ValidationError(r.errors);
  cfg.source = doc;
  return cfg;
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(what + ": invalid JSON: " + e.what(), 0, e.byte);
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// Replay experiment: a corpus (file or synthetic) scored by several policies.
struct ReplayConfig {
  std::optional<std::string> corpus_path;
  SynthParams synth;
  std::size_t n_cases = 100;
  std::uint64_t corpus_seed = 1;
  std::vector<PolicyConfig> policies;
  std::size_t n_reps = 200;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out_dir = ".";
  Json source;
};

inline ReplayConfig parse_replay_config(const Json& doc) {
  detail::Reader r;
  ReplayConfig cfg;
  if (!doc.is_object()) throw ValidationError({"config: expected a JSON object"});
  r.unknown_keys(doc, "config", {"command", "description", "corpus", "synth", "policies", "n_reps", "seed",
                                 "threads", "output"});
  if (doc.contains("command") && doc.at("command") != "replay") r.errors.push_back("config.command: expected \"replay\"");
  if (auto p = r.string(doc, "corpus", "config", false)) cfg.corpus_path = *p;
  if (doc.contains("synth") && r.object(doc.at("synth"), "synth")) {
    const auto& s = doc.at("synth");
    r.unknown_keys(s, "synth", {"n_cases", "seed", "T", "ctr", "cvr", "alpha", "delta", "misspecification",
                                "intensity", "alpha_bar_factor"});
    if (auto n = r.integer(s, "n_cases", "synth", false)) {
      if (*n < 1) r.errors.push_back("synth.n_cases: must be >= 1");
      else cfg.n_cases = static_cast<std::size_t>(*n);
    }
    if (auto v = r.seed(s, "seed", "synth")) cfg.corpus_seed = *v;
    if (auto v = r.integer(s, "T", "synth", false)) {
      if (*v < 1) r.errors.push_back("synth.T: must be >= 1");
      else cfg.synth.T = static_cast<std::size_t>(*v);
    }
    auto range = [&](const char* key, double& lo, double& hi) {
      if (auto v = r.numbers(s, key, "synth", false)) {
        if (v->size() != 2) r.errors.push_back(std::string("synth.") + key + ": expected [min, max]");
        else {
          lo = (*v)[0];
          hi = (*v)[1];
        }
      }
    };
    range("ctr", cfg.synth.ctr_min, cfg.synth.ctr_max);
    range("cvr", cfg.synth.cvr_min, cfg.synth.cvr_max);
    range("alpha", cfg.synth.alpha_min, cfg.synth.alpha_max);
    range("delta", cfg.synth.delta_min, cfg.synth.delta_max);
    if (auto v = r.number(s, "misspecification", "synth", false)) cfg.synth.misspecification = *v;
    if (auto v = r.number(s, "intensity", "synth", false)) cfg.synth.intensity = *v;
    if (auto v = r.number(s, "alpha_bar_factor", "synth", false)) cfg.synth.alpha_bar_factor = *v;
    r.add(cfg.synth.problems());
  }
  if (!cfg.corpus_path && !doc.contains("synth")) r.errors.push_back("config: one of corpus or synth is required");
  if (cfg.corpus_path && doc.contains("synth")) r.errors.push_back("config: corpus and synth are mutually exclusive");
  if (auto n = r.integer(doc, "n_reps", "config", true)) {
    if (*n < 1) r.errors.push_back("config.n_reps: must be >= 1");
    else cfg.n_reps = static_cast<std::size_t>(*n);
  }
  cfg.seed = r.seed(doc, "seed", "config");
  if (auto t = r.integer(doc, "threads", "config", false)) {
    if (*t < 0) r.errors.push_back("config.threads: must be >= 0");
    else if (*t > 0) cfg.threads = static_cast<std::size_t>(*t);
  }
  if (doc.contains("output") && r.object(doc.at("output"), "output")) {
    r.unknown_keys(doc.at("output"), "output", {"dir"});
    if (auto d = r.string(doc.at("output"), "dir", "output", false)) cfg.out_dir = *d;
  }
  if (!doc.contains("policies") || !doc.at("policies").is_array() || doc.at("policies").empty()) {
    r.errors.push_back("config.policies: expected a non-empty array");
  } else {
    const auto& arr = doc.at("policies");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "policies[" + std::to_string(i) + "]";
      auto p = detail::read_policy(r, arr[i], path, false, true);
      if (!p) continue;
      if (!replay_supported(p->kind))
        r.errors.push_back(path + ".kind: " + to_string(p->kind) + " is not supported in replay");
      if (!labels.insert(p->name()).second)
        r.errors.push_back(path + ".label: duplicate label '" + p->name() + "'");
      cfg.policies.push_back(*p);
    }
  }
  if (!r.errors.empty()) throw ValidationError(r.errors);
  cfg.source = doc;
  return cfg;
}

// Named experiment documents.
inline const std::map<std::string, Json>& presets() {
  static const std::map<std::string, Json> table = [] {
    std::map<std::string, Json> m;
    const Json fig_instance = {{"mu", {0.7, 0.5, 0.5}}, {"sigma", 0.5}, {"aux_equals_reward", true}};
    const double T = 10000.0;
    auto stationary = [](double lambda) { return Json{{"kind", "stationary"}, {"lambda", lambda}}; };
    auto diminishing = [](double kappa) { return Json{{"kind", "diminishing-bernoulli"}, {"kappa_aux", kappa}}; };
    auto fmt = [](double v) {
      std::ostringstream s;
      s.imbue(std::locale::classic());
      s << v;
      return s.str();
    };

    {
      Json pol = Json::array();
      pol.push_back({{"kind", "UCB1"}, {"c", 1.0}, {"label", "UCB1"}});
      for (double l : {0.001, 0.01, 0.05})
        pol.push_back({{"kind", "aUCB1"}, {"c", 1.0}, {"label", "aUCB1 lambda=" + fmt(l)}, {"arrivals", stationary(l)}});
      pol.push_back({{"kind", "TS"}, {"c", 0.5}, {"label", "TS"}});
      for (double l : {0.001, 0.01, 0.05})
        pol.push_back({{"kind", "aTS"}, {"c", 0.5}, {"label", "aTS lambda=" + fmt(l)}, {"arrivals", stationary(l)}});
      m["fig2"] = {{"command", "simulate"},
                   {"description", "UCB1/aUCB1 and TS/aTS under stationary arrivals at three rates"},
                   {"instance", fig_instance},
                   {"horizon", 10000},
                   {"n_reps", 200},
                   {"regenerate_H", true},
                   {"trajectory_stride", 100},
                   {"policies", pol}};
    }

    auto comparison = [] {
      return Json::array({{{"kind", "EG"}, {"c", 1.0}, {"delta", 0.2}},
                          {{"kind", "nEG"}, {"c", 1.0}, {"delta", 0.2}},
                          {{"kind", "aEG"}, {"c", 1.0}, {"delta", 0.2}},
                          {{"kind", "UCB1"}, {"c", 1.0}},
                          {{"kind", "aUCB1"}, {"c", 1.0}},
                          {{"kind", "TS"}, {"c", 0.5}},
                          {{"kind", "aTS"}, {"c", 0.5}}});
    };
    auto main_doc = [&](const Json& arrivals, const std::string& what) {
      return Json{{"command", "simulate"},
                  {"description", "policy comparison, " + what},
                  {"instance", fig_instance},
                  {"horizon", 10000},
                  {"n_reps", 400},
                  {"regenerate_H", true},
                  {"trajectory_stride", 100},
                  {"arrivals", arrivals},
                  {"policies", comparison()}};
    };
    for (int n : {500, 100, 10})
      m["appF-stationary-" + std::to_string(n)] =
          main_doc(stationary(n / T), "stationary arrivals with lambda = " + std::to_string(n) + "/T");
    for (int k : {4, 2, 1})
      m["appF-diminishing-" + std::to_string(k)] =
          main_doc(diminishing(k), "diminishing arrivals with kappa_aux = " + std::to_string(k));

    auto tuning_doc = [&](const Json& arrivals, const std::string& what) {
      Json pol = Json::array();
      for (double c : {0.4, 1.0, 1.6}) {
        pol.push_back({{"kind", "aEG"}, {"c", c}, {"delta", 0.2}, {"label", "aEG c=" + fmt(c)}});
        pol.push_back({{"kind", "aUCB1"}, {"c", c}, {"label", "aUCB1 c=" + fmt(c)}});
      }
      for (double c : {0.1, 0.5, 0.7}) pol.push_back({{"kind", "aTS"}, {"c", c}, {"label", "aTS c=" + fmt(c)}});
      return Json{{"command", "simulate"},
                  {"description", "tuning-constant sensitivity, " + what},
                  {"instance", fig_instance},
                  {"horizon", 10000},
                  {"n_reps", 400},
                  {"regenerate_H", true},
                  {"trajectory_stride", 100},
                  {"arrivals", arrivals},
                  {"policies", pol}};
    };
    auto gap_doc = [&](const Json& arrivals, const std::string& what) {
      Json pol = Json::array();
      for (double d : {0.05, 0.2, 0.35})
        pol.push_back({{"kind", "aEG"}, {"c", 1.0}, {"delta", d}, {"label", "aEG delta=" + fmt(d)}});
      return Json{{"command", "simulate"},
                  {"description", "misspecified gap input for aEG, " + what},
                  {"instance", fig_instance},
                  {"horizon", 10000},
                  {"n_reps", 400},
                  {"regenerate_H", true},
                  {"trajectory_stride", 100},
                  {"arrivals", arrivals},
                  {"policies", pol}};
    };
    for (int n : {500, 10}) {
      m["appF-tuning-stationary-" + std::to_string(n)] =
          tuning_doc(stationary(n / T), "stationary lambda = " + std::to_string(n) + "/T");
      m["appF-gap-stationary-" + std::to_string(n)] =
          gap_doc(stationary(n / T), "stationary lambda = " + std::to_string(n) + "/T");
    }
    for (int k : {4, 1})
      m["appF-tuning-diminishing-" + std::to_string(k)] =
          tuning_doc(diminishing(k), "diminishing kappa_aux = " + std::to_string(k));
    for (int k : {8, 1})
      m["appF-gap-diminishing-" + std::to_string(k)] =
          gap_doc(diminishing(k), "diminishing kappa_aux = " + std::to_string(k));

    m["appE-replay"] = {{"command", "replay"},
                        {"description", "one-armed replay on a synthetic article-day corpus"},
                        {"synth", {{"n_cases", 100}, {"seed", 1}, {"T", 2000}, {"intensity", 1.0},
                                   {"misspecification", 0.0}}},
                        {"n_reps", 200},
                        {"policies", Json::array({{{"kind", "UCB1"}, {"c", 0.05}},
                                                  {{"kind", "aUCB1"}, {"c", 0.05}},
                                                  {{"kind", "2-UCBs"}, {"c", 0.05}}})}};
    return m;
  }();
  return table;
}

inline const Json& preset(const std::string& name) {
  const auto& t = presets();
  const auto it = t.find(name);
  if (it == t.end()) throw ConfigError("unknown preset '" + name + "'");
  return it->second;
}

}  // namespace auxbandit
