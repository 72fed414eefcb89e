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
#include <charconv>
#include <cmath>
#include <cstring>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "auxbandit/arrivals.hpp"
#include "auxbandit/bounds.hpp"
#include "auxbandit/config.hpp"
#include "auxbandit/errors.hpp"
#include "auxbandit/replay.hpp"
#include "auxbandit/sim.hpp"

namespace auxbandit {

// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;

// Shortest round-trip decimal form; independent of the global locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

// Flag, then AUXBANDIT_THREADS, then the config value, then the hardware.
inline std::size_t resolve_threads(std::optional<std::size_t> flag, std::optional<std::size_t> from_config) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("AUXBANDIT_THREADS"); env && *env) {
    std::size_t v = 0;
    const auto r = std::from_chars(env, env + std::strlen(env), v);
    if (r.ec != std::errc() || *r.ptr != '\0' || v == 0)
      throw ConfigError(std::string("AUXBANDIT_THREADS must be a positive integer, got '") + env + "'");
    return v;
  }
  if (from_config) return *from_config;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

inline void write_manifest(const std::filesystem::path& dir, const std::string& command, std::uint64_t seed,
                           const Json& config) {
  Json m;
  m["artifact"] = "auxbandit";
  m["artifact_version"] = kArtifactVersion;
  m["command"] = command;
  m["seed"] = seed;
  m["config"] = config;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in '" + dir.string() + "'");
  out << m.dump(2) << '\n';
}

struct SimulateRequest {
  Json doc;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> out_dir;
};

// Runs a validated simulate document; writes trajectory.csv, summary.csv and
// manifest.json into the output directory. Returns the summaries.
inline std::vector<BatchSummary> execute_simulate(const SimulateRequest& req, std::ostream& log) {
  Json doc = req.doc;
  ExperimentConfig cfg = parse_config(doc);
  const std::uint64_t seed = req.seed.value_or(cfg.seed.value_or(kDefaultSeed));
  doc["seed"] = seed;
  const std::size_t threads = resolve_threads(req.threads, cfg.threads);
  const std::filesystem::path dir = req.out_dir.value_or(cfg.out_dir);
  std::filesystem::create_directories(dir);

  std::ofstream traj;
  if (cfg.write_trajectory) {
    traj.open(dir / "trajectory.csv", std::ios::binary);
    if (!traj) throw std::runtime_error("cannot write trajectory.csv");
    traj << "policy,replication,t,arm,cum_regret\n";
  }
  std::ofstream summ(dir / "summary.csv", std::ios::binary);
  if (!summ) throw std::runtime_error("cannot write summary.csv");
  summ << "policy,t,mean,stderr,q05,q25,q50,q75,q95\n";

  const std::size_t T = cfg.horizon;
  const std::size_t stride = cfg.trajectory_stride;
  auto sampled = [&](std::size_t t1) { return t1 % stride == 0 || t1 == T; };

  std::vector<BatchSummary> out;
  Warnings warnings;
  for (const auto& s : cfg.series) {
    const std::string label = csv_field(s.policy.name());
    for (const auto& w : s.policy.warnings(cfg.instance.sigma)) warnings.push_back(w);
    ReplicationOptions opt;
    opt.threads = threads;
    opt.warnings = &warnings;
    // Cumulative regret per sampled time, one column per replication.
    std::vector<std::size_t> times;
    for (std::size_t t = 0; t < T; ++t)
      if (sampled(t + 1)) times.push_back(t);
    std::vector<std::vector<double>> at_time(times.size());
    opt.on_episode = [&](std::size_t, std::size_t rep, const EpisodeResult& e) {
      for (std::size_t i = 0; i < times.size(); ++i) at_time[i].push_back(e.cum_regret[times[i]]);
      if (cfg.write_trajectory) {
        std::string buf;
        for (std::size_t t = 0; t < T; ++t) {
          if (!sampled(t + 1)) continue;
          buf += label;
          buf += ',';
          buf += std::to_string(rep);
          buf += ',';
          buf += std::to_string(t + 1);
          buf += ',';
          buf += std::to_string(e.arms[t]);
          buf += ',';
          buf += format_number(e.cum_regret[t]);
          buf += '\n';
        }
        traj << buf;
      }
    };
    auto res = run_replications(cfg.instance, s.arrivals, T, {s.policy}, cfg.n_reps, seed, cfg.regenerate_H, opt);
    BatchSummary b = std::move(res.front());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const std::size_t t = times[i];
      auto& col = at_time[i];
      std::sort(col.begin(), col.end());
      summ << label << ',' << (t + 1) << ',' << format_number(b.mean[t]) << ',' << format_number(b.std_error[t]);
      for (int pct : kQuantilePercents) summ << ',' << format_number(nearest_rank(col, pct));
      summ << '\n';
    }
    log << s.policy.name() << ": final regret " << format_number(b.final_mean()) << " +/- "
        << format_number(b.final_std_error()) << " (" << b.n_reps << " reps)\n";
    out.push_back(std::move(b));
  }
  for (const auto& w : warnings) log << "warning: " << w << '\n';
  write_manifest(dir, "simulate", seed, doc);
  return out;
}

struct ReplayRequest {
  Json doc;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> out_dir;
  std::optional<std::string> write_corpus;
};

struct ReplayReport {
  std::vector<std::string> labels;
  std::vector<CaseResult> cases;
  std::vector<double> mean_ri;  // NaN when no case has an RI
  std::vector<double> no_harm;  // NaN without a UCB1 baseline
};

inline ReplayReport execute_replay(const ReplayRequest& req, std::ostream& log) {
  Json doc = req.doc;
  ReplayConfig cfg = parse_replay_config(doc);
  const std::uint64_t seed = req.seed.value_or(cfg.seed.value_or(kDefaultSeed));
  doc["seed"] = seed;
  const std::size_t threads = resolve_threads(req.threads, cfg.threads);
  const std::filesystem::path dir = req.out_dir.value_or(cfg.out_dir);
  std::filesystem::create_directories(dir);

  const auto cases = cfg.corpus_path ? load_corpus(*cfg.corpus_path)
                                     : synth_article_days(cfg.n_cases, cfg.synth, cfg.corpus_seed);
  if (cases.empty()) throw ConfigError("corpus has no cases");
  if (req.write_corpus) {
    std::ofstream c(*req.write_corpus, std::ios::binary);
    if (!c) throw std::runtime_error("cannot write corpus '" + *req.write_corpus + "'");
    write_corpus(c, cases);
  }
  ReplayReport rep;
  rep.cases = run_replay(cases, cfg.policies, cfg.n_reps, seed, threads);
  for (const auto& p : cfg.policies) rep.labels.push_back(p.name());

  std::ofstream res(dir / "results.csv", std::ios::binary);
  if (!res) throw std::runtime_error("cannot write results.csv");
  res << "case_id,policy,mean_regret,RI,AIE,RMM\n";
  for (const auto& c : rep.cases)
    for (std::size_t j = 0; j < rep.labels.size(); ++j)
      res << csv_field(c.case_id) << ',' << csv_field(rep.labels[j]) << ',' << format_number(c.mean_regret[j]) << ','
          << (c.ri[j] ? format_number(*c.ri[j]) : "") << ',' << format_number(c.aie) << ',' << format_number(c.rmm)
          << '\n';

  std::optional<std::size_t> base;
  for (std::size_t j = 0; j < cfg.policies.size(); ++j)
    if (cfg.policies[j].kind == PolicyKind::kUCB1) {
      base = j;
      break;
    }
  Json summary = Json::array();
  for (std::size_t j = 0; j < rep.labels.size(); ++j) {
    double sum = 0.0;
    std::size_t n = 0;
    std::vector<RegretPair> pairs;
    for (const auto& c : rep.cases) {
      if (c.ri[j]) {
        sum += *c.ri[j];
        ++n;
      }
      if (base) pairs.push_back({c.mean_regret[j], c.mean_regret[*base]});
    }
    rep.mean_ri.push_back(n ? sum / static_cast<double>(n) : std::nan(""));
    rep.no_harm.push_back(base ? no_harm_rate(pairs) : std::nan(""));
    Json s = {{"policy", rep.labels[j]}, {"cases_with_ri", n}};
    s["mean_ri"] = n ? Json(rep.mean_ri.back()) : Json(nullptr);
    s["no_harm"] = base ? Json(rep.no_harm.back()) : Json(nullptr);
    summary.push_back(s);
  }
  log << summary.dump(2) << '\n';
  write_manifest(dir, "replay", seed, doc);
  return rep;
}

namespace detail {

inline Json load_document(const std::optional<std::string>& config, const std::optional<std::string>& preset_name,
                          const std::optional<std::string>& manifest, const std::string& command,
                          std::optional<std::uint64_t>& manifest_seed) {
  const int given = int(config.has_value()) + int(preset_name.has_value()) + int(manifest.has_value());
  if (given != 1) throw ConfigError("exactly one of --config, --preset or --manifest is required");
  if (preset_name) {
    Json doc = preset(*preset_name);
    if (doc.value("command", command) != command)
      throw ConfigError("preset '" + *preset_name + "' is for the " + doc.value("command", "") + " command");
    return doc;
  }
  if (manifest) {
    const Json m = load_json_file(*manifest);
    if (!m.is_object() || !m.contains("config") || !m.contains("seed"))
      throw ConfigError("manifest '" + *manifest + "' lacks config or seed");
    if (m.value("command", command) != command)
      throw ConfigError("manifest '" + *manifest + "' was written by the " + m.value("command", "") + " command");
    manifest_seed = m.at("seed").get<std::uint64_t>();
    return m.at("config");
  }
  const std::string& c = *config;
  if (!c.empty() && (c.front() == '{' || c.front() == ' ')) return parse_json_text(c, "inline config");
  return load_json_file(c);
}

inline double need(const std::optional<double>& v, const char* flag) {
  if (!v) throw ConfigError(std::string("--") + flag + " is required for this operation");
  return *v;
}

}  // namespace detail

// Entry point of the command-line tool.
inline int run_command(int argc, const char* const* argv, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  CLI::App app{"Bandit policies with auxiliary information arrivals", "auxbandit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kArtifactVersion));

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run replicated simulations and write trajectory/summary CSVs");
  std::optional<std::string> s_config, s_preset, s_manifest, s_out;
  std::optional<std::uint64_t> s_seed;
  std::optional<std::size_t> s_threads, s_reps, s_stride;
  sim->add_option("--config", s_config, "Config file, or an inline JSON object");
  sim->add_option("--preset", s_preset, "Named preset (see the presets command)");
  sim->add_option("--manifest", s_manifest, "Rerun from a manifest.json written by an earlier run");
  sim->add_option("--seed", s_seed, "Base seed (overrides the config)");
  sim->add_option("--threads", s_threads, "Worker threads (overrides AUXBANDIT_THREADS)");
  sim->add_option("--reps", s_reps, "Override the number of replications");
  sim->add_option("--stride", s_stride, "Override the trajectory sampling stride");
  sim->add_option("--out", s_out, "Output directory");

  // replay
  auto* rep = app.add_subcommand("replay", "Score policies on an article-day corpus");
  std::optional<std::string> r_config, r_preset, r_manifest, r_out, r_corpus, r_write;
  std::optional<std::uint64_t> r_seed;
  std::optional<std::size_t> r_threads, r_reps, r_cases;
  rep->add_option("--config", r_config, "Config file, or an inline JSON object");
  rep->add_option("--preset", r_preset, "Named preset");
  rep->add_option("--manifest", r_manifest, "Rerun from a manifest.json");
  rep->add_option("--corpus", r_corpus, "JSON-lines corpus (replaces the synthetic generator)");
  rep->add_option("--write-corpus", r_write, "Write the corpus that was scored");
  rep->add_option("--seed", r_seed, "Base seed");
  rep->add_option("--threads", r_threads, "Worker threads");
  rep->add_option("--reps", r_reps, "Override the number of replications");
  rep->add_option("--cases", r_cases, "Override the number of synthetic cases");
  rep->add_option("--out", r_out, "Output directory");

  // bound
  auto* bnd = app.add_subcommand("bound", "Evaluate a regret bound or rate functional on a matrix");
  std::string b_op, b_matrix;
  std::size_t b_row = 0, b_K = 0;
  std::optional<double> b_delta, b_alpha, b_lambda, b_kappa, b_T, b_delta_k;
  double b_sigma = 0.5, b_sigma_hat = 0.5, b_c = 1.0, b_c_tilde = 1.0, b_C = 0.0, b_C5 = 1.0, b_C6 = 1.0, b_C7 = 1.0;
  std::vector<double> b_gaps;
  bnd->add_option("--op", b_op, "aie | logsumexp | minimax | aucb1 | corollary-stationary | corollary-diminishing | unknown-mapping")
      ->required()
      ->check(CLI::IsMember({"aie", "logsumexp", "minimax", "aucb1", "corollary-stationary",
                             "corollary-diminishing", "unknown-mapping"}));
  bnd->add_option("--matrix", b_matrix, "Arrival matrix CSV");
  bnd->add_option("--row", b_row, "Matrix row (0-based) for row-wise operations");
  bnd->add_option("--delta", b_delta, "Gap");
  bnd->add_option("--gaps", b_gaps, "Per-arm gaps")->delimiter(',');
  bnd->add_option("--sigma", b_sigma, "Reward scale");
  bnd->add_option("--sigma-hat", b_sigma_hat, "Auxiliary scale");
  bnd->add_option("--alpha", b_alpha, "Mapping coefficient (aie)");
  bnd->add_option("--c", b_c, "Rate or tuning constant");
  bnd->add_option("--c-tilde", b_c_tilde, "AIE scaling constant");
  bnd->add_option("--lambda", b_lambda, "Stationary arrival rate");
  bnd->add_option("--kappa", b_kappa, "Diminishing arrival constant");
  bnd->add_option("--T", b_T, "Horizon (corollary bounds)");
  bnd->add_option("--C", b_C, "Caller constant (corollary bounds)");
  bnd->add_option("--K", b_K, "Number of arms (unknown-mapping)");
  bnd->add_option("--delta-k", b_delta_k, "mu* - alpha_bar y_k (unknown-mapping)");
  bnd->add_option("--C5", b_C5, "Constant");
  bnd->add_option("--C6", b_C6, "Constant");
  bnd->add_option("--C7", b_C7, "Constant");

  // gen-arrivals
  auto* gen = app.add_subcommand("gen-arrivals", "Generate an arrival matrix as CSV");
  std::string g_kind;
  std::size_t g_K = 0, g_T = 0;
  std::optional<double> g_lambda, g_gamma, g_kappa, g_kappa_aux, g_delta, g_sigma_hat;
  std::uint64_t g_seed = kDefaultSeed;
  std::optional<std::string> g_out;
  gen->add_option("--kind", g_kind, "stationary | diminishing-bernoulli | diminishing-deterministic | gamma-family")
      ->required();
  gen->add_option("--K", g_K, "Arms")->required();
  gen->add_option("--T", g_T, "Horizon")->required();
  gen->add_option("--lambda", g_lambda, "Rate");
  gen->add_option("--gamma", g_gamma, "Concentration exponent");
  gen->add_option("--kappa", g_kappa, "Deterministic diminishing constant");
  gen->add_option("--kappa-aux", g_kappa_aux, "Bernoulli diminishing numerator");
  gen->add_option("--delta", g_delta, "Gap (deterministic diminishing)");
  gen->add_option("--sigma-hat", g_sigma_hat, "Auxiliary scale (deterministic diminishing)");
  gen->add_option("--seed", g_seed, "Seed");
  gen->add_option("--out", g_out, "Output file (default: standard output)");

  // presets
  auto* pre = app.add_subcommand("presets", "List named presets with their parameters");
  std::optional<std::string> p_name;
  pre->add_option("--name", p_name, "Show one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (sim->parsed()) {
      SimulateRequest req;
      std::optional<std::uint64_t> mseed;
      req.doc = detail::load_document(s_config, s_preset, s_manifest, "simulate", mseed);
      if (mseed) req.doc["seed"] = *mseed;
      if (s_reps) req.doc["n_reps"] = *s_reps;
      if (s_stride) req.doc["trajectory_stride"] = *s_stride;
      req.seed = s_seed;
      req.threads = s_threads;
      req.out_dir = s_out;
      execute_simulate(req, out);
    } else if (rep->parsed()) {
      ReplayRequest req;
      std::optional<std::uint64_t> mseed;
      req.doc = detail::load_document(r_config, r_preset, r_manifest, "replay", mseed);
      if (mseed) req.doc["seed"] = *mseed;
      if (r_reps) req.doc["n_reps"] = *r_reps;
      if (r_corpus) {
        req.doc.erase("synth");
        req.doc["corpus"] = *r_corpus;
      }
      if (r_cases) {
        if (!req.doc.contains("synth")) throw ConfigError("--cases applies to synthetic corpora only");
        req.doc["synth"]["n_cases"] = *r_cases;
      }
      req.seed = r_seed;
      req.threads = r_threads;
      req.out_dir = r_out;
      req.write_corpus = r_write;
      execute_replay(req, out);
    } else if (bnd->parsed()) {
      Json res = {{"op", b_op}};
      if (b_op.rfind("corollary", 0) == 0) {
        CorollaryParams p;
        p.c = b_c;
        p.delta = detail::need(b_delta, "delta");
        p.gaps = b_gaps.empty() ? std::vector<double>{p.delta} : b_gaps;
        p.sigma = b_sigma;
        p.sigma_hat = b_sigma_hat;
        p.T = detail::need(b_T, "T");
        p.C = b_C;
        if (b_op == "corollary-stationary") {
          p.lambda = detail::need(b_lambda, "lambda");
          res["value"] = corollary_bound(CorollaryKind::kStationaryTS, p);
        } else {
          p.kappa = detail::need(b_kappa, "kappa");
          res["value"] = corollary_bound(CorollaryKind::kDiminishingTS, p);
        }
      } else {
        if (b_matrix.empty()) throw ConfigError("--matrix is required for this operation");
        const ArrivalMatrix H = load_matrix(b_matrix);
        if (b_row >= H.arms()) throw ConfigError("--row out of range");
        if (b_op == "aie") {
          res["value"] = aie_index(H.row(b_row), H.horizon(), detail::need(b_delta, "delta"), b_sigma_hat,
                                   b_alpha.value_or(1.0), b_c_tilde);
        } else if (b_op == "logsumexp") {
          res["value"] = logsumexp_rate(H.row(b_row), b_c);
        } else if (b_op == "minimax") {
          const auto lb = minimax_lower_bound(H, detail::need(b_delta, "delta"), b_sigma, b_sigma_hat);
          res["value"] = lb.value;
          res["vacuous"] = lb.vacuous;
        } else if (b_op == "aucb1") {
          if (b_gaps.size() != H.arms()) throw ConfigError("--gaps needs one value per matrix row");
          res["value"] = aucb1_upper_bound(H, b_gaps, b_sigma, b_sigma_hat, b_c);
        } else {
          const std::size_t K = b_K ? b_K : H.arms();
          res["value"] = unknown_mapping_lower_bound(H.row(b_row), K, detail::need(b_delta, "delta"),
                                                     detail::need(b_delta_k, "delta-k"), {b_C5, b_C6, b_C7});
        }
      }
      out << res.dump() << '\n';
    } else if (gen->parsed()) {
      ArrivalSpec spec;
      const auto kind = detail::arrival_kind_from_string(g_kind);
      if (!kind || *kind == ArrivalKind::kFromFile) throw ConfigError("unknown arrival kind '" + g_kind + "'");
      spec.kind = *kind;
      spec.lambda = g_lambda;
      spec.gamma = g_gamma;
      spec.kappa = g_kappa;
      spec.kappa_aux = g_kappa_aux;
      spec.delta = g_delta;
      spec.sigma_hat = g_sigma_hat;
      const auto problems = spec.problems("gen-arrivals");
      if (!problems.empty()) throw ValidationError(problems);
      if (g_K < 1 || g_T < 1) throw ConfigError("--K and --T must be >= 1");
      Warnings w;
      const auto H = generate(spec, g_K, g_T, g_seed, &w);
      for (const auto& s : w) err << "warning: " << s << '\n';
      if (g_out) {
        save_matrix(H, *g_out);
      } else {
        write_matrix(out, H);
      }
    } else if (pre->parsed()) {
      if (p_name) {
        out << preset(*p_name).dump(2) << '\n';
      } else {
        for (const auto& [name, doc] : presets()) {
          out << "# " << name << " (" << doc.value("command", "") << "): " << doc.value("description", "") << '\n';
          out << doc.dump(2) << '\n';
        }
      }
    }
  } catch (const ValidationError& e) {
    for (const auto& m : e.errors()) err << "error: " << m << '\n';
    return kExitValidation;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace auxbandit
