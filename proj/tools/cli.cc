// Copyright 2026 The offeval Authors.
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
#include "cli.h"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "offeval/debias.h"
#include "offeval/errors.h"
#include "offeval/evaluation.h"
#include "offeval/io.h"
#include "offeval/simworld.h"
#include "report.h"

namespace offeval::tools {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string log;
  std::string at;
  std::vector<std::string> times;
  std::optional<Timestamp> t0;
  std::optional<Timestamp> t1;
  std::vector<std::string> recommend;
  std::size_t k = 5;
  std::string quality = "hit";
  std::string mode = "exhaustive";
  std::optional<std::uint64_t> draws;
  std::optional<std::uint64_t> seed;
  std::string weights;
  std::optional<std::size_t> p;
  std::string out;
  std::string report;
  std::string svg;
  std::string config;
  std::string scenario;
  std::vector<std::string> series;
  int threads = 1;
  OptimizerConfig optimizer;
};

Timestamp ParseTime(const std::string& text, const char* flag) {
  Timestamp t = 0;
  std::size_t used = 0;
  try {
    t = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || t < 0) {
    throw UsageError(std::string(flag) + ": '" + text +
                     "' is not a non-negative integer time");
  }
  return t;
}

// Accepts single times and start:stop:step ranges (stop inclusive).
std::vector<Timestamp> ParseTimes(const std::vector<std::string>& items) {
  std::vector<Timestamp> out;
  for (const auto& item : items) {
    if (item.find(':') == std::string::npos) {
      out.push_back(ParseTime(item, "--at"));
      continue;
    }
    std::vector<std::string> parts;
    std::stringstream ss(item);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw UsageError("--at: range must be start:stop:step");
    const Timestamp start = ParseTime(parts[0], "--at");
    const Timestamp stop = ParseTime(parts[1], "--at");
    const Timestamp step = ParseTime(parts[2], "--at");
    if (step <= 0 || stop < start) throw UsageError("--at: empty range '" + item + "'");
    for (Timestamp t = start; t <= stop; t += step) out.push_back(t);
  }
  return out;
}

QualityKind ToQuality(const std::string& name) {
  return name == "invrank" ? QualityKind::kInverseRank : QualityKind::kHitInTopK;
}

EvalConfig MakeEvalConfig(const Options& o) {
  EvalConfig cfg;
  if (o.mode == "stochastic") {
    if (!o.draws) throw UsageError("--draws is required with --mode stochastic");
    cfg.mode = Stochastic{*o.draws, o.seed.value_or(0)};
  }
  if (!o.weights.empty()) cfg.weights = ReadWeights(o.weights);
  cfg.threads = o.threads;
  return cfg;
}

ConstantRecommender MakeRecommender(const Options& o) {
  if (o.recommend.empty()) throw UsageError("--recommend is required");
  try {
    return ConstantRecommender(o.recommend, o.k);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--recommend: ") + e.what());
  }
}

json FileEntry(const fs::path& path) {
  return {{"path", path.generic_string()}, {"sha256", Sha256File(path)}};
}

// <out>.manifest.json: inputs, parameters, emitted files and their hashes.
// Wall-clock timings go to stderr so that artifacts stay byte-identical.
void WriteManifest(const fs::path& out, const std::string& command,
                   const json& parameters, const std::vector<fs::path>& inputs,
                   const std::vector<fs::path>& outputs) {
  json manifest;
  manifest["tool"] = "offeval";
  manifest["version"] = kVersion;
  manifest["command"] = command;
  manifest["parameters"] = parameters;
  manifest["inputs"] = json::array();
  for (const auto& p : inputs) manifest["inputs"].push_back(FileEntry(p));
  manifest["outputs"] = json::array();
  for (const auto& p : outputs) manifest["outputs"].push_back(FileEntry(p));
  WriteFile(fs::path(out.string() + ".manifest.json"), manifest.dump(2) + "\n");
}

json EvalResultJson(const EvalResult& r) {
  return {{"score", r.score}, {"std_error", r.std_error},
          {"pairs", r.pairs_evaluated}};
}

int RunEval(const Options& o, std::ostream& out) {
  const EvalConfig cfg = MakeEvalConfig(o);
  const ConstantRecommender g = MakeRecommender(o);
  const Timestamp at = ParseTime(o.at, "--at");
  const Snapshot snap = BuildSnapshot(ReadLog(o.log), at);
  const ProbabilityModel model = ProbabilityModel::Uniform(snap);
  json j = EvalResultJson(Evaluate(g, snap, model, ToQuality(o.quality), cfg));
  j["time"] = at;
  j["mode"] = o.mode;
  if (const auto* s = std::get_if<Stochastic>(&cfg.mode)) {
    j["draws"] = s->draws;
    j["seed"] = s->seed;
  }
  out << j.dump() << "\n";
  return kExitOk;
}

int RunTimeline(const Options& o, std::ostream& out) {
  EvalConfig cfg = MakeEvalConfig(o);
  const ConstantRecommender g = MakeRecommender(o);
  const auto times = ParseTimes(o.times);
  if (times.empty()) throw UsageError("--at needs at least one time");
  for (std::size_t t = 1; t < times.size(); ++t) {
    if (times[t] <= times[t - 1]) {
      throw UsageError("--at: times must be strictly increasing");
    }
  }
  if (o.t0.has_value() != o.p.has_value()) {
    throw UsageError("--t0 and --p must be given together");
  }
  if (o.t0 && !o.weights.empty()) {
    throw UsageError("--weights cannot be combined with --t0/--p");
  }
  const InteractionLog log = ReadLog(o.log);

  json parameters = {{"at", times},         {"recommend", g.items()},
                     {"k", o.k},            {"quality", o.quality},
                     {"mode", o.mode}};
  if (const auto* s = std::get_if<Stochastic>(&cfg.mode)) {
    parameters["draws"] = s->draws;
    parameters["seed"] = s->seed;
  }
  if (o.t0) {
    // Reweight every evaluation time toward the t0 marginal.
    const Snapshot ref = BuildSnapshot(log, *o.t0);
    const DebiasTarget target(
        ItemMarginal(ref, ProbabilityModel::Uniform(ref)));
    OptimizerConfig opt = o.optimizer;
    opt.p = *o.p;
    opt.threads = o.threads;
    for (Timestamp t : times) {
      const Snapshot snap = BuildSnapshot(log, t);
      const auto report =
          OptimizeWeights(target, snap, ProbabilityModel::Uniform(snap), opt);
      cfg.weight_schedule[t] = report.final_weights;
    }
    parameters["t0"] = *o.t0;
    parameters["p"] = *o.p;
  }

  const auto points =
      TimelineEvaluate(g, log, times, UniformModel(), ToQuality(o.quality), cfg);
  std::ostringstream csv;
  WriteTimeline(csv, points);
  WriteFile(o.out, csv.str());
  std::vector<fs::path> outputs{o.out};
  if (!o.svg.empty()) {
    WriteFile(o.svg, RenderSvg({{fs::path(o.out).stem().string(), points}}));
    outputs.emplace_back(o.svg);
  }
  std::vector<fs::path> inputs{o.log};
  if (!o.weights.empty()) inputs.emplace_back(o.weights);
  WriteManifest(o.out, "timeline", parameters, inputs, outputs);
  out << json{{"points", points.size()}, {"out", o.out}}.dump() << "\n";
  return kExitOk;
}

int RunOptimize(const Options& o, std::ostream& out) {
  if (!o.t0 || !o.t1) throw UsageError("--t0 and --t1 are required");
  OptimizerConfig opt = o.optimizer;
  opt.p = o.p.value_or(20);
  opt.threads = o.threads;
  const InteractionLog log = ReadLog(o.log);
  const Snapshot ref = BuildSnapshot(log, *o.t0);
  const Snapshot snap = BuildSnapshot(log, *o.t1);
  const DebiasTarget target(ItemMarginal(ref, ProbabilityModel::Uniform(ref)));
  const auto report =
      OptimizeWeights(target, snap, ProbabilityModel::Uniform(snap), opt);

  const fs::path report_path =
      o.report.empty() ? fs::path(o.out).replace_extension(".report.json")
                       : fs::path(o.report);
  std::ostringstream weights;
  WriteWeights(weights, report.final_weights);
  WriteFile(o.out, weights.str());
  WriteFile(report_path, OptimizerReportJson(report));
  const json parameters = {{"t0", *o.t0},
                           {"t1", *o.t1},
                           {"p", opt.p},
                           {"step", opt.step},
                           {"max_iters", opt.max_iters},
                           {"grad_tol", opt.grad_tol},
                           {"kl_tol", opt.kl_tol}};
  WriteManifest(o.out, "optimize", parameters, {o.log}, {o.out, report_path});
  out << json{{"iterations", report.iterations},
              {"initial_kl", report.kl_trace.front()},
              {"final_kl", report.final_kl},
              {"converged", report.converged},
              {"reason", ToString(report.reason)}}
             .dump()
      << "\n";
  return kExitOk;
}

int RunSimulate(const Options& o, std::ostream& out) {
  if (o.config.empty() == o.scenario.empty()) {
    throw UsageError("exactly one of --config or --scenario is required");
  }
  ScenarioConfig cfg;
  std::vector<fs::path> inputs;
  if (!o.config.empty()) {
    cfg = ReadScenario(o.config);
    inputs.emplace_back(o.config);
  } else if (o.scenario == "s1") {
    cfg = ScenarioS1();
  } else {
    throw UsageError("--scenario: unknown scenario '" + o.scenario + "'");
  }
  if (o.seed) cfg.population.seed = *o.seed;
  InteractionLog log;
  try {
    log = BuildScenario(cfg);
  } catch (const InvalidArgument& e) {
    throw DataError(o.config.empty() ? o.scenario : o.config, 0, e.what());
  }
  std::ostringstream csv;
  WriteLogCsv(csv, log);
  WriteFile(o.out, csv.str());
  WriteManifest(o.out, "simulate", json::parse(ScenarioJson(cfg)), inputs,
                {o.out});
  out << json{{"events", log.size()}, {"out", o.out}}.dump() << "\n";
  return kExitOk;
}

int RunStats(const Options& o, std::ostream& out) {
  const Timestamp at = ParseTime(o.at, "--at");
  const Snapshot snap = BuildSnapshot(ReadLog(o.log), at);
  out << json{{"time", at},
              {"n_users", snap.num_users()},
              {"n_items", snap.num_items()},
              {"nnz", snap.nnz()},
              {"mean_profile_size", snap.mean_profile_size()}}
             .dump()
      << "\n";
  return kExitOk;
}

int RunRender(const Options& o, std::ostream& out) {
  std::vector<fs::path> inputs(o.series.begin(), o.series.end());
  RenderSeries(inputs, o.out);
  WriteManifest(o.out, "render", json::object(), inputs, {o.out});
  out << json{{"series", inputs.size()}, {"out", o.out}}.dump() << "\n";
  return kExitOk;
}

void AddThreads(CLI::App* cmd, Options& o) {
  cmd->add_option("--threads", o.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
}

void AddEvaluation(CLI::App* cmd, Options& o) {
  cmd->add_option("--recommend", o.recommend,
                  "Items of the constant recommender, comma separated")
      ->delimiter(',');
  cmd->add_option("--k", o.k, "Recommendation size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--quality", o.quality, "hit | invrank")
      ->check(CLI::IsMember({"hit", "invrank"}))
      ->capture_default_str();
  cmd->add_option("--mode", o.mode, "exhaustive | stochastic")
      ->check(CLI::IsMember({"exhaustive", "stochastic"}))
      ->capture_default_str();
  cmd->add_option("--draws", o.draws,
                  "Stochastic draws (20000 in the reference protocol)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Stochastic seed (default 0)");
  cmd->add_option("--weights", o.weights, "Item weights CSV");
}

void AddOptimizer(CLI::App* cmd, Options& o) {
  cmd->add_option("--step", o.optimizer.step, "Initial step size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iters", o.optimizer.max_iters, "Iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--grad-tol", o.optimizer.grad_tol, "Gradient-norm stop")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--kl-tol", o.optimizer.kl_tol, "Relative KL improvement stop")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  Options o;
  CLI::App app{"Offline recommender evaluation with item reweighting against "
               "feedback-loop drift",
               "offeval"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kVersion);

  auto* eval = app.add_subcommand("eval", "Score a constant recommender at one time");
  eval->add_option("--log", o.log, "Interaction log (CSV or JSONL)")->required();
  eval->add_option("--at", o.at, "Snapshot time")->required();
  AddEvaluation(eval, o);
  AddThreads(eval, o);

  auto* timeline = app.add_subcommand("timeline", "Score over a sequence of times");
  timeline->add_option("--log", o.log, "Interaction log")->required();
  timeline->add_option("--at", o.times, "Times: t1,t2,... or start:stop:step")
      ->required()
      ->delimiter(',');
  timeline->add_option("--out", o.out, "Timeline CSV")->required();
  timeline->add_option("--svg", o.svg, "Also render an SVG chart");
  timeline->add_option("--t0", o.t0, "Reweight each time toward this reference");
  timeline->add_option("--p", o.p, "Active-set size for reweighting")
      ->check(CLI::PositiveNumber);
  AddEvaluation(timeline, o);
  AddOptimizer(timeline, o);
  AddThreads(timeline, o);

  auto* optimize = app.add_subcommand("optimize", "Fit item weights t1 -> t0");
  optimize->add_option("--log", o.log, "Interaction log")->required();
  optimize->add_option("--t0", o.t0, "Reference time")->required();
  optimize->add_option("--t1", o.t1, "Evaluation time")->required();
  optimize->add_option("--p", o.p, "Active-set size (default 20)")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--out", o.out, "Weights CSV")->required();
  optimize->add_option("--report", o.report,
                       "Report JSON (default: <out>.report.json)");
  AddOptimizer(optimize, o);
  AddThreads(optimize, o);

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic log");
  simulate->add_option("--config", o.config, "Scenario JSON");
  simulate->add_option("--scenario", o.scenario, "Built-in scenario (s1)");
  simulate->add_option("--seed", o.seed, "Override the population seed");
  simulate->add_option("--out", o.out, "Log CSV")->required();
  AddThreads(simulate, o);

  auto* stats = app.add_subcommand("stats", "Snapshot statistics");
  stats->add_option("--log", o.log, "Interaction log")->required();
  stats->add_option("--at", o.at, "Snapshot time")->required();
  AddThreads(stats, o);

  auto* render = app.add_subcommand("render", "Render timeline CSVs as one SVG");
  render->add_option("--series", o.series, "Timeline CSVs, comma separated")
      ->required()
      ->delimiter(',');
  render->add_option("--out", o.out, "SVG file")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  std::string command;
  try {
    int status = kExitOk;
    if (*eval) {
      command = "eval";
      status = RunEval(o, out);
    } else if (*timeline) {
      command = "timeline";
      status = RunTimeline(o, out);
    } else if (*optimize) {
      command = "optimize";
      status = RunOptimize(o, out);
    } else if (*simulate) {
      command = "simulate";
      status = RunSimulate(o, out);
    } else if (*stats) {
      command = "stats";
      status = RunStats(o, out);
    } else if (*render) {
      command = "render";
      status = RunRender(o, out);
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    err << "offeval " << command << ": " << seconds << " s\n";
    return status;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace offeval::tools
