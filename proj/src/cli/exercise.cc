// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/cli/exercise.h"

#include <algorithm>
#include <set>
#include <tuple>

#include "imgeval/analysis.h"
#include "imgeval/cli/run_dir.h"
#include "imgeval/dataset_ops.h"
#include "imgeval/embedding.h"
#include "imgeval/error.h"
#include "imgeval/io.h"
#include "imgeval/parallel.h"
#include "imgeval/records.h"
#include "imgeval/render.h"
#include "imgeval/scores.h"

namespace imgeval::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::pair<ExerciseKind, std::string_view> kKindNames[] = {
    {ExerciseKind::kTradeoffs, "tradeoffs"},
    {ExerciseKind::kGroupRepresentation, "group_representation"},
    {ExerciseKind::kRankingRobustness, "ranking_robustness"},
    {ExerciseKind::kPromptTypes, "prompt_types"},
};

const std::set<std::string, std::less<>> kPrdcOutputs = {"precision", "recall", "density", "coverage"};
const std::set<std::string, std::less<>> kKnownMetrics = {
    "precision", "recall", "density", "coverage", "fid", "clipscore", "vqascore", "dsg"};

// Run-table keys naming input files, in manifest order.
constexpr std::string_view kPathKeys[] = {"real",      "real_metadata", "generated",
                                          "metadata",  "clip_image",    "clip_text",
                                          "clip_scores", "vqa_scores",  "dsg_answers"};

fs::path* PathSlot(ExerciseRun& run, std::string_view key) {
  RunInputs& in = run.inputs;
  if (key == "real") return &in.real;
  if (key == "real_metadata") return &in.real_metadata;
  if (key == "generated") return &in.generated;
  if (key == "metadata") return &in.metadata;
  if (key == "clip_image") return &in.clip_image;
  if (key == "clip_text") return &in.clip_text;
  if (key == "clip_scores") return &run.clip_scores;
  if (key == "vqa_scores") return &run.vqa_scores;
  if (key == "dsg_answers") return &in.dsg_answers;
  return nullptr;
}

std::string FileStem(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out;
}

struct Job {
  std::size_t run = 0;
  MetricSpec spec;
  std::vector<std::string> keep;
};

std::vector<Job> PlanJobs(const ExerciseConfig& config) {
  std::vector<std::string> prdc;
  std::vector<MetricKind> others;
  for (const auto& m : config.metrics) {
    if (kPrdcOutputs.count(m)) {
      prdc.push_back(m);
    } else {
      others.push_back(ParseMetricKind(m));
    }
  }
  const bool grouped = config.kind == ExerciseKind::kGroupRepresentation;
  std::vector<Job> jobs;
  for (std::size_t r = 0; r < config.runs.size(); ++r) {
    if (!prdc.empty()) {
      MetricSpec spec{MetricKind::kPrdc, config.k, std::nullopt, std::nullopt, grouped};
      jobs.push_back({r, spec, prdc});
    }
    for (MetricKind kind : others) {
      MetricSpec spec{kind, std::nullopt, std::nullopt, std::nullopt, grouped};
      if (kind == MetricKind::kClipScore) spec.scale = config.clip_scale;
      jobs.push_back({r, spec, {}});
    }
  }
  return jobs;
}

RunInputs JobInputs(const ExerciseConfig& config, const Job& job) {
  const ExerciseRun& run = config.runs[job.run];
  RunInputs in = run.inputs;
  if (job.spec.kind == MetricKind::kClipScore) in.scores = run.clip_scores;
  if (job.spec.kind == MetricKind::kVqaScore) in.scores = run.vqa_scores;
  return in;
}

// Row count shared by every present input of a run. Subsampling selects the
// same indices from each of them, so they must agree.
std::size_t RunRowCount(const ExerciseRun& run) {
  std::optional<std::size_t> count;
  std::string first;
  auto check = [&](const fs::path& path, std::size_t n) {
    if (!count) {
      count = n;
      first = path.string();
    } else if (*count != n) {
      throw ShapeError("run '" + run.name + "': " + path.string() + " has " + std::to_string(n) +
                       " rows but " + first + " has " + std::to_string(*count));
    }
  };
  const RunInputs& in = run.inputs;
  for (const fs::path* p : {&in.real, &in.generated, &in.clip_image, &in.clip_text}) {
    if (!p->empty()) check(*p, LoadEmbeddings(*p).n());
  }
  for (const fs::path* p : {&in.real_metadata, &in.metadata}) {
    if (!p->empty()) check(*p, LoadMetadata(*p).size());
  }
  if (!run.clip_scores.empty()) check(run.clip_scores, LoadScoreCsv(run.clip_scores, ScoreKind::kClip).scores.size());
  if (!run.vqa_scores.empty()) check(run.vqa_scores, LoadScoreCsv(run.vqa_scores, ScoreKind::kVqa).scores.size());
  if (!in.dsg_answers.empty()) check(in.dsg_answers, LoadDsgAnswers(in.dsg_answers).size());
  if (!count) throw SpecError("run '" + run.name + "' has no inputs");
  return *count;
}

// dataset -> row count, checked to agree across runs of the same dataset.
std::map<std::string, std::size_t> DatasetSizes(const ExerciseConfig& config) {
  std::map<std::string, std::size_t> sizes;
  std::map<std::string, std::string> witness;
  for (const auto& run : config.runs) {
    const std::size_t n = RunRowCount(run);
    const std::string& ds = run.inputs.dataset;
    auto [it, fresh] = sizes.emplace(ds, n);
    if (fresh) {
      witness[ds] = run.name;
    } else if (it->second != n) {
      throw ShapeError("dataset '" + ds + "' has " + std::to_string(it->second) + " rows in run '" +
                       witness[ds] + "' but " + std::to_string(n) + " in run '" + run.name + "'");
    }
  }
  return sizes;
}

void CheckGroupTags(const fs::path& path, const std::string& run) {
  for (const auto& r : LoadMetadata(path)) {
    if (!r.groups.empty()) return;
  }
  throw DataError("run '" + run + "': " + path.string() +
                  " has no group tags; group_representation needs grouped metadata");
}

std::set<std::string> Datasets(const ExerciseConfig& config) {
  std::set<std::string> out;
  for (const auto& run : config.runs) out.insert(run.inputs.dataset);
  return out;
}

std::vector<std::string> ModelsOn(const ExerciseConfig& config, const std::string& dataset) {
  std::set<std::string> models;
  for (const auto& run : config.runs) {
    if (run.inputs.dataset == dataset) models.insert(run.inputs.model);
  }
  return {models.begin(), models.end()};
}

void AddPlot(ExerciseBundle& bundle, const std::string& stem, const PlotData& plot,
             const std::string& title) {
  SvgStyle style;
  style.title = title;
  bundle.files[stem + ".svg"] = RenderSvg(plot, style);
  bundle.files[stem + ".jsonl"] = PlotDataJsonl(plot);
}

nlohmann::ordered_json Manifest(const ExerciseConfig& config) {
  nlohmann::ordered_json m;
  m["tool"] = "imgeval";
  m["version"] = kToolVersion;
  m["command"] = "exercise";
  m["kind"] = ExerciseKindName(config.kind);
  m["seed"] = config.seed;
  m["k"] = config.k;
  m["clip_scale"] = config.clip_scale;
  m["batch_size"] = config.execution.batch_size;
  m["metrics"] = config.metrics;
  if (config.axis) m["axis"] = *config.axis;
  if (config.kind == ExerciseKind::kPromptTypes) {
    auto& s = m["scatters"] = nlohmann::ordered_json::array();
    for (const auto& [x, y] : config.scatters) s.push_back({x, y});
  }
  auto& runs = m["runs"] = nlohmann::ordered_json::array();
  for (const auto& run : config.runs) {
    nlohmann::ordered_json r;
    r["name"] = run.name;
    r["model"] = run.inputs.model;
    r["dataset"] = run.inputs.dataset;
    r["hyperparameters"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : run.inputs.hyperparameters) r["hyperparameters"][k] = v;
    auto& inputs = r["inputs"] = nlohmann::ordered_json::object();
    for (std::string_view key : kPathKeys) {
      auto it = run.paths.find(std::string(key));
      if (it == run.paths.end()) continue;
      inputs[std::string(key)] = DescribeInput(*PathSlot(const_cast<ExerciseRun&>(run), key), it->second);
    }
    runs.push_back(std::move(r));
  }
  return m;
}

}  // namespace

std::string_view ExerciseKindName(ExerciseKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExerciseKind ParseExerciseKind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw SpecError("unknown exercise kind '" + std::string(name) +
                  "' (expected tradeoffs, group_representation, ranking_robustness or prompt_types)");
}

std::vector<std::string> DefaultExerciseMetrics(ExerciseKind kind) {
  switch (kind) {
    case ExerciseKind::kTradeoffs:
      return {"precision", "coverage", "vqascore"};
    case ExerciseKind::kGroupRepresentation:
      return {"precision", "coverage", "clipscore"};
    case ExerciseKind::kRankingRobustness:
      return {"fid", "precision", "coverage", "clipscore", "vqascore"};
    case ExerciseKind::kPromptTypes:
      return {"precision", "coverage", "fid", "clipscore"};
  }
  return {};
}

ExerciseConfig ExerciseConfigFromFile(const Config& file, std::optional<ExerciseKind> requested) {
  ExerciseConfig config;
  const ConfigTable& root = file.Root();
  auto get = [&](const char* key) -> const ConfigValue* {
    auto it = root.find(key);
    return it == root.end() ? nullptr : &it->second;
  };
  static const std::set<std::string, std::less<>> kRootKeys = {
      "kind", "seed", "out", "workers", "batch_size", "k", "clip_scale", "metrics", "axis", "scatters"};
  for (const auto& [key, _] : root) {
    if (!kRootKeys.count(key)) throw SpecError("unknown config key '" + key + "'");
  }
  for (const auto& [name, _] : file.tables) {
    if (!name.empty() && name.rfind("runs.", 0) != 0) {
      throw SpecError("unknown config table [" + name + "]");
    }
  }
  if (const ConfigValue* kind = get("kind")) {
    config.kind = ParseExerciseKind(kind->AsString("kind"));
    if (requested && *requested != config.kind) {
      throw SpecError("exercise kind '" + std::string(ExerciseKindName(*requested)) +
                      "' does not match the config's kind '" + kind->text + "'");
    }
  } else if (requested) {
    config.kind = *requested;
  } else {
    throw SpecError("config key 'kind' is required");
  }
  if (auto* v = get("seed")) config.seed = v->AsInt("seed");
  if (auto* v = get("out")) config.out = file.base_dir / v->AsString("out");
  if (auto* v = get("workers")) config.execution.workers = static_cast<int>(v->AsInt("workers"));
  if (auto* v = get("batch_size")) {
    const auto b = v->AsInt("batch_size");
    if (b < 1) throw SpecError("config key 'batch_size' must be positive");
    config.execution.batch_size = static_cast<std::size_t>(b);
  }
  if (auto* v = get("k")) config.k = static_cast<int>(v->AsInt("k"));
  if (auto* v = get("clip_scale")) config.clip_scale = v->AsDouble("clip_scale");
  config.metrics = get("metrics") ? get("metrics")->AsStringList("metrics")
                                  : DefaultExerciseMetrics(config.kind);
  if (auto* v = get("axis")) config.axis = v->AsString("axis");
  if (auto* v = get("scatters")) {
    for (const auto& pair : v->AsStringList("scatters")) {
      auto colon = pair.find(':');
      if (colon == std::string::npos) throw SpecError("scatter '" + pair + "' must read x:y");
      config.scatters.emplace_back(pair.substr(0, colon), pair.substr(colon + 1));
    }
  } else if (config.kind == ExerciseKind::kPromptTypes) {
    for (auto [x, y] : {std::pair{"precision", "coverage"}, std::pair{"fid", "clipscore"}}) {
      const auto& m = config.metrics;
      if (std::count(m.begin(), m.end(), x) && std::count(m.begin(), m.end(), y)) {
        config.scatters.emplace_back(x, y);
      }
    }
  }

  for (const auto& [name, table] : file.Children("runs")) {
    if (name.find('.') != std::string::npos) {
      throw SpecError("run table [runs." + name + "] must not contain '.'");
    }
    ExerciseRun run;
    run.name = name;
    run.inputs.model = name;
    run.inputs.dataset = "dataset";
    for (const auto& [key, value] : *table) {
      const std::string where = "runs." + name + "." + key;
      if (key == "model") {
        run.inputs.model = value.AsString(where);
      } else if (key == "dataset") {
        run.inputs.dataset = value.AsString(where);
      } else if (key.rfind("hp.", 0) == 0 && key.size() > 3) {
        if (value.type == ConfigValue::Type::kArray) throw SpecError(where + " must be a scalar");
        run.inputs.hyperparameters[key.substr(3)] = value.Display();
      } else if (fs::path* slot = PathSlot(run, key)) {
        const std::string raw = value.AsString(where);
        *slot = file.base_dir / raw;
        run.paths[key] = raw;
      } else {
        throw SpecError("unknown config key '" + where + "'");
      }
    }
    FormatHyperparameters(run.inputs.hyperparameters);  // validates characters
    config.runs.push_back(std::move(run));
  }
  return config;
}

void ValidateExercise(const ExerciseConfig& config) {
  const std::string kind(ExerciseKindName(config.kind));
  if (config.runs.empty()) throw SpecError(kind + ": config has no [runs.<name>] tables");
  if (config.metrics.empty()) throw SpecError(kind + ": metric list is empty");
  std::set<std::string> seen;
  for (const auto& m : config.metrics) {
    if (!kKnownMetrics.count(m)) throw SpecError(kind + ": unknown metric '" + m + "'");
    if (!seen.insert(m).second) throw SpecError(kind + ": metric '" + m + "' listed twice");
  }
  if (config.k < 1) throw SpecError("k must be at least 1");
  if (config.execution.workers < 1) throw SpecError("workers must be at least 1");

  // Plots need one value per cell: per (model, dataset), or per sweep point.
  std::set<std::tuple<std::string, std::string, std::string>> keys;
  for (const auto& run : config.runs) {
    const auto& in = run.inputs;
    const std::string hp =
        config.kind == ExerciseKind::kTradeoffs ? FormatHyperparameters(in.hyperparameters) : "";
    if (!keys.emplace(in.model, in.dataset, hp).second) {
      throw SpecError(kind + ": run '" + run.name + "' repeats model '" + in.model +
                      "' on dataset '" + in.dataset + "'" +
                      (config.kind == ExerciseKind::kTradeoffs ? " with the same hyperparameters" : ""));
    }
    if (config.axis && !in.hyperparameters.count(*config.axis)) {
      throw SpecError(kind + ": run '" + run.name + "' has no value for axis hp." + *config.axis);
    }
  }

  switch (config.kind) {
    case ExerciseKind::kTradeoffs:
      if (config.metrics.size() < 2) throw SpecError("tradeoffs needs at least two metrics");
      break;
    case ExerciseKind::kGroupRepresentation:
      for (const auto& run : config.runs) {
        if (run.inputs.metadata.empty()) {
          throw SpecError("group_representation: run '" + run.name + "' needs metadata with group tags");
        }
      }
      break;
    case ExerciseKind::kRankingRobustness:
      break;
    case ExerciseKind::kPromptTypes:
      for (const auto& [x, y] : config.scatters) {
        for (const auto& m : {x, y}) {
          if (std::find(config.metrics.begin(), config.metrics.end(), m) == config.metrics.end()) {
            throw SpecError("prompt_types: scatter metric '" + m + "' is not in the metric list");
          }
        }
      }
      break;
  }

  for (const Job& job : PlanJobs(config)) {
    const RunInputs in = JobInputs(config, job);
    try {
      CheckInputs(job.spec, in);
    } catch (const SpecError& e) {
      throw SpecError(kind + ": run '" + config.runs[job.run].name + "': " + e.what());
    }
  }
  for (const auto& run : config.runs) {
    for (const auto& [key, raw] : run.paths) {
      if (!fs::exists(*PathSlot(const_cast<ExerciseRun&>(run), key))) {
        throw SpecError(kind + ": run '" + run.name + "': " + key + " file '" + raw + "' does not exist");
      }
    }
  }
  if (config.kind == ExerciseKind::kGroupRepresentation) {
    for (const auto& run : config.runs) {
      CheckGroupTags(run.inputs.metadata, run.name);
      if (!run.inputs.real_metadata.empty()) CheckGroupTags(run.inputs.real_metadata, run.name);
    }
  }
  if (config.kind == ExerciseKind::kPromptTypes) DatasetSizes(config);
}

ExerciseBundle RunExercise(const ExerciseConfig& config) {
  ValidateExercise(config);
  ExerciseBundle bundle;
  bundle.manifest = Manifest(config);

  ExerciseConfig effective = config;
  if (config.kind == ExerciseKind::kPromptTypes) {
    std::vector<DatasetHandle> handles;
    for (const auto& [name, size] : DatasetSizes(config)) {
      handles.push_back({name, std::vector<SampleRecord>(size)});
    }
    const SubsampleAssignment assignment = BalancedSubsample(handles, config.seed);
    for (auto& run : effective.runs) {
      run.inputs.indices = assignment.indices.at(run.inputs.dataset);
      run.inputs.seed = config.seed;
    }
    bundle.files["subsample.csv"] = EncodeSubsample(assignment);
    bundle.manifest["target_size"] = assignment.target_size;
  }

  const std::vector<Job> jobs = PlanJobs(effective);
  std::vector<std::vector<ResultRow>> per_job(jobs.size());
  ExecutionOptions inner = config.execution;
  inner.workers = jobs.size() > 1 ? 1 : config.execution.workers;
  ParallelFor(jobs.size(), config.execution.workers, [&](std::size_t j) {
    const Job& job = jobs[j];
    try {
      per_job[j] = ComputeMetric(job.spec, JobInputs(effective, job), inner, job.keep);
    } catch (const Error&) {
      RethrowWithContext("run '" + effective.runs[job.run].name + "', " +
                         std::string(MetricKindName(job.spec.kind)) + ": ");
    }
  });
  for (auto& rows : per_job) {
    std::move(rows.begin(), rows.end(), std::back_inserter(bundle.results));
  }
  CheckUniqueResults(bundle.results);
  SortResults(bundle.results);
  bundle.files["results.csv"] = EncodeResults(bundle.results);

  const auto& rows = bundle.results;
  switch (config.kind) {
    case ExerciseKind::kTradeoffs:
      for (const auto& ds : Datasets(config)) {
        for (std::size_t i = 0; i < config.metrics.size(); ++i) {
          for (std::size_t j = i + 1; j < config.metrics.size(); ++j) {
            const auto& x = config.metrics[i];
            const auto& y = config.metrics[j];
            ParetoPlot plot = BuildParetoPlot(ParetoPointsFromRows(rows, ds, {x, y}));
            AddPlot(bundle, "pareto_" + FileStem(ds) + "_" + x + "_" + y, plot,
                    ds + ": " + x + " vs " + y);
          }
        }
      }
      break;
    case ExerciseKind::kGroupRepresentation:
      for (const auto& ds : Datasets(config)) {
        for (const auto& metric : config.metrics) {
          RadarData radar = BuildRadarData(rows, metric, ModelsOn(config, ds), ds);
          AddPlot(bundle, "radar_" + FileStem(ds) + "_" + metric, radar, ds + ": " + metric + " by group");
        }
      }
      break;
    case ExerciseKind::kRankingRobustness:
      AddPlot(bundle, "rank_table", BuildRankTable(rows), "Model ranks by dataset and metric");
      break;
    case ExerciseKind::kPromptTypes:
      for (const auto& [x, y] : config.scatters) {
        AddPlot(bundle, "scatter_" + x + "_" + y, BuildScatterData(rows, x, y), x + " vs " + y);
      }
      break;
  }

  auto& outputs = bundle.manifest["outputs"] = nlohmann::ordered_json::array();
  for (const auto& [name, bytes] : bundle.files) {
    outputs.push_back({{"name", name}, {"bytes", bytes.size()}, {"fnv1a64", HexDigest(Fnv1a64(bytes))}});
  }
  return bundle;
}

ExerciseBundle RunExerciseToDirectory(const ExerciseConfig& config) {
  if (config.out.empty()) throw SpecError("no output directory: set 'out' in the config or pass --out");
  ExerciseBundle bundle = RunExercise(config);
  RunDirectory dir(config.out);
  for (const auto& [name, bytes] : bundle.files) dir.Write(name, bytes);
  dir.WriteManifest(bundle.manifest);
  dir.Commit();
  return bundle;
}

}  // namespace imgeval::cli
