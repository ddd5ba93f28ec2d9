// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/cli/commands.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "imgeval/analysis.h"
#include "imgeval/cli/compute.h"
#include "imgeval/cli/config.h"
#include "imgeval/cli/exercise.h"
#include "imgeval/cli/run_dir.h"
#include "imgeval/dataset_ops.h"
#include "imgeval/embedding.h"
#include "imgeval/error.h"
#include "imgeval/io.h"
#include "imgeval/metric_engine.h"
#include "imgeval/records.h"
#include "imgeval/render.h"

namespace imgeval::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// Splits "name=value"; throws SpecError naming the flag otherwise.
std::pair<std::string, std::string> SplitAssignment(const std::string& text, std::string_view flag) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw SpecError(std::string(flag) + " expects name=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    if (comma > start) out.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

Json Outputs(const std::map<std::string, std::string>& files) {
  Json outputs = Json::array();
  for (const auto& [name, bytes] : files) {
    outputs.push_back({{"name", name}, {"bytes", bytes.size()}, {"fnv1a64", HexDigest(Fnv1a64(bytes))}});
  }
  return outputs;
}

Json ManifestHeader(std::string_view command) {
  Json m;
  m["tool"] = "imgeval";
  m["version"] = kToolVersion;
  m["command"] = command;
  return m;
}

// Writes `files` plus the manifest into `out`, or prints the file named
// `primary` to stdout when no output directory was given.
void Emit(const std::string& out_dir, std::map<std::string, std::string> files, Json manifest,
          const std::string& primary, std::ostream& out) {
  if (out_dir.empty()) {
    out << files.at(primary);
    return;
  }
  manifest["outputs"] = Outputs(files);
  RunDirectory dir(out_dir);
  for (const auto& [name, bytes] : files) dir.Write(name, bytes);
  dir.WriteManifest(manifest);
  dir.Commit();
}

struct Globals {
  std::optional<std::int64_t> seed;
  std::string out;
  int workers = 1;
  std::size_t batch_size = 1024;
};

// ---------------------------------------------------------------------------

struct ComputeArgs {
  std::string metric;
  std::optional<int> k;
  std::optional<double> scale;
  std::optional<double> percentile;
  bool grouped = false;
  std::string real, real_metadata, generated, metadata, clip_image, clip_text, scores, dsg_answers;
  std::string model = "model";
  std::string dataset = "dataset";
  std::vector<std::string> hp;
  std::string indices;
  std::string indices_dataset;
};

void RegisterCompute(CLI::App& app, ComputeArgs& a) {
  auto* cmd = app.add_subcommand("compute", "Compute one metric from input files");
  cmd->add_option("--metric", a.metric, "fid, prdc, clipscore, vqascore or dsg")->required();
  cmd->add_option("--k", a.k, "Nearest-neighbour k for prdc (default 3)");
  cmd->add_option("--scale", a.scale, "CLIPScore scale (default 100)");
  cmd->add_option("--percentile", a.percentile, "Report this percentile instead of the mean");
  cmd->add_flag("--grouped", a.grouped, "Also report every group tag");
  cmd->add_option("--real", a.real, "Real embeddings (.npy)");
  cmd->add_option("--real-metadata", a.real_metadata, "Metadata aligned with --real (.jsonl)");
  cmd->add_option("--generated", a.generated, "Generated embeddings (.npy)");
  cmd->add_option("--metadata", a.metadata, "Metadata aligned with the generated side (.jsonl)");
  cmd->add_option("--clip-image", a.clip_image, "CLIP image embeddings (.npy)");
  cmd->add_option("--clip-text", a.clip_text, "CLIP text embeddings (.npy)");
  cmd->add_option("--scores", a.scores, "Per-sample clipscore or vqascore CSV");
  cmd->add_option("--dsg-answers", a.dsg_answers, "Per-sample DSG answers (.jsonl)");
  cmd->add_option("--model", a.model, "Model label for the result rows");
  cmd->add_option("--dataset", a.dataset, "Dataset label for the result rows");
  cmd->add_option("--hp", a.hp, "Hyperparameter key=value (repeatable)");
  cmd->add_option("--indices", a.indices, "Subsample CSV from the subsample command");
  cmd->add_option("--indices-dataset", a.indices_dataset,
                  "Dataset entry of --indices to use (default: --dataset)");
}

int RunCompute(const ComputeArgs& a, const Globals& g, std::ostream& out) {
  MetricSpec spec;
  spec.kind = ParseMetricKind(a.metric);
  spec.k = a.k;
  spec.scale = a.scale;
  spec.percentile = a.percentile;
  spec.grouped = a.grouped;
  spec.Validate();

  RunInputs in;
  in.model = a.model;
  in.dataset = a.dataset;
  for (const auto& kv : a.hp) {
    auto [k, v] = SplitAssignment(kv, "--hp");
    if (!in.hyperparameters.emplace(k, v).second) throw SpecError("--hp " + k + " given twice");
  }
  FormatHyperparameters(in.hyperparameters);
  in.seed = g.seed;
  std::map<std::string, std::string> roles;
  auto set = [&](fs::path& slot, const std::string& value, const char* role) {
    if (value.empty()) return;
    slot = value;
    roles[role] = value;
  };
  set(in.real, a.real, "real");
  set(in.real_metadata, a.real_metadata, "real_metadata");
  set(in.generated, a.generated, "generated");
  set(in.metadata, a.metadata, "metadata");
  set(in.clip_image, a.clip_image, "clip_image");
  set(in.clip_text, a.clip_text, "clip_text");
  set(in.scores, a.scores, "scores");
  set(in.dsg_answers, a.dsg_answers, "dsg_answers");
  std::string indices_dataset;
  if (!a.indices.empty()) {
    indices_dataset = a.indices_dataset.empty() ? a.dataset : a.indices_dataset;
    SubsampleAssignment assignment = LoadSubsample(a.indices);
    auto it = assignment.indices.find(indices_dataset);
    if (it == assignment.indices.end()) {
      throw DataError(a.indices + ": no entry for dataset '" + indices_dataset + "'");
    }
    in.indices = it->second;
    roles["indices"] = a.indices;
  }

  ExecutionOptions options{g.batch_size, g.workers};
  std::vector<ResultRow> rows = ComputeMetric(spec, in, options);

  Json m = ManifestHeader("compute");
  Json s;
  s["kind"] = MetricKindName(spec.kind);
  if (spec.kind == MetricKind::kPrdc) s["k"] = spec.EffectiveK();
  if (spec.kind == MetricKind::kClipScore) s["scale"] = spec.EffectiveScale();
  if (spec.percentile) s["percentile"] = *spec.percentile;
  s["grouped"] = spec.grouped;
  m["metric"] = s;
  m["model"] = in.model;
  m["dataset"] = in.dataset;
  m["hyperparameters"] = Json::object();
  for (const auto& [k, v] : in.hyperparameters) m["hyperparameters"][k] = v;
  m["seed"] = g.seed ? Json(*g.seed) : Json(nullptr);
  m["batch_size"] = g.batch_size;
  if (in.indices) m["indices_dataset"] = indices_dataset;
  Json inputs = Json::object();
  for (const auto& [role, path] : roles) inputs[role] = DescribeInput(path, path);
  m["inputs"] = inputs;
  Emit(g.out, {{"results.csv", EncodeResults(rows)}}, m, "results.csv", out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExerciseArgs {
  std::string kind;
  std::string config;
};

void RegisterExercise(CLI::App& app, ExerciseArgs& a) {
  auto* cmd = app.add_subcommand("exercise", "Run a scripted evaluation exercise from a config file");
  cmd->add_option("kind", a.kind,
                  "tradeoffs, group_representation, ranking_robustness or prompt_types")
      ->required();
  cmd->add_option("--config", a.config, "Exercise config file")->required();
}

int RunExerciseCommand(const ExerciseArgs& a, const Globals& g, CLI::App& app, std::ostream& out) {
  ExerciseConfig config = ExerciseConfigFromFile(LoadConfig(a.config), ParseExerciseKind(a.kind));
  if (g.seed) config.seed = *g.seed;
  if (!g.out.empty()) config.out = g.out;
  if (app.count("--workers")) config.execution.workers = g.workers;
  if (app.count("--batch-size")) config.execution.batch_size = g.batch_size;
  ExerciseBundle bundle = RunExerciseToDirectory(config);
  out << "wrote " << bundle.files.size() + 1 << " files to " << config.out.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string axis;
  std::vector<std::string> files;
};

void RegisterSweep(CLI::App& app, SweepArgs& a) {
  auto* cmd = app.add_subcommand("sweep-collect", "Merge result files from a hyperparameter sweep");
  cmd->add_option("--axis", a.axis, "Hyperparameter the sweep varies")->required();
  cmd->add_option("files", a.files, "Result CSV files")->required()->check(CLI::ExistingFile);
}

int RunSweep(const SweepArgs& a, const Globals& g, std::ostream& out) {
  std::vector<std::vector<ResultRow>> tables;
  Json m = ManifestHeader("sweep-collect");
  m["axis"] = a.axis;
  Json inputs = Json::array();
  for (const auto& f : a.files) {
    tables.push_back(LoadResults(f));
    inputs.push_back(DescribeInput(f, f));
  }
  m["inputs"] = inputs;
  std::vector<ResultRow> merged = SweepCollect(tables, a.axis);
  Emit(g.out, {{"results.csv", EncodeResults(merged)}}, m, "results.csv", out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SubsampleArgs {
  std::vector<std::string> datasets;
  std::vector<std::string> sizes;
};

void RegisterSubsample(CLI::App& app, SubsampleArgs& a) {
  auto* cmd = app.add_subcommand("subsample", "Cut datasets to the size of the smallest one");
  cmd->add_option("--dataset", a.datasets,
                  "name=path of a metadata .jsonl or embeddings .npy (repeatable)");
  cmd->add_option("--size", a.sizes, "name=row count (repeatable)");
}

int RunSubsample(const SubsampleArgs& a, const Globals& g, std::ostream& out) {
  std::vector<DatasetHandle> handles;
  Json m = ManifestHeader("subsample");
  Json inputs = Json::object();
  for (const auto& spec : a.datasets) {
    auto [name, path] = SplitAssignment(spec, "--dataset");
    DatasetHandle h{name, {}};
    if (fs::path(path).extension() == ".npy") {
      h.records.resize(LoadEmbeddings(path).n());
    } else {
      h.records = LoadMetadata(path);
    }
    inputs[name] = DescribeInput(path, path);
    handles.push_back(std::move(h));
  }
  for (const auto& spec : a.sizes) {
    auto [name, count] = SplitAssignment(spec, "--size");
    std::int64_t n;
    if (!ParseInt64(count, n) || n < 0) throw SpecError("--size " + name + " needs a row count");
    handles.push_back({name, std::vector<SampleRecord>(static_cast<std::size_t>(n))});
  }
  const std::int64_t seed = g.seed.value_or(0);
  SubsampleAssignment assignment = BalancedSubsample(handles, seed);
  m["seed"] = seed;
  m["target_size"] = assignment.target_size;
  Json sizes = Json::object();
  for (const auto& h : handles) sizes[h.name] = h.size();
  m["dataset_sizes"] = sizes;
  m["inputs"] = inputs;
  Emit(g.out, {{"subsample.csv", EncodeSubsample(assignment)}}, m, "subsample.csv", out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BalanceArgs {
  std::string metadata;
  std::size_t expected = 0;
  std::vector<std::string> exclude_tags;
};

void RegisterBalance(CLI::App& app, BalanceArgs& a) {
  auto* cmd = app.add_subcommand("validate-balance",
                                 "Check that every (group, class) cell holds the expected count");
  cmd->add_option("--metadata", a.metadata, "Metadata .jsonl")->required();
  cmd->add_option("--expected", a.expected, "Records expected per cell")->required();
  cmd->add_option("--exclude-tag", a.exclude_tags, "Drop records carrying this tag first (repeatable)");
}

int RunBalance(const BalanceArgs& a, const Globals& g, std::ostream& out) {
  std::vector<SampleRecord> records = LoadMetadata(a.metadata);
  for (const auto& tag : a.exclude_tags) {
    std::vector<SampleRecord> kept;
    for (std::size_t i : ExcludeTagged(records, tag)) kept.push_back(std::move(records[i]));
    records = std::move(kept);
  }
  const BalanceReport report = ValidateBalance(records, a.expected);
  Json r;
  r["valid"] = report.valid();
  r["expected_per_cell"] = report.expected_per_cell;
  r["total"] = report.total;
  r["num_groups"] = report.num_groups;
  r["num_classes"] = report.num_classes;
  r["unkeyed"] = report.unkeyed;
  Json cells = Json::array();
  for (const auto& c : report.deficient) {
    cells.push_back({{"group", c.group}, {"class_label", c.class_label}, {"count", c.count}});
  }
  r["deficient"] = cells;
  const std::string text = r.dump(2) + "\n";
  out << text;
  if (!g.out.empty()) {
    Json m = ManifestHeader("validate-balance");
    m["expected_per_cell"] = a.expected;
    m["exclude_tags"] = a.exclude_tags;
    m["inputs"] = {{"metadata", DescribeInput(a.metadata, a.metadata)}};
    Emit(g.out, {{"balance.json", text}}, m, "balance.json", out);
  }
  return report.valid() ? kExitOk : kExitImbalanced;
}

// ---------------------------------------------------------------------------

struct RenderArgs {
  std::string results;
  std::string plot;
  std::string metrics;
  std::string metric;
  std::string dataset;
  std::string models;
  std::string x, y;
  bool normalized = false;
  std::vector<std::string> directions;
  std::string title;
  std::string name;
};

void RegisterRender(CLI::App& app, RenderArgs& a) {
  auto* cmd = app.add_subcommand("render", "Draw a plot from a results CSV");
  cmd->add_option("--results", a.results, "Results CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--plot", a.plot, "pareto, radar, rank or scatter")
      ->required()
      ->check(CLI::IsMember({"pareto", "radar", "rank", "scatter"}));
  cmd->add_option("--metrics", a.metrics, "pareto: 2 or 3 comma-separated metrics");
  cmd->add_option("--metric", a.metric, "radar: metric to draw");
  cmd->add_option("--dataset", a.dataset, "pareto: dataset (required); radar: filter");
  cmd->add_option("--models", a.models, "radar: comma-separated models (default: all)");
  cmd->add_option("--x", a.x, "scatter: x-axis metric");
  cmd->add_option("--y", a.y, "scatter: y-axis metric");
  cmd->add_flag("--normalized", a.normalized, "radar: values already lie in [0, 1]");
  cmd->add_option("--direction", a.directions, "metric=maximize|minimize override (repeatable)");
  cmd->add_option("--title", a.title, "Plot title");
  cmd->add_option("--name", a.name, "Output file stem (default: the plot type)");
}

int RunRender(const RenderArgs& a, const Globals& g, std::ostream& out) {
  const std::vector<ResultRow> rows = LoadResults(a.results);
  DirectionMap overrides;
  for (const auto& d : a.directions) {
    auto [metric, dir] = SplitAssignment(d, "--direction");
    if (dir == "maximize") {
      overrides[metric] = Direction::kMaximize;
    } else if (dir == "minimize") {
      overrides[metric] = Direction::kMinimize;
    } else {
      throw SpecError("--direction " + metric + " must be maximize or minimize");
    }
  }
  auto need = [&](const std::string& value, const char* flag) {
    if (value.empty()) throw SpecError("render --plot " + a.plot + " needs " + flag);
  };
  PlotData plot;
  if (a.plot == "pareto") {
    need(a.metrics, "--metrics");
    need(a.dataset, "--dataset");
    plot = BuildParetoPlot(ParetoPointsFromRows(rows, a.dataset, SplitList(a.metrics), overrides));
  } else if (a.plot == "radar") {
    need(a.metric, "--metric");
    std::vector<std::string> models = SplitList(a.models);
    if (models.empty()) {
      std::set<std::string> all;
      for (const auto& r : rows) {
        if (a.dataset.empty() || r.dataset == a.dataset) all.insert(r.model);
      }
      models.assign(all.begin(), all.end());
    }
    plot = BuildRadarData(rows, a.metric, models, a.dataset, a.normalized);
  } else if (a.plot == "rank") {
    plot = BuildRankTable(rows, overrides);
  } else {
    need(a.x, "--x");
    need(a.y, "--y");
    plot = BuildScatterData(rows, a.x, a.y);
  }
  SvgStyle style;
  style.title = a.title;
  const std::string stem = a.name.empty() ? a.plot : a.name;
  Json m = ManifestHeader("render");
  m["plot"] = a.plot;
  m["inputs"] = {{"results", DescribeInput(a.results, a.results)}};
  Emit(g.out, {{stem + ".svg", RenderSvg(plot, style)}, {stem + ".jsonl", PlotDataJsonl(plot)}}, m,
       stem + ".svg", out);
  return kExitOk;
}

int CompareAxis(const std::string& a, const std::string& b) {
  double x, y;
  if (ParseDouble(a, x) && ParseDouble(b, y)) {
    if (x != y) return x < y ? -1 : 1;
  }
  return a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
}

}  // namespace

std::vector<ResultRow> SweepCollect(std::span<const std::vector<ResultRow>> tables,
                                    std::string_view axis) {
  std::map<std::string, ResultRow> by_key;
  for (const auto& table : tables) {
    for (const auto& row : table) {
      if (!row.hyperparameters.count(std::string(axis))) {
        throw DataError("result row (" + row.model + ", " + row.dataset + ", " + row.metric +
                        ") has no value for sweep axis '" + std::string(axis) + "'");
      }
      auto [it, fresh] = by_key.emplace(ResultKey(row), row);
      if (!fresh && !(it->second.value == row.value)) {
        throw ConflictError("conflicting values " + FormatRoundTrip(it->second.value) + " and " +
                            FormatRoundTrip(row.value) + " for " + ResultKey(row));
      }
    }
  }
  std::vector<ResultRow> rows;
  rows.reserve(by_key.size());
  for (auto& [_, row] : by_key) rows.push_back(std::move(row));
  const std::string key(axis);
  std::stable_sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) {
    if (a.model != b.model) return a.model < b.model;
    if (a.dataset != b.dataset) return a.dataset < b.dataset;
    if (a.metric != b.metric) return a.metric < b.metric;
    if (int c = CompareAxis(a.hyperparameters.at(key), b.hyperparameters.at(key))) return c < 0;
    return CanonicalResultLess(a, b);
  });
  return rows;
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("imgeval: evaluation metrics and analyses for generative image models", "imgeval");
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed (subsampling; recorded in results)");
  app.add_option("--out", g.out, "Output run directory");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--batch-size", g.batch_size, "Rows per streamed batch")->check(CLI::PositiveNumber);

  ComputeArgs compute;
  ExerciseArgs exercise;
  SweepArgs sweep;
  SubsampleArgs subsample;
  BalanceArgs balance;
  RenderArgs render;
  RegisterCompute(app, compute);
  RegisterExercise(app, exercise);
  RegisterSweep(app, sweep);
  RegisterSubsample(app, subsample);
  RegisterBalance(app, balance);
  RegisterRender(app, render);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("compute")) return RunCompute(compute, g, out);
    if (app.got_subcommand("exercise")) return RunExerciseCommand(exercise, g, app, out);
    if (app.got_subcommand("sweep-collect")) return RunSweep(sweep, g, out);
    if (app.got_subcommand("subsample")) return RunSubsample(subsample, g, out);
    if (app.got_subcommand("validate-balance")) return RunBalance(balance, g, out);
    if (app.got_subcommand("render")) return RunRender(render, g, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace imgeval::cli
