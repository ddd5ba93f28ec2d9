// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "imgeval/results.h"

namespace imgeval {

enum class Direction { kMaximize, kMinimize };

std::string_view DirectionName(Direction d);

using DirectionMap = std::map<std::string, Direction>;

// FID is minimized; precision, recall, density, coverage, clipscore,
// vqascore and dsg are maximized. Percentile variants ("clipscore_p10")
// follow their base metric. `overrides` wins over the defaults. Throws
// SpecError for a metric with no known direction.
Direction MetricDirection(std::string_view metric, const DirectionMap& overrides = {});

// ---------------------------------------------------------------------------
// Pareto fronts

struct Objective {
  std::string name;
  double value = 0.0;
  Direction direction = Direction::kMaximize;

  friend bool operator==(const Objective&, const Objective&) = default;
};

struct ParetoPoint {
  std::vector<Objective> objectives;  // 2 or 3
  std::string label;

  friend bool operator==(const ParetoPoint&, const ParetoPoint&) = default;
};

// True when `a` is at least as good as `b` everywhere and strictly better
// somewhere, after negating minimized objectives.
bool Dominates(const ParetoPoint& a, const ParetoPoint& b);

// Non-dominated subset, ordered by first objective value descending (then the
// remaining objectives descending, then label, then input order). Duplicates
// of a non-dominated point are all kept.
std::vector<ParetoPoint> ParetoFront(std::span<const ParetoPoint> points);

struct ParetoPlot {
  std::vector<ParetoPoint> points;
  std::vector<ParetoPoint> front;
};

ParetoPlot BuildParetoPlot(std::vector<ParetoPoint> points);

// One point per (model, hyperparameters, seed) from "ALL" rows of `dataset`, with
// objectives `metrics` in order. Labels read "model", followed by
// " key=value;..." when hyperparameters are set and " seed=N" when seeded.
std::vector<ParetoPoint> ParetoPointsFromRows(std::span<const ResultRow> rows,
                                              std::string_view dataset,
                                              const std::vector<std::string>& metrics,
                                              const DirectionMap& overrides = {});

// ---------------------------------------------------------------------------
// Ranking tables

struct RankEntry {
  std::string model;
  double value = 0.0;
  int rank = 0;

  friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

struct RankColumn {
  std::string dataset;
  std::string metric;
  Direction direction = Direction::kMaximize;
  std::vector<RankEntry> entries;  // models present in this column, in table model order

  friend bool operator==(const RankColumn&, const RankColumn&) = default;
};

struct RankTable {
  std::vector<std::string> models;  // sorted
  std::vector<RankColumn> columns;  // sorted by (metric, dataset)

  const RankEntry* Find(std::string_view dataset, std::string_view metric,
                        std::string_view model) const;

  friend bool operator==(const RankTable&, const RankTable&) = default;
};

// Uses "ALL" rows. Competition ranking: tied values share the smallest rank
// and the following rank is skipped. Throws DataError when a column holds two
// values for one model, SpecError for metrics without a direction.
RankTable BuildRankTable(std::span<const ResultRow> rows, const DirectionMap& overrides = {});

struct Rgb {
  int r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Linear green -> red ramp; rank 1 is green, rank `num_ranked` is red.
Rgb RankColor(int rank, int num_ranked);
std::string HexColor(const Rgb& c);

// ---------------------------------------------------------------------------
// Radar plots

struct RadarSeries {
  std::string model;
  std::vector<std::optional<double>> values;  // aligned with axes; nullopt = gap

  friend bool operator==(const RadarSeries&, const RadarSeries&) = default;
};

struct RadarData {
  std::string metric;
  std::string dataset;             // empty: rows from any dataset
  std::vector<std::string> axes;   // group names, sorted
  std::vector<RadarSeries> series;
  bool normalized = false;         // plot values as-is on [0, 1]

  friend bool operator==(const RadarData&, const RadarData&) = default;
};

// Axes are all non-"ALL" groups reported for `metric` (and `dataset`, when
// given). Throws SpecError for an empty model list and DataError when no
// group-level rows exist or a (model, group) has more than one value.
RadarData BuildRadarData(std::span<const ResultRow> rows, std::string_view metric,
                         const std::vector<std::string>& models, std::string_view dataset = {},
                         bool normalized = false);

// ---------------------------------------------------------------------------
// Scatter plots

struct ScatterPoint {
  std::string model;
  std::string dataset;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const ScatterPoint&, const ScatterPoint&) = default;
};

struct ScatterData {
  std::string x_metric;
  std::string y_metric;
  std::vector<ScatterPoint> points;  // sorted by (model, dataset)

  friend bool operator==(const ScatterData&, const ScatterData&) = default;
};

// One point per (model, dataset) from "ALL" rows. A pair reporting only one
// of the two metrics is a DataError naming the pair.
ScatterData BuildScatterData(std::span<const ResultRow> rows, std::string_view x_metric,
                             std::string_view y_metric);

using PlotData = std::variant<ParetoPlot, RadarData, RankTable, ScatterData>;

}  // namespace imgeval
