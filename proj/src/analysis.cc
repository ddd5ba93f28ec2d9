// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "imgeval/error.h"
#include "imgeval/io.h"
#include "imgeval/records.h"

namespace imgeval {

std::string_view DirectionName(Direction d) {
  return d == Direction::kMaximize ? "maximize" : "minimize";
}

Direction MetricDirection(std::string_view metric, const DirectionMap& overrides) {
  if (auto it = overrides.find(std::string(metric)); it != overrides.end()) return it->second;
  std::string_view base = metric;
  if (auto p = base.rfind("_p"); p != std::string_view::npos) {
    double pct;
    if (ParseDouble(base.substr(p + 2), pct)) base = base.substr(0, p);
  }
  if (base == "fid") return Direction::kMinimize;
  static const std::set<std::string, std::less<>> kMaximized = {
      "precision", "recall", "density", "coverage", "clipscore", "vqascore", "dsg"};
  if (kMaximized.count(base)) return Direction::kMaximize;
  throw SpecError("metric '" + std::string(metric) + "' has no declared direction");
}

// ---------------------------------------------------------------------------

namespace {

double Normalized(const Objective& o) {
  return o.direction == Direction::kMaximize ? o.value : -o.value;
}

void CheckPoints(std::span<const ParetoPoint> points) {
  if (points.empty()) return;
  const auto& ref = points[0].objectives;
  if (ref.size() < 2 || ref.size() > 3) {
    throw SpecError("Pareto points need 2 or 3 objectives, got " + std::to_string(ref.size()));
  }
  for (const auto& p : points) {
    if (p.objectives.size() != ref.size()) throw SpecError("Pareto points have differing objective counts");
    for (std::size_t i = 0; i < ref.size(); ++i) {
      if (p.objectives[i].name != ref[i].name || p.objectives[i].direction != ref[i].direction) {
        throw SpecError("Pareto points disagree on objective " + std::to_string(i) + " ('" +
                        ref[i].name + "' vs '" + p.objectives[i].name + "')");
      }
      if (!std::isfinite(p.objectives[i].value)) {
        throw DataError("Pareto point '" + p.label + "' has a non-finite objective");
      }
    }
  }
}

}  // namespace

bool Dominates(const ParetoPoint& a, const ParetoPoint& b) {
  bool strictly = false;
  for (std::size_t i = 0; i < a.objectives.size(); ++i) {
    const double x = Normalized(a.objectives[i]), y = Normalized(b.objectives[i]);
    if (x < y) return false;
    if (x > y) strictly = true;
  }
  return strictly;
}

std::vector<ParetoPoint> ParetoFront(std::span<const ParetoPoint> points) {
  CheckPoints(points);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      dominated = j != i && Dominates(points[j], points[i]);
    }
    if (!dominated) keep.push_back(i);
  }
  std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
    const auto& oa = points[a].objectives;
    const auto& ob = points[b].objectives;
    for (std::size_t i = 0; i < oa.size(); ++i) {
      if (oa[i].value != ob[i].value) return oa[i].value > ob[i].value;
    }
    return points[a].label < points[b].label;
  });
  std::vector<ParetoPoint> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(points[i]);
  return out;
}

ParetoPlot BuildParetoPlot(std::vector<ParetoPoint> points) {
  if (points.empty()) throw SpecError("Pareto plot needs at least one point");
  ParetoPlot plot;
  plot.front = ParetoFront(points);
  plot.points = std::move(points);
  return plot;
}

std::vector<ParetoPoint> ParetoPointsFromRows(std::span<const ResultRow> rows,
                                              std::string_view dataset,
                                              const std::vector<std::string>& metrics,
                                              const DirectionMap& overrides) {
  struct Key {
    std::string model;
    Hyperparameters hp;
    std::optional<std::int64_t> seed;
  };
  auto less = [](const Key& a, const Key& b) {
    if (a.model != b.model) return a.model < b.model;
    if (HyperparametersLess(a.hp, b.hp)) return true;
    if (HyperparametersLess(b.hp, a.hp)) return false;
    return a.seed < b.seed;
  };
  std::map<Key, std::map<std::string, double>, decltype(less)> table(less);
  for (const auto& r : rows) {
    if (r.group != kAllGroup || r.dataset != dataset) continue;
    if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end()) continue;
    auto& values = table[Key{r.model, r.hyperparameters, r.seed}];
    if (!values.emplace(r.metric, r.value).second) {
      throw DataError("duplicate " + r.metric + " value for model '" + r.model + "'");
    }
  }
  std::vector<ParetoPoint> points;
  for (const auto& [key, values] : table) {
    ParetoPoint p;
    p.label = key.model;
    if (!key.hp.empty()) p.label += " " + FormatHyperparameters(key.hp);
    if (key.seed) p.label += " seed=" + std::to_string(*key.seed);
    for (const auto& m : metrics) {
      auto it = values.find(m);
      if (it == values.end()) {
        throw DataError("Pareto point '" + p.label + "' on dataset '" + std::string(dataset) +
                        "' is missing metric '" + m + "'");
      }
      p.objectives.push_back({m, it->second, MetricDirection(m, overrides)});
    }
    points.push_back(std::move(p));
  }
  return points;
}

// ---------------------------------------------------------------------------

const RankEntry* RankTable::Find(std::string_view dataset, std::string_view metric,
                                 std::string_view model) const {
  for (const auto& c : columns) {
    if (c.dataset != dataset || c.metric != metric) continue;
    for (const auto& e : c.entries) {
      if (e.model == model) return &e;
    }
  }
  return nullptr;
}

RankTable BuildRankTable(std::span<const ResultRow> rows, const DirectionMap& overrides) {
  // (metric, dataset) -> model -> value
  std::map<std::pair<std::string, std::string>, std::map<std::string, double>> cells;
  std::set<std::string> models;
  for (const auto& r : rows) {
    if (r.group != kAllGroup) continue;
    auto& col = cells[{r.metric, r.dataset}];
    if (!col.emplace(r.model, r.value).second) {
      throw DataError("rank table column (" + r.dataset + ", " + r.metric +
                      ") has more than one value for model '" + r.model + "'");
    }
    models.insert(r.model);
  }
  if (cells.empty()) throw DataError("no aggregate (group ALL) rows to rank");

  RankTable table;
  table.models.assign(models.begin(), models.end());
  for (const auto& [key, values] : cells) {
    RankColumn col;
    col.metric = key.first;
    col.dataset = key.second;
    col.direction = MetricDirection(col.metric, overrides);
    const double sign = col.direction == Direction::kMaximize ? 1.0 : -1.0;
    for (const auto& [model, value] : values) {
      int better = 0;
      for (const auto& [_, other] : values) better += sign * other > sign * value;
      col.entries.push_back({model, value, better + 1});
    }
    table.columns.push_back(std::move(col));
  }
  return table;
}

Rgb RankColor(int rank, int num_ranked) {
  constexpr Rgb kBest{26, 152, 80};
  constexpr Rgb kWorst{215, 48, 39};
  const double t =
      num_ranked > 1 ? static_cast<double>(rank - 1) / static_cast<double>(num_ranked - 1) : 0.0;
  auto lerp = [t](int a, int b) {
    return static_cast<int>(std::lround(a + (b - a) * std::clamp(t, 0.0, 1.0)));
  };
  return {lerp(kBest.r, kWorst.r), lerp(kBest.g, kWorst.g), lerp(kBest.b, kWorst.b)};
}

std::string HexColor(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

// ---------------------------------------------------------------------------

RadarData BuildRadarData(std::span<const ResultRow> rows, std::string_view metric,
                         const std::vector<std::string>& models, std::string_view dataset,
                         bool normalized) {
  if (models.empty()) throw SpecError("radar plot needs at least one model");
  std::set<std::string> axes;
  std::map<std::pair<std::string, std::string>, double> values;  // (model, group)
  for (const auto& r : rows) {
    if (r.metric != metric || r.group == kAllGroup) continue;
    if (!dataset.empty() && r.dataset != dataset) continue;
    axes.insert(r.group);
    if (std::find(models.begin(), models.end(), r.model) == models.end()) continue;
    if (!values.emplace(std::make_pair(r.model, r.group), r.value).second) {
      throw DataError("radar: more than one " + std::string(metric) + " value for model '" +
                      r.model + "', group '" + r.group + "'");
    }
  }
  if (axes.empty()) {
    throw DataError("radar: no group-disaggregated rows for metric '" + std::string(metric) + "'");
  }
  RadarData data;
  data.metric = metric;
  data.dataset = dataset;
  data.axes.assign(axes.begin(), axes.end());
  data.normalized = normalized;
  for (const auto& model : models) {
    RadarSeries s{model, {}};
    for (const auto& axis : data.axes) {
      auto it = values.find({model, axis});
      s.values.push_back(it == values.end() ? std::nullopt : std::optional<double>(it->second));
    }
    data.series.push_back(std::move(s));
  }
  return data;
}

ScatterData BuildScatterData(std::span<const ResultRow> rows, std::string_view x_metric,
                             std::string_view y_metric) {
  std::map<std::pair<std::string, std::string>, std::pair<std::optional<double>, std::optional<double>>>
      pairs;
  for (const auto& r : rows) {
    if (r.group != kAllGroup) continue;
    const bool is_x = r.metric == x_metric, is_y = r.metric == y_metric;
    if (!is_x && !is_y) continue;
    auto& slot = pairs[{r.model, r.dataset}];
    for (auto [hit, target] : {std::pair{is_x, &slot.first}, std::pair{is_y, &slot.second}}) {
      if (!hit) continue;
      if (*target) {
        throw DataError("scatter: more than one " + r.metric + " value for (" + r.model + ", " +
                        r.dataset + ")");
      }
      *target = r.value;
    }
  }
  if (pairs.empty()) {
    throw DataError("scatter: no rows for metrics '" + std::string(x_metric) + "' and '" +
                    std::string(y_metric) + "'");
  }
  ScatterData data{std::string(x_metric), std::string(y_metric), {}};
  for (const auto& [key, xy] : pairs) {
    if (!xy.first || !xy.second) {
      throw DataError("scatter: (" + key.first + ", " + key.second + ") is missing metric '" +
                      std::string(xy.first ? y_metric : x_metric) + "'");
    }
    data.points.push_back({key.first, key.second, *xy.first, *xy.second});
  }
  return data;
}

}  // namespace imgeval
