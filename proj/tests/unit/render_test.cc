// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include <regex>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "imgeval/render.h"

namespace imgeval {
namespace {

ResultRow Row(std::string model, std::string dataset, std::string metric, double value,
              std::string group = "ALL") {
  ResultRow r;
  r.model = std::move(model);
  r.dataset = std::move(dataset);
  r.metric = std::move(metric);
  r.value = value;
  r.group = std::move(group);
  return r;
}

std::vector<ResultRow> RankRows() {
  return {Row("A", "coco", "fid", 10),        Row("B", "coco", "fid", 5),
          Row("C", "coco", "fid", 20),        Row("A", "coco", "precision", 0.7),
          Row("B", "coco", "precision", 0.7), Row("C", "geode", "precision", 0.4)};
}

std::vector<PlotData> AllPlots() {
  std::vector<ParetoPoint> pts = {
      {{{"precision", 0.9, Direction::kMaximize}, {"coverage", 0.5, Direction::kMaximize}}, "a"},
      {{{"precision", 0.5, Direction::kMaximize}, {"coverage", 0.9, Direction::kMaximize}}, "b"},
      {{{"precision", 0.4, Direction::kMaximize}, {"coverage", 0.4, Direction::kMaximize}}, "c"}};
  const std::vector<ResultRow> groups = {Row("A", "geode", "coverage", 0.5, "africa"),
                                         Row("A", "geode", "coverage", 0.7, "europe"),
                                         Row("B", "geode", "coverage", 0.6, "africa")};
  const std::vector<ResultRow> scatter = {Row("A", "x", "precision", 0.2), Row("A", "x", "coverage", 0.3),
                                          Row("B", "y", "precision", 0.6), Row("B", "y", "coverage", 0.1)};
  return {BuildParetoPlot(pts), BuildRadarData(groups, "coverage", {"A", "B"}),
          BuildRankTable(RankRows()), BuildScatterData(scatter, "precision", "coverage")};
}

TEST(Svg, OutputIsByteDeterministicAndWellFormed) {
  for (const auto& plot : AllPlots()) {
    const std::string a = RenderSvg(plot, {.title = "t"});
    EXPECT_EQ(a, RenderSvg(plot, {.title = "t"}));
    EXPECT_EQ(a.rfind("<?xml", 0), 0u) << a.substr(0, 40);
    EXPECT_NE(a.find("<svg xmlns=\"http://www.w3.org/2000/svg\""), std::string::npos);
    EXPECT_NE(a.find("</svg>"), std::string::npos);
    EXPECT_EQ(PlotDataJsonl(plot), PlotDataJsonl(plot));
  }
}

TEST(Svg, TitleIsEscaped) {
  const std::string svg = RenderSvg(AllPlots()[0], {.title = "a<b & \"c\""});
  EXPECT_NE(svg.find("a&lt;b &amp; &quot;c&quot;"), std::string::npos);
}

TEST(Svg, RankCellColorsParseBackToRanks) {
  const RankTable table = BuildRankTable(RankRows());
  const std::string svg = RenderSvg(table);
  const std::regex cell(
      "fill=\"(#[0-9a-f]{6})\" class=\"rank-cell\" data-model=\"([^\"]*)\" data-metric=\"([^\"]*)\" "
      "data-dataset=\"([^\"]*)\" data-rank=\"([0-9]+)\"");
  int seen = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), cell); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    const RankEntry* e = table.Find(m[4].str(), m[3].str(), m[2].str());
    ASSERT_NE(e, nullptr);
    EXPECT_EQ(std::stoi(m[5].str()), e->rank);
    int column_size = 0;
    for (const auto& col : table.columns) {
      if (col.metric == m[3].str() && col.dataset == m[4].str()) column_size = static_cast<int>(col.entries.size());
    }
    EXPECT_EQ(m[1].str(), HexColor(RankColor(e->rank, column_size)));
    ++seen;
  }
  EXPECT_EQ(seen, 6);
  // Three models by three columns leaves three absent cells.
  std::size_t missing = 0;
  for (std::size_t p = svg.find("rank-missing"); p != std::string::npos; p = svg.find("rank-missing", p + 1)) ++missing;
  EXPECT_EQ(missing, 3u);
}

TEST(Jsonl, RecordTypes) {
  const char* const kTypes[] = {"pareto_point", "radar", "rank_cell", "scatter_point"};
  const auto plots = AllPlots();
  for (std::size_t i = 0; i < plots.size(); ++i) {
    std::istringstream in(PlotDataJsonl(plots[i]));
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) {
      const auto j = nlohmann::json::parse(line);
      const std::string type = j.at("type");
      if (i == 1) {
        EXPECT_TRUE(type == "radar" || type == "radar_series") << type;
      } else {
        EXPECT_EQ(type, kTypes[i]);
      }
      ++lines;
    }
    EXPECT_GT(lines, 0u);
  }
}

TEST(Jsonl, ParetoMarksFrontAndRadarGapsAreNull) {
  const auto plots = AllPlots();
  std::istringstream pareto(PlotDataJsonl(plots[0]));
  std::string line;
  std::map<std::string, bool> on_front;
  while (std::getline(pareto, line)) {
    const auto j = nlohmann::json::parse(line);
    on_front[j.at("label")] = j.at("on_front");
  }
  EXPECT_EQ(on_front, (std::map<std::string, bool>{{"a", true}, {"b", true}, {"c", false}}));

  std::istringstream radar(PlotDataJsonl(plots[1]));
  std::getline(radar, line);
  std::getline(radar, line);
  std::getline(radar, line);
  const auto b = nlohmann::json::parse(line);
  EXPECT_EQ(b.at("model"), "B");
  EXPECT_TRUE(b.at("values")[1].is_null());
}

}  // namespace
}  // namespace imgeval
