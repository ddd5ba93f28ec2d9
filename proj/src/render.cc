// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/render.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "imgeval/error.h"
#include "imgeval/io.h"

namespace imgeval {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string Num(double v) { return FormatSig6(v); }

std::string Escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

class Svg {
 public:
  Svg(const SvgStyle& style) : style_(style) {
    out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width) +
            "\" height=\"" + std::to_string(style.height) + "\" viewBox=\"0 0 " +
            std::to_string(style.width) + " " + std::to_string(style.height) +
            "\" font-family=\"" + Escape(style.font_family) + "\">\n";
    out_ += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(style.width) + "\" height=\"" +
            std::to_string(style.height) + "\" fill=\"#ffffff\"/>\n";
    if (!style.title.empty()) Text(style.width / 2.0, 22, style.title, 16, "middle", "#000000");
  }

  void Line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0, const std::string& extra = {}) {
    out_ += "<line x1=\"" + Num(x1) + "\" y1=\"" + Num(y1) + "\" x2=\"" + Num(x2) + "\" y2=\"" +
            Num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + Num(width) + "\"" + extra +
            "/>\n";
  }

  void Circle(double cx, double cy, double r, const std::string& fill, const std::string& extra = {}) {
    out_ += "<circle cx=\"" + Num(cx) + "\" cy=\"" + Num(cy) + "\" r=\"" + Num(r) + "\" fill=\"" +
            fill + "\"" + extra + "/>\n";
  }

  void Rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& extra = {}) {
    out_ += "<rect x=\"" + Num(x) + "\" y=\"" + Num(y) + "\" width=\"" + Num(w) + "\" height=\"" +
            Num(h) + "\" fill=\"" + fill + "\"" + extra + "/>\n";
  }

  void Polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                const std::string& fill = "none", double width = 1.5) {
    if (pts.empty()) return;
    out_ += "<polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out_.push_back(' ');
      out_ += Num(pts[i].first) + "," + Num(pts[i].second);
    }
    out_ += "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"" + Num(width) +
            "\"/>\n";
  }

  void Text(double x, double y, std::string_view text, double size, const char* anchor,
            const std::string& fill, const std::string& extra = {}) {
    out_ += "<text x=\"" + Num(x) + "\" y=\"" + Num(y) + "\" font-size=\"" + Num(size) +
            "\" text-anchor=\"" + anchor + "\" fill=\"" + fill + "\"" + extra + ">" + Escape(text) +
            "</text>\n";
  }

  std::string Finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  const SvgStyle& style_;
  std::string out_;
};

struct Range {
  double lo = 0.0, hi = 1.0;
  double Map(double v, double out_lo, double out_hi) const {
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
  }
};

Range PaddedRange(const std::vector<double>& values) {
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = *mn, hi = *mx;
  if (hi - lo <= 0.0) {
    const double pad = std::max(std::fabs(lo) * 0.1, 0.5);
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

// Plot frame with five ticks per axis.
struct Frame {
  double left = 80, top = 50, right, bottom;
  Range x, y;

  double X(double v) const { return x.Map(v, left, right); }
  double Y(double v) const { return y.Map(v, bottom, top); }

  void Draw(Svg& svg, const std::string& x_label, const std::string& y_label) const {
    svg.Line(left, bottom, right, bottom, "#000000");
    svg.Line(left, bottom, left, top, "#000000");
    for (int i = 0; i <= 4; ++i) {
      const double fx = x.lo + (x.hi - x.lo) * i / 4.0;
      const double fy = y.lo + (y.hi - y.lo) * i / 4.0;
      svg.Line(X(fx), bottom, X(fx), bottom + 5, "#000000");
      svg.Text(X(fx), bottom + 18, Num(fx), 11, "middle", "#333333");
      svg.Line(left - 5, Y(fy), left, Y(fy), "#000000");
      svg.Text(left - 8, Y(fy) + 4, Num(fy), 11, "end", "#333333");
    }
    svg.Text((left + right) / 2, bottom + 40, x_label, 13, "middle", "#000000");
    svg.Text(20, (top + bottom) / 2, y_label, 13, "middle", "#000000",
             " transform=\"rotate(-90 20 " + Num((top + bottom) / 2) + ")\"");
  }
};

Frame MakeFrame(const SvgStyle& style, const std::vector<double>& xs, const std::vector<double>& ys,
                double right_margin = 40) {
  Frame f;
  f.right = style.width - right_margin;
  f.bottom = style.height - 60;
  f.x = PaddedRange(xs);
  f.y = PaddedRange(ys);
  return f;
}

std::string RenderPareto(const ParetoPlot& plot, const SvgStyle& style) {
  if (plot.points.empty()) throw SpecError("Pareto plot has no points");
  const auto& objs = plot.points[0].objectives;
  std::vector<double> xs, ys;
  for (const auto& p : plot.points) {
    xs.push_back(p.objectives[0].value);
    ys.push_back(p.objectives[1].value);
  }
  Svg svg(style);
  Frame frame = MakeFrame(style, xs, ys);
  frame.Draw(svg, objs[0].name + " (" + std::string(DirectionName(objs[0].direction)) + ")",
             objs[1].name + " (" + std::string(DirectionName(objs[1].direction)) + ")");
  for (const auto& p : plot.points) {
    svg.Circle(frame.X(p.objectives[0].value), frame.Y(p.objectives[1].value), 3.5, "#9e9e9e");
  }
  std::vector<std::pair<double, double>> line;
  for (const auto& p : plot.front) line.emplace_back(frame.X(p.objectives[0].value), frame.Y(p.objectives[1].value));
  svg.Polyline(line, kPalette[0]);
  for (const auto& p : plot.front) {
    const double x = frame.X(p.objectives[0].value), y = frame.Y(p.objectives[1].value);
    svg.Circle(x, y, 5, kPalette[0], " class=\"front-point\"");
    std::string label = p.label;
    if (p.objectives.size() == 3) label += " (" + p.objectives[2].name + "=" + Num(p.objectives[2].value) + ")";
    svg.Text(x + 7, y - 7, label, 10, "start", "#000000");
  }
  return svg.Finish();
}

std::string RenderScatter(const ScatterData& data, const SvgStyle& style) {
  if (data.points.empty()) throw SpecError("scatter plot has no points");
  std::vector<double> xs, ys;
  std::vector<std::string> models;
  for (const auto& p : data.points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
    if (std::find(models.begin(), models.end(), p.model) == models.end()) models.push_back(p.model);
  }
  Svg svg(style);
  Frame frame = MakeFrame(style, xs, ys, 170);
  frame.Draw(svg, data.x_metric, data.y_metric);
  for (const auto& p : data.points) {
    const auto mi = std::find(models.begin(), models.end(), p.model) - models.begin();
    const std::string color = kPalette[mi % std::size(kPalette)];
    const double x = frame.X(p.x), y = frame.Y(p.y);
    svg.Circle(x, y, 5, color);
    svg.Text(x + 7, y - 6, p.dataset, 10, "start", "#000000");
  }
  for (std::size_t i = 0; i < models.size(); ++i) {
    const double y = 60 + 18.0 * static_cast<double>(i);
    svg.Circle(style.width - 150, y - 4, 5, kPalette[i % std::size(kPalette)]);
    svg.Text(style.width - 140, y, models[i], 11, "start", "#000000");
  }
  return svg.Finish();
}

std::string RenderRadar(const RadarData& data, const SvgStyle& style) {
  if (data.series.empty()) throw SpecError("radar plot needs at least one model");
  if (data.axes.empty()) throw SpecError("radar plot needs at least one axis");
  const std::size_t n = data.axes.size();
  std::vector<double> scale(n, 1.0);
  if (!data.normalized) {
    for (std::size_t a = 0; a < n; ++a) {
      double mx = 0.0;
      for (const auto& s : data.series) {
        if (s.values[a]) mx = std::max(mx, *s.values[a]);
      }
      scale[a] = mx > 0.0 ? mx : 1.0;
    }
  }
  const double cx = (style.width - 160) / 2.0 + 20, cy = style.height / 2.0 + 10;
  const double radius = std::min(style.width - 160, style.height - 100) / 2.0 - 30;
  auto angle = [n](std::size_t a) {
    return -std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(n);
  };
  auto point = [&](std::size_t a, double frac) {
    return std::make_pair(cx + radius * frac * std::cos(angle(a)), cy + radius * frac * std::sin(angle(a)));
  };

  Svg svg(style);
  for (int ring = 1; ring <= 4; ++ring) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t a = 0; a <= n; ++a) pts.push_back(point(a % n, ring / 4.0));
    svg.Polyline(pts, "#cccccc", "none", 1.0);
  }
  for (std::size_t a = 0; a < n; ++a) {
    auto [x, y] = point(a, 1.0);
    svg.Line(cx, cy, x, y, "#999999");
    auto [lx, ly] = point(a, 1.12);
    svg.Text(lx, ly + 4, data.axes[a], 12, "middle", "#000000");
    auto [tx, ty] = point(a, 1.0);
    svg.Text(tx + 4, ty - 4, Num(data.normalized ? 1.0 : scale[a]), 9, "start", "#666666");
  }
  for (std::size_t s = 0; s < data.series.size(); ++s) {
    const auto& series = data.series[s];
    const std::string color = kPalette[s % std::size(kPalette)];
    // Consecutive present values are joined; a gap breaks the outline.
    std::vector<std::pair<double, double>> run;
    auto flush = [&] {
      if (run.size() > 1) svg.Polyline(run, color);
      run.clear();
    };
    for (std::size_t i = 0; i <= n; ++i) {
      const std::size_t a = i % n;
      if (!series.values[a]) {
        flush();
        continue;
      }
      run.push_back(point(a, std::clamp(*series.values[a] / scale[a], 0.0, 1.0)));
      if (i == n) flush();
    }
    flush();
    for (std::size_t a = 0; a < n; ++a) {
      if (series.values[a]) {
        auto [x, y] = point(a, std::clamp(*series.values[a] / scale[a], 0.0, 1.0));
        svg.Circle(x, y, 3.5, color);
      } else {
        auto [x, y] = point(a, 0.5);
        svg.Text(x, y, "n/a", 9, "middle", color, " class=\"gap\"");
      }
    }
    const double ly = 60 + 18.0 * static_cast<double>(s);
    svg.Rect(style.width - 150, ly - 9, 10, 10, color);
    svg.Text(style.width - 135, ly, series.model, 11, "start", "#000000");
  }
  svg.Text(cx, style.height - 12, data.metric + (data.dataset.empty() ? "" : " / " + data.dataset),
           12, "middle", "#333333");
  return svg.Finish();
}

std::string RenderRankTable(const RankTable& table, const SvgStyle& base_style) {
  if (table.models.empty() || table.columns.empty()) throw SpecError("rank table is empty");
  const double cell_w = 96, cell_h = 28, label_w = 140, header_h = 52;
  SvgStyle style = base_style;
  style.width = static_cast<int>(label_w + cell_w * static_cast<double>(table.columns.size()) + 20);
  style.height = static_cast<int>(header_h + 40 + cell_h * static_cast<double>(table.models.size()) + 20);
  Svg svg(style);
  const double top = 40;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const auto& col = table.columns[c];
    const double x = label_w + cell_w * static_cast<double>(c) + cell_w / 2;
    svg.Text(x, top + 16, col.metric, 12, "middle", "#000000");
    svg.Text(x, top + 34, col.dataset, 11, "middle", "#444444");
  }
  for (std::size_t m = 0; m < table.models.size(); ++m) {
    const std::string& model = table.models[m];
    const double y = top + header_h + cell_h * static_cast<double>(m);
    svg.Text(label_w - 8, y + cell_h / 2 + 4, model, 12, "end", "#000000");
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto& col = table.columns[c];
      const double x = label_w + cell_w * static_cast<double>(c);
      const RankEntry* entry = nullptr;
      for (const auto& e : col.entries) {
        if (e.model == model) entry = &e;
      }
      const std::string attrs = " data-model=\"" + Escape(model) + "\" data-metric=\"" +
                                Escape(col.metric) + "\" data-dataset=\"" + Escape(col.dataset) + "\"";
      if (!entry) {
        svg.Rect(x + 1, y + 1, cell_w - 2, cell_h - 2, "#e0e0e0", " class=\"rank-missing\"" + attrs);
        svg.Text(x + cell_w / 2, y + cell_h / 2 + 4, "n/a", 11, "middle", "#666666");
        continue;
      }
      const int ranked = static_cast<int>(col.entries.size());
      svg.Rect(x + 1, y + 1, cell_w - 2, cell_h - 2, HexColor(RankColor(entry->rank, ranked)),
               " class=\"rank-cell\"" + attrs + " data-rank=\"" + std::to_string(entry->rank) + "\"");
      svg.Text(x + cell_w / 2, y + cell_h / 2 + 4, Num(entry->value) + " (#" + std::to_string(entry->rank) + ")",
               11, "middle", "#000000");
    }
  }
  return svg.Finish();
}

nlohmann::ordered_json ObjectivesJson(const ParetoPoint& p) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& o : p.objectives) {
    arr.push_back({{"name", o.name}, {"value", o.value}, {"direction", DirectionName(o.direction)}});
  }
  return arr;
}

}  // namespace

std::string RenderSvg(const PlotData& plot, const SvgStyle& style) {
  return std::visit(
      [&](const auto& data) -> std::string {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, ParetoPlot>) return RenderPareto(data, style);
        if constexpr (std::is_same_v<T, RadarData>) return RenderRadar(data, style);
        if constexpr (std::is_same_v<T, RankTable>) return RenderRankTable(data, style);
        if constexpr (std::is_same_v<T, ScatterData>) return RenderScatter(data, style);
      },
      plot);
}

std::string PlotDataJsonl(const PlotData& plot) {
  std::string out;
  auto emit = [&out](const nlohmann::ordered_json& j) {
    out += j.dump();
    out.push_back('\n');
  };
  std::visit(
      [&](const auto& data) {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, ParetoPlot>) {
          for (const auto& p : data.points) {
            const bool on_front = std::find(data.front.begin(), data.front.end(), p) != data.front.end();
            emit({{"type", "pareto_point"}, {"label", p.label}, {"on_front", on_front},
                  {"objectives", ObjectivesJson(p)}});
          }
        } else if constexpr (std::is_same_v<T, RadarData>) {
          emit({{"type", "radar"}, {"metric", data.metric}, {"dataset", data.dataset},
                {"axes", data.axes}, {"normalized", data.normalized}});
          for (const auto& s : data.series) {
            nlohmann::ordered_json values = nlohmann::ordered_json::array();
            for (const auto& v : s.values) values.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr));
            emit({{"type", "radar_series"}, {"model", s.model}, {"values", values}});
          }
        } else if constexpr (std::is_same_v<T, RankTable>) {
          for (const auto& col : data.columns) {
            for (const auto& e : col.entries) {
              emit({{"type", "rank_cell"}, {"dataset", col.dataset}, {"metric", col.metric},
                    {"direction", DirectionName(col.direction)}, {"model", e.model},
                    {"value", e.value}, {"rank", e.rank},
                    {"color", HexColor(RankColor(e.rank, static_cast<int>(col.entries.size())))}});
            }
          }
        } else {
          for (const auto& p : data.points) {
            emit({{"type", "scatter_point"}, {"model", p.model}, {"dataset", p.dataset},
                  {"x_metric", data.x_metric}, {"x", p.x}, {"y_metric", data.y_metric}, {"y", p.y}});
          }
        }
      },
      plot);
  return out;
}

}  // namespace imgeval
