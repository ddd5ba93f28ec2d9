// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "imgeval/analysis.h"

namespace imgeval {

struct SvgStyle {
  int width = 720;
  int height = 540;
  std::string title;
  std::string font_family = "sans-serif";
};

// Byte-deterministic SVG: fixed element order, every number printed with six
// significant digits, no timestamps.
std::string RenderSvg(const PlotData& plot, const SvgStyle& style = {});

// Machine-readable companion of RenderSvg: one JSON object per line.
std::string PlotDataJsonl(const PlotData& plot);

}  // namespace imgeval
