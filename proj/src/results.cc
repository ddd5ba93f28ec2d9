// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/results.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "imgeval/csv.h"
#include "imgeval/error.h"
#include "imgeval/io.h"

namespace imgeval {

std::string FormatHyperparameters(const Hyperparameters& hp) {
  std::string out;
  for (const auto& [k, v] : hp) {
    if (k.empty() || k.find_first_of("=;") != std::string::npos) {
      throw DataError("invalid hyperparameter key '" + k + "'");
    }
    if (v.find(';') != std::string::npos) {
      throw DataError("hyperparameter value for '" + k + "' contains ';'");
    }
    if (!out.empty()) out.push_back(';');
    out += k;
    out.push_back('=');
    out += v;
  }
  return out;
}

Hyperparameters ParseHyperparameters(std::string_view text) {
  Hyperparameters hp;
  if (text.empty()) return hp;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw DataError("malformed hyperparameter '" + std::string(item) + "'");
    }
    std::string key(item.substr(0, eq));
    if (!hp.emplace(key, std::string(item.substr(eq + 1))).second) {
      throw DataError("repeated hyperparameter '" + key + "'");
    }
    pos = end + 1;
  }
  return hp;
}

namespace {

// -1, 0, 1
int CompareValues(const std::string& a, const std::string& b) {
  double x, y;
  if (ParseDouble(a, x) && ParseDouble(b, y) && x != y) return x < y ? -1 : 1;
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

bool HyperparametersLess(const Hyperparameters& a, const Hyperparameters& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    int c = CompareValues(ia->second, ib->second);
    if (c != 0) return c < 0;
  }
  return ia == a.end() && ib != b.end();
}

std::string ResultKey(const ResultRow& row) {
  return FormatCsvLine({row.model, row.dataset, row.group,
                        FormatHyperparameters(row.hyperparameters), row.metric,
                        row.seed ? std::to_string(*row.seed) : std::string()});
}

bool CanonicalResultLess(const ResultRow& a, const ResultRow& b) {
  if (auto c = std::tie(a.model, a.dataset, a.metric, a.group) <=>
               std::tie(b.model, b.dataset, b.metric, b.group);
      c != 0) {
    return c < 0;
  }
  if (HyperparametersLess(a.hyperparameters, b.hyperparameters)) return true;
  if (HyperparametersLess(b.hyperparameters, a.hyperparameters)) return false;
  return a.seed < b.seed;
}

void SortResults(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), CanonicalResultLess);
}

void CheckUniqueResults(std::span<const ResultRow> rows) {
  std::set<std::string> seen;
  for (const auto& r : rows) {
    std::string key = ResultKey(r);
    if (!seen.insert(key).second) {
      key.pop_back();
      throw DuplicateResultError("duplicate result key (" + key + ")");
    }
  }
}

std::string EncodeResults(std::span<const ResultRow> rows) {
  std::string out(kResultsHeader);
  out.push_back('\n');
  for (const auto& r : rows) {
    if (!std::isfinite(r.value)) {
      throw DataError("non-finite result value for " + r.model + "/" + r.dataset + "/" + r.metric);
    }
    out += FormatCsvLine({r.model, r.dataset, r.group, FormatHyperparameters(r.hyperparameters),
                          r.metric, FormatRoundTrip(r.value),
                          r.seed ? std::to_string(*r.seed) : std::string()});
  }
  return out;
}

std::vector<ResultRow> ParseResults(std::string_view text) {
  auto records = ParseCsv(text);
  if (records.empty() || FormatCsvLine(records[0]) != std::string(kResultsHeader) + "\n") {
    throw FormatError("results csv must start with header '" + std::string(kResultsHeader) + "'");
  }
  std::vector<ResultRow> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() != 7) {
      throw FormatError("results row " + std::to_string(i) + " has " + std::to_string(f.size()) +
                        " fields, expected 7");
    }
    ResultRow r;
    r.model = f[0];
    r.dataset = f[1];
    r.group = f[2];
    r.hyperparameters = ParseHyperparameters(f[3]);
    r.metric = f[4];
    if (!ParseDouble(f[5], r.value) || !std::isfinite(r.value)) {
      throw DataError("results row " + std::to_string(i) + ": bad value '" + f[5] + "'");
    }
    if (!f[6].empty()) {
      std::int64_t seed;
      if (!ParseInt64(f[6], seed)) {
        throw DataError("results row " + std::to_string(i) + ": bad seed '" + f[6] + "'");
      }
      r.seed = seed;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> LoadResults(const std::filesystem::path& path) {
  try {
    return ParseResults(ReadFile(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteResults(std::vector<ResultRow> rows, const std::filesystem::path& path) {
  CheckUniqueResults(rows);
  SortResults(rows);
  WriteFileAtomic(path, EncodeResults(rows));
}

void AppendResults(std::span<const ResultRow> rows, const std::filesystem::path& path) {
  std::vector<ResultRow> all;
  if (std::filesystem::exists(path)) all = LoadResults(path);
  all.insert(all.end(), rows.begin(), rows.end());
  WriteResults(std::move(all), path);
}

}  // namespace imgeval
