// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/records.h"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "imgeval/error.h"
#include "imgeval/io.h"

namespace imgeval {

namespace {

std::string JoinIds(const std::vector<std::string>& ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  return out + "]";
}

enum class Mark { kWhite, kGray, kBlack };

void Visit(const std::string& node, const DsgGraph& g,
           std::map<std::string, Mark>& marks, std::vector<std::string>& stack) {
  marks[node] = Mark::kGray;
  stack.push_back(node);
  if (auto it = g.parents.find(node); it != g.parents.end()) {
    for (const auto& parent : it->second) {
      Mark m = marks[parent];
      if (m == Mark::kGray) {
        auto start = std::find(stack.begin(), stack.end(), parent);
        throw GraphError("DSG parent relation has cycle " +
                         JoinIds(std::vector<std::string>(start, stack.end())));
      }
      if (m == Mark::kWhite) Visit(parent, g, marks, stack);
    }
  }
  stack.pop_back();
  marks[node] = Mark::kBlack;
}

}  // namespace

void DsgGraph::Validate() const {
  std::set<std::string> known;
  for (const auto& q : question_ids) {
    if (q.empty()) throw GraphError("empty DSG question id");
    if (!known.insert(q).second) throw GraphError("duplicate DSG question id '" + q + "'");
  }
  for (const auto& [child, ps] : parents) {
    if (!known.count(child)) throw GraphError("DSG parents refer to unknown question '" + child + "'");
    for (const auto& p : ps) {
      if (!known.count(p)) {
        throw GraphError("DSG question '" + child + "' has unknown parent '" + p + "'");
      }
    }
  }
  std::map<std::string, Mark> marks;
  for (const auto& q : question_ids) marks[q] = Mark::kWhite;
  std::vector<std::string> stack;
  for (const auto& q : question_ids) {
    if (marks[q] == Mark::kWhite) Visit(q, *this, marks, stack);
  }
}

std::vector<std::string> DsgGraph::TopologicalOrder() const {
  Validate();
  std::vector<std::string> order;
  std::set<std::string> placed;
  order.reserve(question_ids.size());
  // Repeated scans keep question_ids order among ready nodes; graphs are small.
  while (order.size() < question_ids.size()) {
    for (const auto& q : question_ids) {
      if (placed.count(q)) continue;
      bool ready = true;
      if (auto it = parents.find(q); it != parents.end()) {
        for (const auto& p : it->second) ready = ready && placed.count(p);
      }
      if (ready) {
        order.push_back(q);
        placed.insert(q);
      }
    }
  }
  return order;
}

bool SampleRecord::InGroup(std::string_view group) const {
  if (group == kAllGroup) return true;
  return std::find(groups.begin(), groups.end(), group) != groups.end();
}

namespace {

std::vector<std::string> StringArray(const nlohmann::json& j, const char* field,
                                     std::size_t line) {
  if (!j.is_array()) {
    throw DataError("line " + std::to_string(line + 1) + ": field '" + field +
                    "' must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) {
      throw DataError("line " + std::to_string(line + 1) + ": field '" + field +
                      "' must contain only strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::optional<std::string> OptionalString(const nlohmann::json& obj, const char* field,
                                          std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw DataError("line " + std::to_string(line + 1) + ": field '" + field +
                    "' must be a string");
  }
  return it->get<std::string>();
}

SampleRecord ParseRecord(std::string_view line_text, std::size_t line) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("line " + std::to_string(line + 1) + ": " + e.what());
  }
  if (!obj.is_object()) throw DataError("line " + std::to_string(line + 1) + ": not an object");

  SampleRecord r;
  r.index = line;
  if (auto it = obj.find("index"); it != obj.end()) {
    if (!it->is_number_unsigned()) {
      throw DataError("line " + std::to_string(line + 1) + ": index must be a non-negative integer");
    }
    auto explicit_index = it->get<std::uint64_t>();
    if (explicit_index != line) {
      throw DataError("line " + std::to_string(line + 1) + ": explicit index " +
                      std::to_string(explicit_index) + " does not match row " +
                      std::to_string(line));
    }
  }
  r.prompt = OptionalString(obj, "prompt", line);
  r.class_label = OptionalString(obj, "class_label", line);
  if (auto it = obj.find("groups"); it != obj.end() && !it->is_null()) {
    r.groups = StringArray(*it, "groups", line);
    for (const auto& g : r.groups) {
      if (g.empty()) throw DataError("line " + std::to_string(line + 1) + ": empty group tag");
      if (g == kAllGroup) {
        throw DataError("line " + std::to_string(line + 1) + ": group tag 'ALL' is reserved");
      }
      if (std::count(r.groups.begin(), r.groups.end(), g) > 1) {
        throw DataError("line " + std::to_string(line + 1) + ": repeated group tag '" + g + "'");
      }
    }
  }
  if (auto it = obj.find("tags"); it != obj.end() && !it->is_null()) {
    r.tags = StringArray(*it, "tags", line);
  }
  if (auto it = obj.find("dsg"); it != obj.end() && !it->is_null()) {
    if (!it->is_object()) throw DataError("line " + std::to_string(line + 1) + ": dsg must be an object");
    DsgGraph g;
    if (auto q = it->find("questions"); q != it->end()) g.question_ids = StringArray(*q, "dsg.questions", line);
    if (auto p = it->find("parents"); p != it->end() && !p->is_null()) {
      if (!p->is_object()) {
        throw DataError("line " + std::to_string(line + 1) + ": dsg.parents must be an object");
      }
      for (const auto& [child, ps] : p->items()) {
        g.parents[child] = StringArray(ps, "dsg.parents", line);
      }
    }
    try {
      g.Validate();
    } catch (const GraphError& e) {
      throw GraphError("line " + std::to_string(line + 1) + ": " + e.what());
    }
    r.dsg = std::move(g);
  }
  return r;
}

}  // namespace

std::vector<SampleRecord> ParseMetadata(std::string_view text) {
  std::vector<SampleRecord> out;
  std::size_t pos = 0;
  std::size_t line = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line_text = text.substr(pos, end - pos);
    if (!line_text.empty() && line_text.back() == '\r') line_text.remove_suffix(1);
    if (line_text.find_first_not_of(" \t") == std::string_view::npos) {
      throw DataError("line " + std::to_string(line + 1) + ": blank metadata line");
    }
    out.push_back(ParseRecord(line_text, line));
    pos = end + 1;
    ++line;
  }
  return out;
}

std::vector<SampleRecord> LoadMetadata(const std::filesystem::path& path) {
  std::string text = ReadFile(path);
  try {
    return ParseMetadata(text);
  } catch (const GraphError& e) {
    throw GraphError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string EncodeMetadata(std::span<const SampleRecord> records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    if (r.prompt) j["prompt"] = *r.prompt;
    if (r.class_label) j["class_label"] = *r.class_label;
    if (!r.groups.empty()) j["groups"] = r.groups;
    if (!r.tags.empty()) j["tags"] = r.tags;
    if (r.dsg) {
      nlohmann::ordered_json dsg;
      dsg["questions"] = r.dsg->question_ids;
      nlohmann::ordered_json parents = nlohmann::ordered_json::object();
      for (const auto& [child, ps] : r.dsg->parents) parents[child] = ps;
      dsg["parents"] = parents;
      j["dsg"] = dsg;
    }
    if (j.is_null()) j = nlohmann::ordered_json::object();
    out += j.dump();
    out += '\n';
  }
  return out;
}

void WriteMetadata(std::span<const SampleRecord> records, const std::filesystem::path& path) {
  WriteFileAtomic(path, EncodeMetadata(records));
}

}  // namespace imgeval
