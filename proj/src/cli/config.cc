// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/cli/config.h"

#include <cctype>

#include "imgeval/error.h"
#include "imgeval/io.h"

namespace imgeval::cli {

namespace {

[[noreturn]] void Fail(std::size_t line, const std::string& message) {
  throw SpecError("config line " + std::to_string(line) + ": " + message);
}

bool IsKeyChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void SkipSpace() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  bool AtEnd() {
    SkipSpace();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }
  char Peek() {
    SkipSpace();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void Expect(char c) {
    if (Peek() != c) Fail(line_, std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string Key() {
    SkipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() && IsKeyChar(text_[pos_])) ++pos_;
    if (start == pos_) Fail(line_, "expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }

  ConfigValue Value() {
    char c = Peek();
    ConfigValue v;
    if (c == '"') {
      ++pos_;
      v.type = ConfigValue::Type::kString;
      while (true) {
        if (pos_ >= text_.size()) Fail(line_, "unterminated string");
        char ch = text_[pos_++];
        if (ch == '"') break;
        if (ch == '\\') {
          if (pos_ >= text_.size()) Fail(line_, "unterminated escape");
          char e = text_[pos_++];
          switch (e) {
            case 'n':
              v.text.push_back('\n');
              break;
            case 't':
              v.text.push_back('\t');
              break;
            case '"':
            case '\\':
              v.text.push_back(e);
              break;
            default:
              Fail(line_, std::string("unsupported escape \\") + e);
          }
        } else {
          v.text.push_back(ch);
        }
      }
      return v;
    }
    if (c == '[') {
      ++pos_;
      v.type = ConfigValue::Type::kArray;
      if (Peek() == ']') {
        ++pos_;
        return v;
      }
      while (true) {
        v.items.push_back(Value());
        if (v.items.back().type == ConfigValue::Type::kArray) Fail(line_, "nested arrays are not supported");
        char next = Peek();
        ++pos_;
        if (next == ']') break;
        if (next != ',') Fail(line_, "expected ',' or ']' in array");
        if (Peek() == ']') {
          ++pos_;
          break;
        }
      }
      return v;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '#') {
      ++pos_;
    }
    std::string word(text_.substr(start, pos_ - start));
    if (word == "true" || word == "false") {
      v.type = ConfigValue::Type::kBool;
      v.boolean = word == "true";
      v.text = word;
      return v;
    }
    double number;
    if (!ParseDouble(word, number)) Fail(line_, "cannot parse value '" + word + "'");
    v.type = ConfigValue::Type::kNumber;
    v.text = word;
    return v;
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

[[noreturn]] void TypeError(std::string_view key, const char* want) {
  throw SpecError("config key '" + std::string(key) + "' must be " + want);
}

}  // namespace

std::string ConfigValue::AsString(std::string_view key) const {
  if (type != Type::kString) TypeError(key, "a string");
  return text;
}

double ConfigValue::AsDouble(std::string_view key) const {
  double v;
  if (type != Type::kNumber || !ParseDouble(text, v)) TypeError(key, "a number");
  return v;
}

std::int64_t ConfigValue::AsInt(std::string_view key) const {
  std::int64_t v;
  if (type != Type::kNumber || !ParseInt64(text, v)) TypeError(key, "an integer");
  return v;
}

bool ConfigValue::AsBool(std::string_view key) const {
  if (type != Type::kBool) TypeError(key, "true or false");
  return boolean;
}

std::vector<std::string> ConfigValue::AsStringList(std::string_view key) const {
  if (type != Type::kArray) TypeError(key, "an array of strings");
  std::vector<std::string> out;
  for (const auto& item : items) out.push_back(item.AsString(key));
  return out;
}

std::string ConfigValue::Display() const {
  if (type == Type::kArray) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i].Display();
    return out + "]";
  }
  return text;
}

const ConfigTable& Config::Root() const {
  static const ConfigTable kEmpty;
  auto it = tables.find("");
  return it == tables.end() ? kEmpty : it->second;
}

std::map<std::string, const ConfigTable*> Config::Children(std::string_view prefix) const {
  std::map<std::string, const ConfigTable*> out;
  const std::string p = std::string(prefix) + ".";
  for (const auto& [name, table] : tables) {
    if (name.size() > p.size() && name.compare(0, p.size(), p) == 0) {
      out[name.substr(p.size())] = &table;
    }
  }
  return out;
}

Config ParseConfig(std::string_view text) {
  Config config;
  config.tables[""];
  std::string current;
  std::size_t pos = 0, line = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    pos = end + 1;
    ++line;
    LineParser p(raw, line);
    if (p.AtEnd()) continue;
    if (p.Peek() == '[') {
      p.Expect('[');
      current = p.Key();
      p.Expect(']');
      if (!p.AtEnd()) Fail(line, "unexpected text after table header");
      if (!config.tables.emplace(current, ConfigTable{}).second) {
        Fail(line, "table [" + current + "] defined twice");
      }
      continue;
    }
    std::string key = p.Key();
    p.Expect('=');
    ConfigValue value = p.Value();
    if (!p.AtEnd()) Fail(line, "unexpected text after value");
    if (!config.tables[current].emplace(key, std::move(value)).second) {
      Fail(line, "key '" + key + "' repeated");
    }
  }
  return config;
}

Config LoadConfig(const std::filesystem::path& path) {
  Config config;
  try {
    config = ParseConfig(ReadFile(path));
  } catch (const SpecError& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
  config.base_dir = path.parent_path();
  return config;
}

}  // namespace imgeval::cli
