// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace imgeval::cli {

// A scalar or a flat array from the config file. Numbers keep their source
// spelling so "7.5" round-trips into hyperparameter columns unchanged.
struct ConfigValue {
  enum class Type { kString, kNumber, kBool, kArray };
  Type type = Type::kString;
  std::string text;                  // string contents or number spelling
  bool boolean = false;
  std::vector<ConfigValue> items;    // kArray

  std::string AsString(std::string_view key) const;
  double AsDouble(std::string_view key) const;
  std::int64_t AsInt(std::string_view key) const;
  bool AsBool(std::string_view key) const;
  std::vector<std::string> AsStringList(std::string_view key) const;
  // Strings as-is, numbers by spelling, booleans as true/false.
  std::string Display() const;
};

using ConfigTable = std::map<std::string, ConfigValue>;

// Parsed file: table name ("" for top level) -> key -> value.
struct Config {
  std::map<std::string, ConfigTable> tables;
  std::filesystem::path base_dir;  // directory relative paths resolve against

  const ConfigTable& Root() const;
  // Tables whose name starts with `prefix` + "."; keys have the prefix removed.
  std::map<std::string, const ConfigTable*> Children(std::string_view prefix) const;
};

// Grammar (one item per line, '#' starts a comment outside strings):
//   [table.name]
//   key = "string" | 12 | -3.5e2 | true | false | ["a", "b", 1.0]
// Keys are bare words made of letters, digits, '_', '-' and '.'. Repeated
// keys or tables are errors. Throws SpecError with the line number.
Config ParseConfig(std::string_view text);
Config LoadConfig(const std::filesystem::path& path);

}  // namespace imgeval::cli
