// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace imgeval::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kManifestName = "manifest.json";

// Output directory that only becomes visible once complete. Files are written
// into a staging sibling; Commit() swaps it into place. An existing target is
// replaced only if it is empty or holds a manifest from an earlier run.
// Destroying an uncommitted RunDirectory removes the staging directory.
class RunDirectory {
 public:
  explicit RunDirectory(std::filesystem::path target);
  ~RunDirectory();
  RunDirectory(const RunDirectory&) = delete;
  RunDirectory& operator=(const RunDirectory&) = delete;

  const std::filesystem::path& target() const { return target_; }
  std::filesystem::path Path(std::string_view name) const { return staging_ / name; }
  void Write(std::string_view name, std::string_view bytes) const;
  void WriteManifest(const nlohmann::ordered_json& manifest) const;
  void Commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path staging_;
  bool committed_ = false;
};

// {"path": as given, "bytes": size, "fnv1a64": hex digest of contents}.
nlohmann::ordered_json DescribeInput(const std::filesystem::path& resolved,
                                     const std::string& display_path);

}  // namespace imgeval::cli
