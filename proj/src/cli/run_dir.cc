// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/cli/run_dir.h"

#include <unistd.h>

#include <system_error>

#include "imgeval/error.h"
#include "imgeval/io.h"

namespace imgeval::cli {

namespace fs = std::filesystem;

namespace {

fs::path Sibling(const fs::path& target, std::string_view suffix) {
  fs::path name = target.filename();
  if (name.empty()) name = target.parent_path().filename();
  return target.parent_path() / ("." + name.string() + std::string(suffix) + "." +
                                 std::to_string(::getpid()));
}

}  // namespace

RunDirectory::RunDirectory(fs::path target) : target_(std::move(target)) {
  if (target_.empty()) throw SpecError("output directory not given");
  if (fs::exists(target_)) {
    if (!fs::is_directory(target_)) {
      throw Error("output path '" + target_.string() + "' exists and is not a directory");
    }
    if (!fs::is_empty(target_) && !fs::exists(target_ / kManifestName)) {
      throw Error("refusing to replace '" + target_.string() +
                  "': it is not empty and holds no " + std::string(kManifestName));
    }
  }
  if (target_.has_parent_path()) fs::create_directories(target_.parent_path());
  staging_ = Sibling(target_, ".staging");
  fs::remove_all(staging_);
  fs::create_directory(staging_);
}

RunDirectory::~RunDirectory() {
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
}

void RunDirectory::Write(std::string_view name, std::string_view bytes) const {
  WriteFileAtomic(Path(name), bytes);
}

void RunDirectory::WriteManifest(const nlohmann::ordered_json& manifest) const {
  Write(kManifestName, manifest.dump(2) + "\n");
}

void RunDirectory::Commit() {
  fs::path old;
  if (fs::exists(target_)) {
    old = Sibling(target_, ".previous");
    fs::remove_all(old);
    fs::rename(target_, old);
  }
  fs::rename(staging_, target_);
  committed_ = true;
  if (!old.empty()) fs::remove_all(old);
}

nlohmann::ordered_json DescribeInput(const fs::path& resolved, const std::string& display_path) {
  const std::string bytes = ReadFile(resolved);
  nlohmann::ordered_json j;
  j["path"] = display_path;
  j["bytes"] = bytes.size();
  j["fnv1a64"] = HexDigest(Fnv1a64(bytes));
  return j;
}

}  // namespace imgeval::cli
