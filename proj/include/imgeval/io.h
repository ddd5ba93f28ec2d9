// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace imgeval {

// Whole-file read; throws FormatError naming the path when it cannot be opened.
std::string ReadFile(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view bytes);

// 64-bit FNV-1a. Used for dataset-name keyed seeding and input digests.
std::uint64_t Fnv1a64(std::string_view bytes);

std::string HexDigest(std::uint64_t value);

// Shortest decimal string that parses back to exactly `value`.
std::string FormatRoundTrip(double value);

// Fixed six-significant-digit formatting used for plot labels. Negative zero
// prints as "0".
std::string FormatSig6(double value);

// Full-string parse; returns false on trailing garbage or empty input.
bool ParseDouble(std::string_view text, double& out);
bool ParseInt64(std::string_view text, std::int64_t& out);

}  // namespace imgeval
