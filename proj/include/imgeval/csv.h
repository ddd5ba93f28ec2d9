// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace imgeval {

// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
// A trailing newline does not produce an extra record.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string EscapeCsvField(std::string_view field);

std::string FormatCsvLine(const std::vector<std::string>& fields);

}  // namespace imgeval
