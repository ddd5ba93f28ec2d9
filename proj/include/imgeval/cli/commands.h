// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "imgeval/results.h"

namespace imgeval::cli {

// Exit codes of RunCli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;       // any library or I/O error
inline constexpr int kExitUsage = 2;       // bad command line
inline constexpr int kExitImbalanced = 3;  // validate-balance found deficient cells

// Concatenates result tables, drops rows repeated verbatim, and orders by
// (model, dataset, metric, axis value, canonical rest). Axis values compare
// numerically when both parse as numbers. Throws ConflictError when one key
// carries two different values, DataError when a row lacks the axis.
std::vector<ResultRow> SweepCollect(std::span<const std::vector<ResultRow>> tables,
                                    std::string_view axis);

// Entry point of the imgeval executable.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace imgeval::cli
