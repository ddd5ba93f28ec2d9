// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/error.h"

#include <exception>

namespace imgeval {

namespace {

template <typename T>
bool TryRethrow(const Error& e, const std::string& message) {
  if (dynamic_cast<const T*>(&e) == nullptr) return false;
  throw T(message);
}

}  // namespace

void RethrowWithContext(const std::string& prefix) {
  try {
    throw;
  } catch (const Error& e) {
    const std::string m = prefix + e.what();
    TryRethrow<FormatError>(e, m) || TryRethrow<UnsupportedLayout>(e, m) ||
        TryRethrow<DataError>(e, m) || TryRethrow<GraphError>(e, m) ||
        TryRethrow<DuplicateResultError>(e, m) || TryRethrow<ConflictError>(e, m) ||
        TryRethrow<InsufficientSamples>(e, m) || TryRethrow<ShapeError>(e, m) ||
        TryRethrow<NumericalError>(e, m) || TryRethrow<SpecError>(e, m) ||
        TryRethrow<ContractError>(e, m);
    throw Error(m);
  }
}

}  // namespace imgeval
