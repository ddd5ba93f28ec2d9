// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace imgeval {

// Root of every error raised by the library. The CLI maps any Error to a
// nonzero exit code and prints what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file structure (bad magic, truncated payload, unparsable header).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed file describing an array layout we do not accept.
class UnsupportedLayout : public Error {
 public:
  using Error::Error;
};

// Values that violate a domain invariant (non-finite entry, bad index, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

class DuplicateResultError : public Error {
 public:
  using Error::Error;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Invalid metric, plot or dataset configuration.
class SpecError : public Error {
 public:
  using Error::Error;
};

// Operation not supported by a metric kind (e.g. update_real on CLIPScore).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Rethrows the in-flight imgeval error with `prefix` prepended to its
// message, keeping its dynamic type. Call only inside a catch block.
[[noreturn]] void RethrowWithContext(const std::string& prefix);

}  // namespace imgeval
