// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace tfpauli {

/// Raised when a caller hands in data that violates an operation's
/// preconditions (grid mismatch, negative density, h <= 0, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot produce a trustworthy answer.
/// `diagnostics` carries a human-readable account of what was tried.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::string diagnostics = {})
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace tfpauli
