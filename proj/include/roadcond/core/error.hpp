// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace roadcond {

/// Base for every domain-level failure raised by the library. The CLI maps
/// these to exit code 1; anything else is treated as a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace roadcond
