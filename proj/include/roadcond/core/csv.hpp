// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace roadcond::csv {

/// Splits one comma-delimited line. Fields may be double-quoted; "" inside a
/// quoted field is a literal quote. Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_line(std::string_view line);

/// Quotes the field only when it contains a comma, quote or newline.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

/// Trims ASCII whitespace (and a trailing '\r').
std::string_view trim(std::string_view text);

/// Strict numeric parse of the whole field.
std::optional<double> parse_double(std::string_view text);

}  // namespace roadcond::csv
