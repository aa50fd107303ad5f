// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace roadcond {

/// UTC instant at second resolution.
using Timestamp = std::chrono::sys_seconds;

Timestamp now_utc();

/// "2020-01-11T21:00:00Z"
std::string format_iso8601(Timestamp t);

/// Accepts "YYYY-MM-DDTHH:MM:SSZ", "YYYY-MM-DD HH:MM:SS" and an optional
/// "+00:00" suffix. Throws roadcond::Error on anything else.
Timestamp parse_iso8601(std::string_view text);

/// "20200111T210000Z", used in file and image names.
std::string format_compact(Timestamp t);
Timestamp parse_compact(std::string_view text);

/// "20200111"
std::string format_day(Timestamp t);

}  // namespace roadcond
