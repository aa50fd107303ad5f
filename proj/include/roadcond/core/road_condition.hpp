// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace roadcond {

/// Road-surface classes. Declaration order is the canonical class order used
/// for matrix rows/columns and for argmax tie-breaking.
enum class RoadCondition : std::uint8_t { Dry, Wet, Snow, Offline, Poor, NonDry };

/// Labelling schemes used over the life of a dataset.
///   TwoClass:  Dry, NonDry
///   FourClass: Dry, Wet, Snow, Offline
///   FiveClass: Dry, Wet, Snow, Offline, Poor
enum class Scheme : std::uint8_t { TwoClass, FourClass, FiveClass };

std::span<const RoadCondition> classes_of(Scheme scheme);
std::size_t class_count(Scheme scheme);

/// Position of `c` in the scheme's class order, or nullopt if it is not a member.
std::optional<std::size_t> class_index(Scheme scheme, RoadCondition c);
bool in_scheme(Scheme scheme, RoadCondition c);

std::string_view to_string(RoadCondition c);
std::string_view to_string(Scheme s);

/// Case-insensitive; accepts the canonical names plus "non-dry"/"non_dry",
/// "snow/ice", "wet/moist" and "poor/dark".
std::optional<RoadCondition> parse_road_condition(std::string_view text);

/// Accepts "two"/"two_class"/"2", "four"/..., "five"/...
std::optional<Scheme> parse_scheme(std::string_view text);

/// Scheme with the given number of classes (2, 4 or 5).
std::optional<Scheme> scheme_for_class_count(std::size_t k);

}  // namespace roadcond
