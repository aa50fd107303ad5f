// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/core/road_condition.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

namespace roadcond {
namespace {

constexpr std::array kTwo{RoadCondition::Dry, RoadCondition::NonDry};
constexpr std::array kFour{RoadCondition::Dry, RoadCondition::Wet, RoadCondition::Snow,
                           RoadCondition::Offline};
constexpr std::array kFive{RoadCondition::Dry, RoadCondition::Wet, RoadCondition::Snow,
                           RoadCondition::Offline, RoadCondition::Poor};

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

}  // namespace

std::span<const RoadCondition> classes_of(Scheme scheme) {
  switch (scheme) {
    case Scheme::TwoClass:
      return kTwo;
    case Scheme::FourClass:
      return kFour;
    case Scheme::FiveClass:
      return kFive;
  }
  return {};
}

std::size_t class_count(Scheme scheme) { return classes_of(scheme).size(); }

std::optional<std::size_t> class_index(Scheme scheme, RoadCondition c) {
  const auto classes = classes_of(scheme);
  const auto it = std::find(classes.begin(), classes.end(), c);
  if (it == classes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - classes.begin());
}

bool in_scheme(Scheme scheme, RoadCondition c) { return class_index(scheme, c).has_value(); }

std::string_view to_string(RoadCondition c) {
  switch (c) {
    case RoadCondition::Dry:
      return "Dry";
    case RoadCondition::Wet:
      return "Wet";
    case RoadCondition::Snow:
      return "Snow";
    case RoadCondition::Offline:
      return "Offline";
    case RoadCondition::Poor:
      return "Poor";
    case RoadCondition::NonDry:
      return "NonDry";
  }
  return "?";
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::TwoClass:
      return "two_class";
    case Scheme::FourClass:
      return "four_class";
    case Scheme::FiveClass:
      return "five_class";
  }
  return "?";
}

std::optional<RoadCondition> parse_road_condition(std::string_view text) {
  const std::string t = lower(text);
  if (t == "dry") return RoadCondition::Dry;
  if (t == "wet" || t == "wet/moist") return RoadCondition::Wet;
  if (t == "snow" || t == "snow/ice" || t == "snow/slush") return RoadCondition::Snow;
  if (t == "offline") return RoadCondition::Offline;
  if (t == "poor" || t == "poor/dark") return RoadCondition::Poor;
  if (t == "nondry" || t == "non-dry" || t == "non_dry") return RoadCondition::NonDry;
  return std::nullopt;
}

std::optional<Scheme> parse_scheme(std::string_view text) {
  const std::string t = lower(text);
  if (t == "two" || t == "two_class" || t == "2") return Scheme::TwoClass;
  if (t == "four" || t == "four_class" || t == "4") return Scheme::FourClass;
  if (t == "five" || t == "five_class" || t == "5") return Scheme::FiveClass;
  return std::nullopt;
}

std::optional<Scheme> scheme_for_class_count(std::size_t k) {
  switch (k) {
    case 2:
      return Scheme::TwoClass;
    case 4:
      return Scheme::FourClass;
    case 5:
      return Scheme::FiveClass;
    default:
      return std::nullopt;
  }
}

}  // namespace roadcond
