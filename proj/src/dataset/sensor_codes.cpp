// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/dataset/sensor_codes.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "roadcond/core/error.hpp"

namespace roadcond::dataset {

SensorCodeTable::SensorCodeTable(std::map<int, std::optional<RoadCondition>> codes)
    : codes_(std::move(codes)) {}

SensorCodeTable SensorCodeTable::defaults() {
  using RC = RoadCondition;
  std::map<int, std::optional<RC>> codes{{1, RC::Dry}};
  for (int c : {2, 3, 4, 5, 15}) codes[c] = RC::Wet;
  for (int c : {6, 8, 18, 21, 22, 23}) codes[c] = RC::Snow;
  for (int c : {7, 16, 24}) codes[c] = std::nullopt;
  return SensorCodeTable(std::move(codes));
}

SensorCodeTable SensorCodeTable::parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("sensor code table: {}", e.what()));
  }
  if (!doc.is_object() || !doc.contains("codes") || !doc["codes"].is_object()) {
    throw Error("sensor code table: expected {\"codes\": {...}}");
  }
  std::map<int, std::optional<RoadCondition>> codes;
  for (const auto& [key, value] : doc["codes"].items()) {
    int code = 0;
    if (std::from_chars(key.data(), key.data() + key.size(), code).ptr != key.data() + key.size()) {
      throw Error(fmt::format("sensor code table: key '{}' is not an integer", key));
    }
    if (value.is_null()) {
      codes[code] = std::nullopt;
      continue;
    }
    const auto c = value.is_string() ? parse_road_condition(value.get<std::string>()) : std::nullopt;
    if (!c) throw Error(fmt::format("sensor code table: code {} maps to unknown class {}", code, value.dump()));
    codes[code] = *c;
  }
  return SensorCodeTable(std::move(codes));
}

SensorCodeTable SensorCodeTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

std::optional<RoadCondition> SensorCodeTable::map(int code, Scheme scheme) const {
  const auto it = codes_.find(code);
  if (it == codes_.end() || !it->second) return std::nullopt;
  RoadCondition c = *it->second;
  if (scheme == Scheme::TwoClass && c != RoadCondition::Dry) c = RoadCondition::NonDry;
  if (!in_scheme(scheme, c)) return std::nullopt;
  return c;
}

}  // namespace roadcond::dataset
