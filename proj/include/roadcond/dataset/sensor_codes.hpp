// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string_view>

#include "roadcond/core/road_condition.hpp"

namespace roadcond::dataset {

/// Road-condition sensor codes to image classes. Codes map to a granular
/// class (Dry, Wet, Snow, ...) or to nothing. Under the two-class scheme
/// every mapped class other than Dry becomes NonDry.
class SensorCodeTable {
 public:
  SensorCodeTable() = default;
  explicit SensorCodeTable(std::map<int, std::optional<RoadCondition>> codes);

  /// 1 Dry; 2, 3, 4, 5, 15 Wet; 6, 8, 18, 21, 22, 23 Snow; 7, 16, 24 unmapped.
  static SensorCodeTable defaults();

  /// {"codes": {"1": "Dry", "7": null, ...}}. Throws roadcond::Error on
  /// malformed input.
  static SensorCodeTable parse_json(std::string_view text);
  static SensorCodeTable load(const std::filesystem::path& path);

  /// nullopt for unmapped or unknown codes, or when the class is not part
  /// of the scheme.
  std::optional<RoadCondition> map(int code, Scheme scheme) const;

  const std::map<int, std::optional<RoadCondition>>& codes() const { return codes_; }

 private:
  std::map<int, std::optional<RoadCondition>> codes_;
};

}  // namespace roadcond::dataset
