// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadcond/classifier/classify.hpp"

namespace roadcond::mapgen {

using classifier::LabelRecord;

/// Inclusive latitude/longitude box. Does not wrap the antimeridian.
struct BoundingBox {
  double min_lat = -90.0;
  double min_lon = -180.0;
  double max_lat = 90.0;
  double max_lon = 180.0;

  bool contains(double lat, double lon) const;
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Two opposite corners in any order.
BoundingBox make_bbox(double lat1, double lon1, double lat2, double lon2);
/// Parses "lat1,lon1,lat2,lon2".
BoundingBox parse_bbox(std::string_view text);

using ColorMap = std::map<RoadCondition, std::string>;

ColorMap default_colors();

/// Throws roadcond::Error if a class in `classes` has no colour or two of
/// them share one (compared case-insensitively).
void validate_colors(const ColorMap& colors, std::span<const RoadCondition> classes);

struct Feature {
  std::string camera_id;
  double latitude = 0.0;
  double longitude = 0.0;
  RoadCondition label = RoadCondition::Dry;
  double confidence = 0.0;
  Timestamp timestamp;

  friend bool operator==(const Feature&, const Feature&) = default;
};

struct LayerOptions {
  std::optional<BoundingBox> region;
  std::chrono::seconds stale_after{3600};
  std::set<RoadCondition> hidden;
  ColorMap colors = default_colors();
};

struct MapLayer {
  /// Sorted by camera_id, at most one per camera.
  std::vector<Feature> features;
  /// Colours of the classes that occur in `features`.
  ColorMap legend;
  std::optional<BoundingBox> region;

  const std::string& color_of(RoadCondition c) const;
};

/// Keeps the newest record per camera (on equal timestamps the later input
/// wins), drops it if older than now - stale_after, then applies the region
/// and hidden-class filters.
MapLayer build_layer(std::span<const LabelRecord> records, const LayerOptions& options, Timestamp now);

std::vector<LabelRecord> to_records(const MapLayer& layer);

}  // namespace roadcond::mapgen
