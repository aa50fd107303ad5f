// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "roadcond/mapgen/layer.hpp"

namespace roadcond::mapgen {

/// RFC 7946 FeatureCollection; Point coordinates are [lon, lat]. Properties:
/// class, confidence, camera_id, timestamp (ISO 8601 UTC), color.
std::string emit_geojson(const MapLayer& layer);

/// Reads back a FeatureCollection written by emit_geojson.
std::vector<LabelRecord> parse_geojson(std::string_view text);

/// Single self-contained HTML page: inline SVG markers on an equirectangular
/// projection plus a legend of the classes present.
std::string emit_html(const MapLayer& layer, std::string_view title = "Road conditions");

}  // namespace roadcond::mapgen
