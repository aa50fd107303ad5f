// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/mapgen/layer.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include <fmt/format.h>

#include "roadcond/core/csv.hpp"
#include "roadcond/core/error.hpp"

namespace roadcond::mapgen {

bool BoundingBox::contains(double lat, double lon) const {
  return lat >= min_lat && lat <= max_lat && lon >= min_lon && lon <= max_lon;
}

BoundingBox make_bbox(double lat1, double lon1, double lat2, double lon2) {
  if (lat1 < -90 || lat1 > 90 || lat2 < -90 || lat2 > 90) throw Error("bbox latitude out of range");
  if (lon1 < -180 || lon1 > 180 || lon2 < -180 || lon2 > 180) throw Error("bbox longitude out of range");
  return {std::min(lat1, lat2), std::min(lon1, lon2), std::max(lat1, lat2), std::max(lon1, lon2)};
}

BoundingBox parse_bbox(std::string_view text) {
  const auto fields = csv::split_line(text);
  if (!fields || fields->size() != 4) throw Error(fmt::format("region '{}' is not lat1,lon1,lat2,lon2", text));
  double v[4];
  for (int i = 0; i < 4; ++i) {
    const auto d = csv::parse_double((*fields)[i]);
    if (!d) throw Error(fmt::format("region '{}' has a malformed number '{}'", text, (*fields)[i]));
    v[i] = *d;
  }
  return make_bbox(v[0], v[1], v[2], v[3]);
}

ColorMap default_colors() {
  return {{RoadCondition::Dry, "#2e9e44"},     {RoadCondition::Wet, "#1f5fd6"},
          {RoadCondition::Snow, "#ffffff"},    {RoadCondition::Offline, "#000000"},
          {RoadCondition::Poor, "#8c8c8c"},    {RoadCondition::NonDry, "#f28c28"}};
}

void validate_colors(const ColorMap& colors, std::span<const RoadCondition> classes) {
  std::map<std::string, RoadCondition> used;
  for (auto c : classes) {
    const auto it = colors.find(c);
    if (it == colors.end() || it->second.empty()) throw Error(fmt::format("no colour for class {}", to_string(c)));
    std::string key = it->second;
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
    const auto [prev, inserted] = used.emplace(key, c);
    if (!inserted && prev->second != c) {
      throw Error(fmt::format("classes {} and {} share colour {}", to_string(prev->second), to_string(c), it->second));
    }
  }
}

const std::string& MapLayer::color_of(RoadCondition c) const {
  const auto it = legend.find(c);
  if (it == legend.end()) throw Error(fmt::format("class {} is not in the layer legend", to_string(c)));
  return it->second;
}

MapLayer build_layer(std::span<const LabelRecord> records, const LayerOptions& options, Timestamp now) {
  std::unordered_map<std::string_view, const LabelRecord*> latest;
  for (const auto& r : records) {
    auto& slot = latest[r.camera_id];
    if (!slot || r.timestamp >= slot->timestamp) slot = &r;
  }

  MapLayer layer;
  layer.region = options.region;
  const Timestamp cutoff = now - options.stale_after;
  for (const auto& [id, r] : latest) {
    if (r->timestamp < cutoff) continue;
    if (options.region && !options.region->contains(r->latitude, r->longitude)) continue;
    if (options.hidden.contains(r->label)) continue;
    layer.features.push_back({r->camera_id, r->latitude, r->longitude, r->label, r->confidence, r->timestamp});
  }
  std::sort(layer.features.begin(), layer.features.end(),
            [](const Feature& a, const Feature& b) { return a.camera_id < b.camera_id; });

  std::vector<RoadCondition> present;
  for (const auto& f : layer.features) {
    if (std::find(present.begin(), present.end(), f.label) == present.end()) present.push_back(f.label);
  }
  validate_colors(options.colors, present);
  for (auto c : present) layer.legend[c] = options.colors.at(c);
  return layer;
}

std::vector<LabelRecord> to_records(const MapLayer& layer) {
  std::vector<LabelRecord> out;
  out.reserve(layer.features.size());
  for (const auto& f : layer.features) {
    out.push_back({f.camera_id, f.timestamp, f.label, f.confidence, f.latitude, f.longitude});
  }
  return out;
}

}  // namespace roadcond::mapgen
