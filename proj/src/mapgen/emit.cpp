// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/mapgen/emit.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <json.hpp>

#include "roadcond/core/error.hpp"

namespace roadcond::mapgen {

std::string emit_geojson(const MapLayer& layer) {
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (const auto& f : layer.features) {
    features.push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", {f.longitude, f.latitude}}}},
        {"properties",
         {{"class", std::string(to_string(f.label))},
          {"confidence", f.confidence},
          {"camera_id", f.camera_id},
          {"timestamp", format_iso8601(f.timestamp)},
          {"color", layer.color_of(f.label)}}},
    });
  }
  nlohmann::ordered_json doc{{"type", "FeatureCollection"}, {"features", std::move(features)}};
  if (layer.region) {
    doc["bbox"] = {layer.region->min_lon, layer.region->min_lat, layer.region->max_lon, layer.region->max_lat};
  }
  return doc.dump() + "\n";
}

std::vector<LabelRecord> parse_geojson(std::string_view text) {
  std::vector<LabelRecord> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("type") != "FeatureCollection") throw Error("GeoJSON is not a FeatureCollection");
    const auto& features = doc.at("features");
    for (std::size_t i = 0; i < features.size(); ++i) {
      const auto& f = features[i];
      const auto& coords = f.at("geometry").at("coordinates");
      const auto& p = f.at("properties");
      const auto label = parse_road_condition(p.at("class").get<std::string>());
      if (!label) throw Error(fmt::format("feature {}: unknown class", i));
      LabelRecord r;
      r.camera_id = p.at("camera_id").get<std::string>();
      r.timestamp = parse_iso8601(p.at("timestamp").get<std::string>());
      r.label = *label;
      r.confidence = p.at("confidence").get<double>();
      r.longitude = coords.at(0).get<double>();
      r.latitude = coords.at(1).get<double>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("malformed GeoJSON: {}", e.what()));
  }
  return out;
}

namespace {

std::string escape_html(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string emit_html(const MapLayer& layer, std::string_view title) {
  constexpr double kWidth = 960, kHeight = 600, kPad = 20;

  BoundingBox view;
  if (layer.region) {
    view = *layer.region;
  } else if (!layer.features.empty()) {
    view = {90, 180, -90, -180};
    for (const auto& f : layer.features) {
      view.min_lat = std::min(view.min_lat, f.latitude);
      view.max_lat = std::max(view.max_lat, f.latitude);
      view.min_lon = std::min(view.min_lon, f.longitude);
      view.max_lon = std::max(view.max_lon, f.longitude);
    }
  }
  const double lat_span = std::max(view.max_lat - view.min_lat, 1e-6);
  const double lon_span = std::max(view.max_lon - view.min_lon, 1e-6);
  const auto px = [&](double lon) { return kPad + (lon - view.min_lon) / lon_span * (kWidth - 2 * kPad); };
  const auto py = [&](double lat) { return kPad + (view.max_lat - lat) / lat_span * (kHeight - 2 * kPad); };

  std::string out;
  out += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  out += fmt::format("<title>{}</title>\n", escape_html(title));
  out += "<style>\n"
         "body{font-family:sans-serif;margin:16px;background:#f4f4f0}\n"
         "svg{background:#dfe8ee;border:1px solid #999}\n"
         ".legend{list-style:none;padding:0}\n"
         ".legend li{display:inline-block;margin-right:16px}\n"
         ".swatch{display:inline-block;width:12px;height:12px;border:1px solid #333;"
         "border-radius:50%;margin-right:4px;vertical-align:middle}\n"
         "</style>\n</head>\n<body>\n";
  out += fmt::format("<h1>{}</h1>\n<p>{} classified camera images</p>\n", escape_html(title), layer.features.size());
  out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
                     kWidth, kHeight, kWidth, kHeight);
  for (const auto& f : layer.features) {
    out += fmt::format(
        "<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"5\" fill=\"{}\" stroke=\"#333\" stroke-width=\"1\" "
        "data-camera=\"{}\" data-class=\"{}\"><title>{} {} {:.2f} {}</title></circle>\n",
        px(f.longitude), py(f.latitude), escape_html(layer.color_of(f.label)), escape_html(f.camera_id),
        to_string(f.label), escape_html(f.camera_id), to_string(f.label), f.confidence, format_iso8601(f.timestamp));
  }
  out += "</svg>\n<ul class=\"legend\">\n";
  for (const auto& [c, color] : layer.legend) {
    const auto n = std::count_if(layer.features.begin(), layer.features.end(),
                                 [c = c](const Feature& f) { return f.label == c; });
    out += fmt::format("<li data-class=\"{}\"><span class=\"swatch\" style=\"background:{}\"></span>{} ({})</li>\n",
                       to_string(c), escape_html(color), to_string(c), n);
  }
  out += "</ul>\n</body>\n</html>\n";
  return out;
}

}  // namespace roadcond::mapgen
