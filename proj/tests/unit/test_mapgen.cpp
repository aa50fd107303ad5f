// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <set>

#include <json.hpp>

#include "roadcond/core/random.hpp"
#include "roadcond/core/time.hpp"
#include "roadcond/mapgen/emit.hpp"
#include "roadcond/mapgen/layer.hpp"
#include "roadcond/pipeline/record_store.hpp"
#include "test_support.hpp"

using namespace roadcond;
using namespace roadcond::mapgen;
using roadcond::testing::fixture;

namespace {

const Timestamp kNoon = parse_iso8601("2026-01-15T12:00:00Z");

LabelRecord rec(std::string id, RoadCondition label, Timestamp t, double lat = 45.0, double lon = -75.0,
                double confidence = 0.9) {
  return {std::move(id), t, label, confidence, lat, lon};
}

std::vector<LabelRecord> random_records(SplitMix64& rng, std::size_t n) {
  std::vector<LabelRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto label = classes_of(Scheme::FiveClass)[rng.below(5)];
    out.push_back(rec("cam-" + std::to_string(rng.below(300)), label,
                      kNoon - std::chrono::seconds(rng.below(7200)), rng.uniform(25.0, 60.0),
                      rng.uniform(-130.0, -60.0), rng.uniform(0.2, 1.0)));
  }
  return out;
}

}  // namespace

TEST_CASE("empty input gives an empty layer") {
  const auto layer = build_layer({}, {}, kNoon);
  CHECK(layer.features.empty());
  CHECK(layer.legend.empty());
  const auto doc = nlohmann::json::parse(emit_geojson(layer));
  CHECK(doc["type"] == "FeatureCollection");
  CHECK(doc["features"].empty());
}

TEST_CASE("latest record per camera wins") {
  const std::vector<LabelRecord> records{
      rec("a", RoadCondition::Snow, kNoon - std::chrono::minutes(10)),
      rec("a", RoadCondition::Wet, kNoon - std::chrono::minutes(2)),
      rec("a", RoadCondition::Dry, kNoon - std::chrono::minutes(5)),
  };
  const auto layer = build_layer(records, {}, kNoon);
  REQUIRE(layer.features.size() == 1);
  CHECK(layer.features[0].label == RoadCondition::Wet);

  const std::vector<LabelRecord> tie{rec("b", RoadCondition::Dry, kNoon), rec("b", RoadCondition::Poor, kNoon)};
  CHECK(build_layer(tie, {}, kNoon).features[0].label == RoadCondition::Poor);
}

TEST_CASE("stale, region and hidden filters") {
  const std::vector<LabelRecord> records{
      rec("old", RoadCondition::Dry, kNoon - std::chrono::minutes(61)),
      rec("fresh", RoadCondition::Dry, kNoon - std::chrono::minutes(59)),
      rec("west", RoadCondition::Wet, kNoon, 45.0, -120.0),
      rec("poor", RoadCondition::Poor, kNoon, 45.0, -75.0),
  };
  CHECK(build_layer(records, {}, kNoon).features.size() == 3);

  LayerOptions region;
  region.region = parse_bbox("50,-70,40,-80");
  const auto east = build_layer(records, region, kNoon);
  CHECK(east.features.size() == 2);

  LayerOptions hide;
  hide.hidden = {RoadCondition::Poor};
  const auto shown = build_layer(records, hide, kNoon);
  CHECK(std::none_of(shown.features.begin(), shown.features.end(),
                     [](const Feature& f) { return f.label == RoadCondition::Poor; }));
}

TEST_CASE("782-camera fixture gives 782 features") {
  const auto records = pipeline::load_records_from(fixture("map/labels-20260115.csv"));
  CHECK(records.size() > 782);
  std::set<std::string> cameras;
  for (const auto& r : records) cameras.insert(r.camera_id);
  CHECK(cameras.size() == 782);
  const auto layer = build_layer(records, {}, kNoon + std::chrono::minutes(15));
  CHECK(layer.features.size() == 782);
  const auto doc = nlohmann::json::parse(emit_geojson(layer));
  CHECK(doc["features"].size() == 782);
}

TEST_CASE("geojson shape and round trip") {
  const std::vector<LabelRecord> records{rec("x", RoadCondition::Snow, kNoon, 46.5, -71.25, 0.81)};
  const auto layer = build_layer(records, {}, kNoon);
  const auto doc = nlohmann::json::parse(emit_geojson(layer));
  REQUIRE(doc["features"].size() == 1);
  const auto& f = doc["features"][0];
  CHECK(f["geometry"]["type"] == "Point");
  CHECK(f["geometry"]["coordinates"][0] == -71.25);
  CHECK(f["geometry"]["coordinates"][1] == 46.5);
  CHECK(f["properties"]["class"] == "Snow");
  CHECK(f["properties"]["camera_id"] == "x");
  CHECK(f["properties"]["timestamp"] == "2026-01-15T12:00:00Z");
  CHECK(f["properties"]["color"] == layer.color_of(RoadCondition::Snow));

  SplitMix64 rng(4);
  const auto many = build_layer(random_records(rng, 500), {}, kNoon);
  const auto back = parse_geojson(emit_geojson(many));
  const auto rebuilt = build_layer(back, {}, kNoon);
  CHECK(rebuilt.features == many.features);
}

TEST_CASE("legend lists the classes present") {
  std::vector<LabelRecord> records;
  int i = 0;
  for (RoadCondition c : classes_of(Scheme::FiveClass)) records.push_back(rec("c" + std::to_string(i++), c, kNoon));
  const auto layer = build_layer(records, {}, kNoon);
  CHECK(layer.legend.size() == 5);
  const auto html = emit_html(layer, "Test map");
  CHECK(html.find("<svg") != std::string::npos);
  CHECK(html.find("Test map") != std::string::npos);
  std::size_t items = 0;
  for (std::size_t pos = html.find("<li data-class"); pos != std::string::npos; pos = html.find("<li data-class", pos + 1)) ++items;
  CHECK(items == 5);

  const auto two = build_layer({records.begin(), records.begin() + 2}, {}, kNoon);
  CHECK(two.legend.size() == 2);
}

TEST_CASE("colour map is total and injective") {
  const auto colors = default_colors();
  for (Scheme s : {Scheme::TwoClass, Scheme::FourClass, Scheme::FiveClass}) {
    CHECK_NOTHROW(validate_colors(colors, classes_of(s)));
  }
  std::set<std::string> seen;
  for (const auto& [c, hex] : colors) CHECK(seen.insert(hex).second);
  auto clash = colors;
  clash[RoadCondition::Wet] = "#2E9E44";
  CHECK_THROWS_AS(validate_colors(clash, classes_of(Scheme::FiveClass)), Error);
  auto missing = colors;
  missing.erase(RoadCondition::Poor);
  CHECK_THROWS_AS(validate_colors(missing, classes_of(Scheme::FiveClass)), Error);
}

TEST_CASE("bounding boxes") {
  const auto box = make_bbox(50, -70, 40, -80);
  CHECK(box == BoundingBox{40, -80, 50, -70});
  CHECK(box.contains(40, -80));
  CHECK(box.contains(45, -75));
  CHECK_FALSE(box.contains(51, -75));
  CHECK_THROWS_AS(parse_bbox("1,2,3"), Error);
  CHECK_THROWS_AS(parse_bbox("91,0,0,0"), Error);
  CHECK_THROWS_AS(parse_bbox("a,b,c,d"), Error);
}

TEST_CASE("dedup fixed point and region soundness on random records") {
  SplitMix64 rng(2026);
  for (int trial = 0; trial < 20; ++trial) {
    const auto records = random_records(rng, 1000);
    LayerOptions opts;
    opts.region = make_bbox(rng.uniform(25, 60), rng.uniform(-130, -60), rng.uniform(25, 60), rng.uniform(-130, -60));
    const auto layer = build_layer(records, opts, kNoon);
    std::set<std::string> ids;
    for (const auto& f : layer.features) {
      CHECK(ids.insert(f.camera_id).second);
      CHECK(opts.region->contains(f.latitude, f.longitude));
    }
    CHECK(build_layer(to_records(layer), opts, kNoon).features == layer.features);
  }
}
