// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/dataset/rwis.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "roadcond/core/csv.hpp"
#include "roadcond/core/error.hpp"

namespace roadcond::dataset {
namespace {

constexpr std::string_view kHeader = "station_id,latitude,longitude,observed_at,code";

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

std::vector<RwisObservation> parse_observations(std::string_view text) {
  std::vector<RwisObservation> out;
  std::size_t line_no = 0;
  bool header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = csv::trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fail = [&](const std::string& msg) {
      return Error(fmt::format("observations line {}: {}", line_no, msg));
    };
    if (!header) {
      if (line != kHeader) throw fail(fmt::format("expected header '{}'", kHeader));
      header = true;
      continue;
    }
    const auto fields = csv::split_line(line);
    if (!fields || fields->size() != 5) throw fail("expected 5 fields");
    RwisObservation o;
    o.station_id = std::string(csv::trim((*fields)[0]));
    if (o.station_id.empty()) throw fail("empty station_id");
    const auto lat = csv::parse_double((*fields)[1]);
    const auto lon = csv::parse_double((*fields)[2]);
    if (!lat || *lat < -90.0 || *lat > 90.0) throw fail(fmt::format("bad latitude '{}'", (*fields)[1]));
    if (!lon || *lon < -180.0 || *lon > 180.0) throw fail(fmt::format("bad longitude '{}'", (*fields)[2]));
    o.latitude = *lat;
    o.longitude = *lon;
    try {
      o.observed_at = parse_iso8601(csv::trim((*fields)[3]));
    } catch (const Error& e) {
      throw fail(e.what());
    }
    const std::string_view code = csv::trim((*fields)[4]);
    if (std::from_chars(code.data(), code.data() + code.size(), o.code).ptr != code.data() + code.size() ||
        code.empty()) {
      throw fail(fmt::format("bad code '{}'", code));
    }
    out.push_back(std::move(o));
  }
  if (!header) throw Error("observations: missing header");
  return out;
}

std::vector<RwisObservation> load_observations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_observations(buffer.str());
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  const double dlat = radians(lat2 - lat1);
  const double dlon = radians(lon2 - lon1);
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(radians(lat1)) * std::cos(radians(lat2)) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

std::vector<RwisMatch> match_rwis(const std::vector<ingest::CameraRecord>& cameras,
                                  const std::vector<RwisObservation>& observations, double radius_km,
                                  std::chrono::seconds max_age, Timestamp snapshot_time) {
  if (!(radius_km > 0.0)) throw Error(fmt::format("match radius must be positive, got {}", radius_km));
  std::vector<RwisMatch> out;
  for (const auto& cam : cameras) {
    std::optional<RwisMatch> best;
    for (const auto& obs : observations) {
      const auto age = obs.observed_at > snapshot_time ? obs.observed_at - snapshot_time
                                                        : snapshot_time - obs.observed_at;
      if (age > max_age) continue;
      const double d = haversine_km(cam.latitude, cam.longitude, obs.latitude, obs.longitude);
      if (d > radius_km) continue;
      const bool better =
          !best || d < best->distance_km ||
          (d == best->distance_km &&
           (obs.observed_at > best->observation.observed_at ||
            (obs.observed_at == best->observation.observed_at &&
             obs.station_id < best->observation.station_id)));
      if (better) best = RwisMatch{cam.camera_id, obs, d};
    }
    if (best) out.push_back(std::move(*best));
  }
  return out;
}

}  // namespace roadcond::dataset
