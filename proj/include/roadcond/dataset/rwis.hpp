// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "roadcond/core/time.hpp"
#include "roadcond/ingest/catalogue.hpp"

namespace roadcond::dataset {

inline constexpr double kEarthRadiusKm = 6371.0;

struct RwisObservation {
  std::string station_id;
  double latitude = 0.0;
  double longitude = 0.0;
  Timestamp observed_at;
  int code = 0;

  friend bool operator==(const RwisObservation&, const RwisObservation&) = default;
};

/// Header `station_id,latitude,longitude,observed_at,code`; observed_at is
/// ISO 8601 UTC. Errors name the 1-based line.
std::vector<RwisObservation> parse_observations(std::string_view text);
std::vector<RwisObservation> load_observations(const std::filesystem::path& path);

/// Great-circle distance in km on a sphere of radius kEarthRadiusKm.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

struct RwisMatch {
  std::string camera_id;
  RwisObservation observation;
  double distance_km = 0.0;
};

/// For each camera (catalogue order), the nearest observation within
/// `radius_km` whose observed_at lies within `max_age` of `snapshot_time`
/// (either side). Ties on distance go to the newer observation, then the
/// smaller station_id. Cameras without a match are omitted. Throws
/// roadcond::Error unless radius_km > 0.
std::vector<RwisMatch> match_rwis(const std::vector<ingest::CameraRecord>& cameras,
                                  const std::vector<RwisObservation>& observations, double radius_km,
                                  std::chrono::seconds max_age, Timestamp snapshot_time);

inline constexpr std::chrono::minutes kDefaultRwisMaxAge{30};

}  // namespace roadcond::dataset
