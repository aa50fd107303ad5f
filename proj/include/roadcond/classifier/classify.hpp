// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "roadcond/classifier/backend.hpp"
#include "roadcond/core/time.hpp"
#include "roadcond/imaging/image.hpp"
#include "roadcond/ingest/catalogue.hpp"

namespace roadcond::classifier {

struct LabelRecord {
  std::string camera_id;
  Timestamp timestamp;
  RoadCondition label = RoadCondition::Dry;
  double confidence = 0.0;
  double latitude = 0.0;
  double longitude = 0.0;

  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

/// Classifies images[i] for records[i], stamping every record with `now`.
/// Images must already match backend.input_dims(). Throws roadcond::Error on
/// a length mismatch or on the first image with the wrong dimensions, naming
/// its index.
std::vector<LabelRecord> classify_batch(const Backend& backend, std::span<const imaging::Image> images,
                                        std::span<const ingest::CameraRecord> records, Timestamp now);

/// As above with one timestamp per image.
std::vector<LabelRecord> classify_batch(const Backend& backend, std::span<const imaging::Image> images,
                                        std::span<const ingest::CameraRecord> records,
                                        std::span<const Timestamp> timestamps);

}  // namespace roadcond::classifier
