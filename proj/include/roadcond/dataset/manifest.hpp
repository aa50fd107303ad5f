// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roadcond/core/road_condition.hpp"

namespace roadcond::dataset {

enum class SampleSource { CherryPicked, Random, Rwis, Augmented };
enum class Split { Unassigned, Train, Validation };

std::string_view to_string(SampleSource s);
std::string_view to_string(Split s);
std::optional<SampleSource> parse_source(std::string_view text);
std::optional<Split> parse_split(std::string_view text);

struct LabelledSample {
  std::string image_ref;
  RoadCondition label = RoadCondition::Dry;
  SampleSource source = SampleSource::CherryPicked;
  std::string phase;
  std::optional<double> confidence;
  Split split = Split::Unassigned;

  friend bool operator==(const LabelledSample&, const LabelledSample&) = default;
};

struct DatasetManifest {
  Scheme scheme = Scheme::FiveClass;
  std::vector<LabelledSample> samples;

  /// Every class of the scheme appears, possibly with zero.
  std::map<RoadCondition, std::size_t> class_counts() const;
  std::map<RoadCondition, std::size_t> class_counts(Split split) const;
  std::size_t count(Split split) const;
  const LabelledSample* find(std::string_view image_ref) const;

  /// Throws roadcond::Error on a label outside the scheme, a confidence
  /// outside [0, 1], an empty or repeated image_ref.
  void validate() const;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// JSON lines, one sample per line:
///   {"image_ref": ..., "label": ..., "source": ..., "phase": ...,
///    "confidence": number|null, "split": "train"|"validation"|null}
/// Blank lines are skipped. Errors name the 1-based line.
DatasetManifest parse_manifest(std::string_view jsonl, Scheme scheme);
std::string format_manifest(const DatasetManifest& manifest);

DatasetManifest load_manifest(const std::filesystem::path& path, Scheme scheme);
/// Writes to a temporary sibling and renames it into place.
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

}  // namespace roadcond::dataset
