// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "roadcond/classifier/backend.hpp"

namespace roadcond::dataset {

struct PseudoLabel {
  std::string image_ref;
  RoadCondition label = RoadCondition::Dry;
  double confidence = 0.0;

  friend bool operator==(const PseudoLabel&, const PseudoLabel&) = default;
};

struct PseudoLabelRun {
  std::string backend;
  Scheme scheme = Scheme::FiveClass;
  std::vector<PseudoLabel> labels;  // input order, undecodable images excluded
  std::vector<std::string> failed;  // refs that could not be loaded or decoded

  /// Per-class counts over `labels`; every scheme class is present.
  std::map<RoadCondition, std::size_t> counts() const;
  /// labels.size() + failed.size()
  std::size_t size() const { return labels.size() + failed.size(); }
  const PseudoLabel* find(std::string_view image_ref) const;

  friend bool operator==(const PseudoLabelRun&, const PseudoLabelRun&) = default;
};

/// Returns the raw bytes for an image ref; throws on failure.
using ImageLoader = std::function<std::vector<std::uint8_t>(const std::string& image_ref)>;

/// Reads `root / image_ref`.
ImageLoader file_loader(std::filesystem::path root);

/// Decodes, resizes to the backend's input dims and classifies every ref in
/// batches. Images that fail to load or decode go to `failed` and the run
/// continues.
PseudoLabelRun pseudo_label(const classifier::Backend& backend, const std::vector<std::string>& refs,
                            const ImageLoader& loader, std::size_t batch_size = 16);

/// {"backend": ..., "scheme": ..., "labels": [{"image_ref", "label",
/// "confidence"}, ...], "failed": [...]}
std::string format_run(const PseudoLabelRun& run);
PseudoLabelRun parse_run(std::string_view json);
PseudoLabelRun load_run(const std::filesystem::path& path);
void save_run(const PseudoLabelRun& run, const std::filesystem::path& path);

}  // namespace roadcond::dataset
