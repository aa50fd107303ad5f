// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "roadcond/classifier/baseline.hpp"

namespace roadcond::classifier {

/// RWB1 layout, all little-endian:
///   "RWB1"
///   u32 input_width, u32 input_height, u32 grid, u32 num_features, u32 num_classes
///   f32 weights[num_classes][num_features]
///   f32 bias[num_classes]
/// The stored values produce logits; loaders apply softmax.
std::vector<std::uint8_t> encode_rwb1(const BaselineModel& model);
/// The class count selects the scheme (2, 4 or 5).
BaselineModel decode_rwb1(std::span<const std::uint8_t> bytes);

void save_rwb1(const BaselineModel& model, const std::filesystem::path& path);

/// Loads an interchange-format model file. RWB1 is always supported; ONNX
/// files are rejected because this build has no ONNX runtime. Throws
/// roadcond::Error on a missing file, a malformed file, or a class count that
/// differs from `scheme`.
std::shared_ptr<Backend> load_external_backend(const std::filesystem::path& path, Scheme scheme);

}  // namespace roadcond::classifier
