// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "roadcond/dataset/manifest.hpp"

namespace roadcond::dataset {

/// floor(n * ratio), computed so that exact products such as 0.95 * 20 are
/// not lost to binary rounding.
std::size_t train_count(std::size_t n, double ratio);

/// Per class: shuffle that class's samples (manifest order, then a
/// SplitMix64 stream derived from seed and the class index), put the first
/// train_count(n, ratio) in train and the rest in validation. Classes with
/// no samples contribute nothing and log a warning. Throws roadcond::Error
/// unless 0 < ratio <= 1.
DatasetManifest stratified_split(DatasetManifest manifest, double train_ratio, std::uint64_t seed);

/// As stratified_split, but exactly `validation_per_class` samples of each
/// class go to validation. Throws roadcond::Error when a class has fewer.
DatasetManifest fixed_count_split(DatasetManifest manifest, std::size_t validation_per_class,
                                  std::uint64_t seed);

}  // namespace roadcond::dataset
