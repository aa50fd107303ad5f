// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include "roadcond/imaging/image.hpp"

namespace roadcond::imaging {

enum class FillMode { Constant };

/// Ranges for the random training-time transforms.
struct AugmentationConfig {
  double width_shift_range = 0.0;   // fraction of width, shift drawn from [-r, r]
  double height_shift_range = 0.0;  // fraction of height
  double shear_range = 0.0;         // shear factor drawn from [-r, r]
  std::array<double, 2> zoom_range{1.0, 1.0};
  bool horizontal_flip = false;
  bool vertical_flip = false;
  FillMode fill_mode = FillMode::Constant;
  std::array<double, 2> brightness_range{1.0, 1.0};

  /// Throws roadcond::Error when a range is out of bounds.
  void validate() const;

  /// Shift 0.1/0.1, shear 0.01, zoom [0.9, 1.0], horizontal flip,
  /// constant fill, brightness [0.5, 1.5].
  static AugmentationConfig training_defaults();
};

/// One concrete draw of the transform.
struct AffineParams {
  double shift_x = 0.0;  // pixels, positive moves content right
  double shift_y = 0.0;  // pixels, positive moves content down
  double shear = 0.0;
  double zoom_x = 1.0;
  double zoom_y = 1.0;
  bool flip_horizontal = false;
  bool flip_vertical = false;
  double brightness = 1.0;
};

/// Draws parameters uniformly over each configured range from a SplitMix64
/// stream keyed by `seed`. Draw order is fixed.
AffineParams sample_params(const AugmentationConfig& cfg, int width, int height,
                           std::uint64_t seed);

/// Applies flip, shear, zoom (about the image centre) and shift, then scales
/// brightness and clamps to [0, 255]. Pixels that map outside the source
/// are set to `fill`.
Image apply_transform(const Image& img, const AffineParams& params, std::uint8_t fill = 0);

/// sample_params followed by apply_transform. Deterministic in (img, cfg, seed).
Image augment(const Image& img, const AugmentationConfig& cfg, std::uint64_t seed);

}  // namespace roadcond::imaging
