// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "roadcond/imaging/image.hpp"

namespace roadcond::imaging {

/// Bilinear resize with half-pixel centres and edge clamping. Results are
/// rounded half away from zero, so same-size resize is the identity and a
/// 2x2 -> 1x1 reduction yields the rounded mean.
Image resize(const Image& img, int target_width, int target_height);

/// Bilinear sample of channel c at fractional (x, y); the point must lie in
/// [0, w-1] x [0, h-1]. Unrounded.
double sample_bilinear(const Image& img, double x, double y, int c);

}  // namespace roadcond::imaging
