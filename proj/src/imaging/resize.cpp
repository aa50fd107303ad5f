// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/imaging/resize.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "roadcond/core/error.hpp"

namespace roadcond::imaging {

double sample_bilinear(const Image& img, double x, double y, int c) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = img.at(x0, y0, c) * (1.0 - fx) + img.at(x1, y0, c) * fx;
  const double bottom = img.at(x0, y1, c) * (1.0 - fx) + img.at(x1, y1, c) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

Image resize(const Image& img, int target_width, int target_height) {
  if (target_width < 1 || target_height < 1) {
    throw Error(fmt::format("resize target must be >= 1x1, got {}x{}", target_width,
                            target_height));
  }
  if (target_width == img.width() && target_height == img.height()) return img;

  const double sx = static_cast<double>(img.width()) / target_width;
  const double sy = static_cast<double>(img.height()) / target_height;
  const double max_x = img.width() - 1;
  const double max_y = img.height() - 1;

  Image out(target_width, target_height);
  for (int y = 0; y < target_height; ++y) {
    const double src_y = std::clamp((y + 0.5) * sy - 0.5, 0.0, max_y);
    for (int x = 0; x < target_width; ++x) {
      const double src_x = std::clamp((x + 0.5) * sx - 0.5, 0.0, max_x);
      for (int c = 0; c < kChannels; ++c) {
        const double v = std::round(sample_bilinear(img, src_x, src_y, c));
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return out;
}

}  // namespace roadcond::imaging
