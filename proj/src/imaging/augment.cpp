// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/imaging/augment.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "roadcond/core/error.hpp"
#include "roadcond/core/random.hpp"
#include "roadcond/imaging/resize.hpp"

namespace roadcond::imaging {
namespace {

// Sample points this close outside the grid are snapped onto it.
constexpr double kEdgeSlack = 1e-9;

}  // namespace

void AugmentationConfig::validate() const {
  const auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(fmt::format("{} must lie in [0, 1], got {}", name, v));
  };
  fraction(width_shift_range, "width_shift_range");
  fraction(height_shift_range, "height_shift_range");
  if (!(shear_range >= 0.0)) throw Error("shear_range must be >= 0");
  if (!(zoom_range[0] > 0.0 && zoom_range[0] <= zoom_range[1])) {
    throw Error(fmt::format("zoom_range must satisfy 0 < low <= high, got [{}, {}]",
                            zoom_range[0], zoom_range[1]));
  }
  if (!(brightness_range[0] > 0.0 && brightness_range[0] <= brightness_range[1])) {
    throw Error(fmt::format("brightness_range must satisfy 0 < low <= high, got [{}, {}]",
                            brightness_range[0], brightness_range[1]));
  }
}

AugmentationConfig AugmentationConfig::training_defaults() {
  AugmentationConfig cfg;
  cfg.width_shift_range = 0.1;
  cfg.height_shift_range = 0.1;
  cfg.shear_range = 0.01;
  cfg.zoom_range = {0.9, 1.0};
  cfg.horizontal_flip = true;
  cfg.vertical_flip = false;
  cfg.fill_mode = FillMode::Constant;
  cfg.brightness_range = {0.5, 1.5};
  return cfg;
}

AffineParams sample_params(const AugmentationConfig& cfg, int width, int height,
                           std::uint64_t seed) {
  cfg.validate();
  SplitMix64 rng(seed);
  AffineParams p;
  p.shift_x = rng.uniform(-cfg.width_shift_range, cfg.width_shift_range) * width;
  p.shift_y = rng.uniform(-cfg.height_shift_range, cfg.height_shift_range) * height;
  p.shear = rng.uniform(-cfg.shear_range, cfg.shear_range);
  p.zoom_x = rng.uniform(cfg.zoom_range[0], cfg.zoom_range[1]);
  p.zoom_y = rng.uniform(cfg.zoom_range[0], cfg.zoom_range[1]);
  // Always draw both coins so the stream layout does not depend on the flags.
  const bool coin_h = rng.coin();
  const bool coin_v = rng.coin();
  p.flip_horizontal = cfg.horizontal_flip && coin_h;
  p.flip_vertical = cfg.vertical_flip && coin_v;
  p.brightness = rng.uniform(cfg.brightness_range[0], cfg.brightness_range[1]);
  return p;
}

Image apply_transform(const Image& img, const AffineParams& p, std::uint8_t fill) {
  const int w = img.width();
  const int h = img.height();
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  const double max_x = w - 1;
  const double max_y = h - 1;

  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Invert: output -> centred -> unzoom -> unshear -> uncentre -> unflip.
      const double v = (y - p.shift_y - cy) / p.zoom_y;
      const double u = (x - p.shift_x - cx) / p.zoom_x - p.shear * v;
      double sx = u + cx;
      double sy = v + cy;
      if (p.flip_horizontal) sx = max_x - sx;
      if (p.flip_vertical) sy = max_y - sy;

      const bool inside = sx >= -kEdgeSlack && sx <= max_x + kEdgeSlack && sy >= -kEdgeSlack &&
                          sy <= max_y + kEdgeSlack;
      for (int c = 0; c < kChannels; ++c) {
        if (!inside) {
          out.at(x, y, c) = fill;
          continue;
        }
        const double sampled =
            sample_bilinear(img, std::clamp(sx, 0.0, max_x), std::clamp(sy, 0.0, max_y), c);
        const double value = std::round(sampled * p.brightness);
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(value, 0.0, 255.0));
      }
    }
  }
  return out;
}

Image augment(const Image& img, const AugmentationConfig& cfg, std::uint64_t seed) {
  return apply_transform(img, sample_params(cfg, img.width(), img.height(), seed));
}

}  // namespace roadcond::imaging
