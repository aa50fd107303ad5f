// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/imaging/image.hpp"

#include <fmt/format.h>

#include "roadcond/core/error.hpp"

namespace roadcond::imaging {
namespace {

std::size_t buffer_size(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(fmt::format("image dimensions must be >= 1, got {}x{}", width, height));
  }
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * kChannels;
}

}  // namespace

Image::Image(int width, int height)
    : width_(width), height_(height), pixels_(buffer_size(width, height), 0) {}

Image::Image(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != buffer_size(width, height)) {
    throw Error(fmt::format("pixel buffer holds {} bytes, {}x{}x3 needs {}", pixels_.size(),
                            width, height, buffer_size(width, height)));
  }
}

Image Image::filled(int width, int height, std::array<std::uint8_t, 3> rgb) {
  Image img(width, height);
  for (std::size_t i = 0; i < img.pixels_.size(); i += kChannels) {
    img.pixels_[i] = rgb[0];
    img.pixels_[i + 1] = rgb[1];
    img.pixels_[i + 2] = rgb[2];
  }
  return img;
}

Tensor rescale_01(const Image& img) {
  Tensor t;
  t.width = img.width();
  t.height = img.height();
  t.values.reserve(img.pixels().size());
  for (const std::uint8_t p : img.pixels()) t.values.push_back(static_cast<float>(p) / 255.0f);
  return t;
}

}  // namespace roadcond::imaging
