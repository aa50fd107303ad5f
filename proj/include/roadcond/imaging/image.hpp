// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace roadcond::imaging {

inline constexpr int kChannels = 3;

/// 8-bit RGB image, row-major, interleaved. pixels().size() is always
/// width * height * 3.
class Image {
 public:
  Image() = default;
  /// All-black image. Throws roadcond::Error unless width, height >= 1.
  Image(int width, int height);
  /// Throws roadcond::Error on a buffer/dimension mismatch.
  Image(int width, int height, std::vector<std::uint8_t> pixels);

  static Image filled(int width, int height, std::array<std::uint8_t, 3> rgb);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(int x, int y, int c) const { return pixels_[offset(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c) { return pixels_[offset(x, y, c)]; }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t offset(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * kChannels + static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Floating-point image in [0, 1], same layout as Image.
struct Tensor {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  float at(int x, int y, int c) const {
    return values[(static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(x)) * kChannels + static_cast<std::size_t>(c)];
  }
};

/// value = pixel / 255
Tensor rescale_01(const Image& img);

}  // namespace roadcond::imaging
