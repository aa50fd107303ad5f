// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "roadcond/core/error.hpp"
#include "roadcond/imaging/image.hpp"

namespace roadcond::imaging {

/// Raised for bytes that do not decode to a complete, non-empty image.
class CorruptImageError : public Error {
 public:
  using Error::Error;
};

enum class ImageFormat { Png, Jpeg, Unknown };

ImageFormat sniff_format(std::span<const std::uint8_t> bytes);
std::string_view content_type(ImageFormat format);
std::string_view file_extension(ImageFormat format);

/// Decodes PNG or JPEG into RGB. Grayscale and palette images are promoted to
/// three channels; alpha is dropped. Any decoder warning (including a
/// truncated stream that libjpeg would otherwise pad with gray) is treated as
/// corruption.
Image decode_and_check(std::span<const std::uint8_t> body);

std::vector<std::uint8_t> encode_png(const Image& img);
std::vector<std::uint8_t> encode_jpeg(const Image& img, int quality = 90);

}  // namespace roadcond::imaging
