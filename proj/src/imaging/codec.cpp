// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/imaging/codec.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include <jpeglib.h>
#include <png.h>

#include <fmt/format.h>

namespace roadcond::imaging {
namespace {

constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

Image decode_png(std::span<const std::uint8_t> body) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, body.data(), body.size())) {
    throw CorruptImageError(fmt::format("png: {}", image.message));
  }
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw CorruptImageError("png: zero-dimension image");
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  // Composite any alpha onto black.
  png_color background{0, 0, 0};
  if (!png_image_finish_read(&image, &background, pixels.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw CorruptImageError(fmt::format("png: {}", message));
  }
  if ((image.warning_or_error & PNG_IMAGE_ERROR) != 0) {
    const std::string message = image.message;
    png_image_free(&image);
    throw CorruptImageError(fmt::format("png: {}", message));
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  png_image_free(&image);
  return Image(w, h, std::move(pixels));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, mgr->message);
  std::longjmp(mgr->jump, 1);
}

void jpeg_quiet_output(j_common_ptr) {}

Image decode_jpeg(std::span<const std::uint8_t> body) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.output_message = jpeg_quiet_output;
  err.message[0] = '\0';

  // Everything with a destructor lives above setjmp.
  std::vector<std::uint8_t> pixels;
  std::vector<JSAMPLE> row;
  int width = 0;
  int height = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw CorruptImageError(fmt::format("jpeg: {}", err.message));
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, body.data(), static_cast<unsigned long>(body.size()));
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.num_components == 1) {
    cinfo.out_color_space = JCS_GRAYSCALE;
  } else {
    cinfo.out_color_space = JCS_RGB;
  }
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  if (width <= 0 || height <= 0) {
    std::snprintf(err.message, sizeof(err.message), "zero-dimension image");
    std::longjmp(err.jump, 1);
  }
  const int components = cinfo.output_components;
  pixels.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * kChannels);
  row.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(components));
  while (cinfo.output_scanline < cinfo.output_height) {
    const auto y = static_cast<std::size_t>(cinfo.output_scanline);
    JSAMPROW rows[1] = {row.data()};
    jpeg_read_scanlines(&cinfo, rows, 1);
    std::uint8_t* out = pixels.data() + y * static_cast<std::size_t>(width) * kChannels;
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < kChannels; ++c) {
        out[x * kChannels + c] = row[static_cast<std::size_t>(x * components + (components == 1 ? 0 : c))];
      }
    }
  }
  jpeg_finish_decompress(&cinfo);
  const long warnings = err.base.num_warnings;
  jpeg_destroy_decompress(&cinfo);
  if (warnings > 0) {
    throw CorruptImageError("jpeg: stream is damaged or truncated");
  }
  return Image(width, height, std::move(pixels));
}

}  // namespace

ImageFormat sniff_format(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngMagic, 8) == 0) return ImageFormat::Png;
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
    return ImageFormat::Jpeg;
  }
  return ImageFormat::Unknown;
}

std::string_view content_type(ImageFormat format) {
  switch (format) {
    case ImageFormat::Png:
      return "image/png";
    case ImageFormat::Jpeg:
      return "image/jpeg";
    case ImageFormat::Unknown:
      break;
  }
  return "application/octet-stream";
}

std::string_view file_extension(ImageFormat format) {
  switch (format) {
    case ImageFormat::Png:
      return ".png";
    case ImageFormat::Jpeg:
      return ".jpg";
    case ImageFormat::Unknown:
      break;
  }
  return ".bin";
}

Image decode_and_check(std::span<const std::uint8_t> body) {
  if (body.empty()) throw CorruptImageError("empty image body");
  switch (sniff_format(body)) {
    case ImageFormat::Png:
      return decode_png(body);
    case ImageFormat::Jpeg:
      return decode_jpeg(body);
    case ImageFormat::Unknown:
      break;
  }
  throw CorruptImageError("unrecognised image format");
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels().data(), 0, nullptr)) {
    throw Error(fmt::format("png encode: {}", image.message));
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels().data(), 0, nullptr)) {
    throw Error(fmt::format("png encode: {}", image.message));
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> encode_jpeg(const Image& img, int quality) {
  jpeg_compress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.output_message = jpeg_quiet_output;
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(buffer);
    throw Error(fmt::format("jpeg encode: {}", err.message));
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &size);
  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = kChannels;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  const auto stride = static_cast<std::size_t>(img.width()) * kChannels;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPLE*>(img.pixels().data() + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  std::vector<std::uint8_t> out(buffer, buffer + size);
  jpeg_destroy_compress(&cinfo);
  std::free(buffer);
  return out;
}

}  // namespace roadcond::imaging
