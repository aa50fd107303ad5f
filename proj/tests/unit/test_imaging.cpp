// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "roadcond/core/random.hpp"
#include "roadcond/imaging/augment.hpp"
#include "roadcond/imaging/codec.hpp"
#include "roadcond/imaging/image.hpp"
#include "roadcond/imaging/resize.hpp"

using namespace roadcond;
using namespace roadcond::imaging;

namespace {

// Encoded with Python's zlib, independent of libpng.
const std::vector<std::uint8_t> kRgbPng = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52,
    0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x02, 0x00, 0x00, 0x00, 0xfd, 0xd4, 0x9a,
    0x73, 0x00, 0x00, 0x00, 0x13, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0xf8, 0xcf, 0xc0, 0xc0,
    0x00, 0xc2, 0x0c, 0xff, 0xb9, 0x44, 0xe4, 0x00, 0x1a, 0x58, 0x03, 0x3a, 0x56, 0x63, 0xa2, 0x3c,
    0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
const std::vector<std::uint8_t> kGrayPng = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52,
    0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x08, 0x00, 0x00, 0x00, 0x00, 0xd1, 0x49, 0x20,
    0x56, 0x00, 0x00, 0x00, 0x0b, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x38, 0x01, 0x00,
    0x00, 0xcb, 0x00, 0xc9, 0x69, 0xc8, 0xc3, 0x6c, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44,
    0xae, 0x42, 0x60, 0x82};

Image random_image(int w, int h, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
  for (auto& v : px) v = static_cast<std::uint8_t>(rng.below(256));
  return Image(w, h, std::move(px));
}

}  // namespace

TEST_CASE("image construction") {
  CHECK_THROWS_AS(Image(0, 3), Error);
  CHECK_THROWS_AS(Image(2, 2, std::vector<std::uint8_t>(11)), Error);
  const Image img = Image::filled(3, 2, {1, 2, 3});
  CHECK(img.pixels().size() == 18u);
  CHECK(img.at(2, 1, 2) == 3);
}

TEST_CASE("decode reference png") {
  const Image img = decode_and_check(kRgbPng);
  REQUIRE(img.width() == 2);
  REQUIRE(img.height() == 2);
  CHECK(img.at(0, 0, 0) == 255);
  CHECK(img.at(1, 0, 1) == 255);
  CHECK(img.at(0, 1, 2) == 255);
  CHECK(img.at(1, 1, 0) == 10);
  CHECK(img.at(1, 1, 1) == 20);
  CHECK(img.at(1, 1, 2) == 30);
  CHECK(sniff_format(kRgbPng) == ImageFormat::Png);
}

TEST_CASE("grayscale is promoted to rgb") {
  const Image img = decode_and_check(kGrayPng);
  REQUIRE(img.width() == 2);
  for (int c = 0; c < 3; ++c) {
    CHECK(img.at(0, 0, c) == 0);
    CHECK(img.at(1, 0, c) == 200);
  }
}

TEST_CASE("corrupt inputs are rejected") {
  CHECK_THROWS_AS(decode_and_check({}), CorruptImageError);
  const std::vector<std::uint8_t> junk{'n', 'o', 't', ' ', 'a', 'n', ' ', 'i', 'm', 'g'};
  CHECK_THROWS_AS(decode_and_check(junk), CorruptImageError);

  const auto png = encode_png(random_image(40, 30, 1));
  std::vector<std::uint8_t> truncated(png.begin(), png.begin() + static_cast<long>(png.size() * 9 / 10));
  CHECK_THROWS_AS(decode_and_check(truncated), CorruptImageError);

  const auto jpeg = encode_jpeg(random_image(64, 48, 2));
  CHECK(sniff_format(jpeg) == ImageFormat::Jpeg);
  std::vector<std::uint8_t> short_jpeg(jpeg.begin(), jpeg.begin() + static_cast<long>(jpeg.size() * 9 / 10));
  CHECK_THROWS_AS(decode_and_check(short_jpeg), CorruptImageError);
}

TEST_CASE("png round trip is lossless") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Image img = random_image(1 + static_cast<int>(seed % 7), 1 + static_cast<int>(seed % 5), seed);
    CHECK(decode_and_check(encode_png(img)) == img);
  }
}

TEST_CASE("jpeg round trip keeps dimensions") {
  const Image img = random_image(33, 17, 9);
  const Image back = decode_and_check(encode_jpeg(img));
  CHECK(back.width() == 33);
  CHECK(back.height() == 17);
}

TEST_CASE("resize") {
  SUBCASE("identity") {
    const Image img = random_image(224, 224, 3);
    CHECK(resize(img, 224, 224) == img);
  }
  SUBCASE("checkerboard averages") {
    Image img(2, 2);
    for (int c = 0; c < 3; ++c) {
      img.at(1, 0, c) = 255;
      img.at(0, 1, c) = 255;
    }
    const Image out = resize(img, 1, 1);
    for (int c = 0; c < 3; ++c) CHECK(out.at(0, 0, c) == 128);
  }
  SUBCASE("target dims") {
    const Image out = resize(random_image(320, 240, 4), 299, 299);
    CHECK(out.width() == 299);
    CHECK(out.height() == 299);
  }
  SUBCASE("matches hand-written bilinear") {
    const Image img = random_image(5, 3, 11);
    const int tw = 8, th = 7;
    const Image out = resize(img, tw, th);
    for (int y = 0; y < th; ++y) {
      for (int x = 0; x < tw; ++x) {
        const double sx = std::clamp((x + 0.5) * 5.0 / tw - 0.5, 0.0, 4.0);
        const double sy = std::clamp((y + 0.5) * 3.0 / th - 0.5, 0.0, 2.0);
        const int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
        const int x1 = std::min(x0 + 1, 4), y1 = std::min(y0 + 1, 2);
        const double fx = sx - x0, fy = sy - y0;
        for (int c = 0; c < 3; ++c) {
          const double top = img.at(x0, y0, c) * (1 - fx) + img.at(x1, y0, c) * fx;
          const double bot = img.at(x0, y1, c) * (1 - fx) + img.at(x1, y1, c) * fx;
          const double v = top * (1 - fy) + bot * fy;
          CHECK(std::abs(out.at(x, y, c) - v) <= 0.5 + 1e-9);
        }
      }
    }
  }
  CHECK_THROWS_AS(resize(random_image(4, 4, 0), 0, 4), Error);
}

TEST_CASE("rescale_01") {
  Image img(3, 1);
  img.at(1, 0, 0) = 255;
  img.at(2, 0, 1) = 128;
  const Tensor t = rescale_01(img);
  CHECK(t.values.size() == 9u);
  CHECK(t.at(0, 0, 0) == 0.0f);
  CHECK(t.at(1, 0, 0) == 1.0f);
  CHECK(t.at(2, 0, 1) == 128.0f / 255.0f);
}

TEST_CASE("augment identity config") {
  const Image img = random_image(16, 12, 5);
  const AugmentationConfig cfg;
  for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(augment(img, cfg, seed) == img);
}

TEST_CASE("forced horizontal flip is an involution") {
  const Image img = random_image(9, 6, 6);
  AffineParams p;
  p.flip_horizontal = true;
  const Image once = apply_transform(img, p);
  CHECK(once != img);
  CHECK(once.at(0, 0, 0) == img.at(8, 0, 0));
  CHECK(apply_transform(once, p) == img);
}

TEST_CASE("width shift of one pixel") {
  const Image img = random_image(4, 4, 7);
  AffineParams p;
  p.shift_x = 1.0;
  const Image out = apply_transform(img, p);
  for (int y = 0; y < 4; ++y) {
    for (int c = 0; c < 3; ++c) {
      CHECK(out.at(0, y, c) == 0);
      for (int x = 1; x < 4; ++x) CHECK(out.at(x, y, c) == img.at(x - 1, y, c));
    }
  }
}

TEST_CASE("brightness clamps") {
  const Image img = Image::filled(2, 2, {100, 200, 10});
  AffineParams p;
  p.brightness = 1.5;
  const Image out = apply_transform(img, p);
  CHECK(out.at(0, 0, 0) == 150);
  CHECK(out.at(0, 0, 1) == 255);
  CHECK(out.at(0, 0, 2) == 15);
}

TEST_CASE("augment is deterministic and preserves dims") {
  const auto cfg = AugmentationConfig::training_defaults();
  CHECK(cfg.zoom_range[0] == 0.9);
  CHECK(cfg.width_shift_range == 0.1);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Image img = random_image(20 + static_cast<int>(seed), 15, seed);
    const Image a = augment(img, cfg, seed);
    CHECK(a == augment(img, cfg, seed));
    CHECK(a.width() == img.width());
    CHECK(a.height() == img.height());
  }
  const Image img = random_image(32, 32, 99);
  CHECK(augment(img, cfg, 1) != augment(img, cfg, 2));
}

TEST_CASE("sampled params stay inside the configured ranges") {
  const auto cfg = AugmentationConfig::training_defaults();
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto p = sample_params(cfg, 100, 50, seed);
    CHECK(std::abs(p.shift_x) <= 10.0);
    CHECK(std::abs(p.shift_y) <= 5.0);
    CHECK(std::abs(p.shear) <= 0.01);
    CHECK((p.zoom_x >= 0.9 && p.zoom_x <= 1.0));
    CHECK((p.brightness >= 0.5 && p.brightness <= 1.5));
    CHECK_FALSE(p.flip_vertical);
  }
}

TEST_CASE("config validation") {
  AugmentationConfig cfg;
  cfg.width_shift_range = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.zoom_range = {1.1, 0.9};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.brightness_range = {0.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK_NOTHROW(AugmentationConfig::training_defaults().validate());
}
