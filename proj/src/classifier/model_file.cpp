// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/classifier/model_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "roadcond/core/error.hpp"

namespace roadcond::classifier {
namespace {

constexpr char kMagic[4] = {'R', 'W', 'B', '1'};
constexpr std::size_t kHeaderBytes = 4 + 5 * 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[at + i]) << (8 * i);
  return v;
}

void put_f32(std::vector<std::uint8_t>& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

float get_f32(std::span<const std::uint8_t> bytes, std::size_t at) {
  return std::bit_cast<float>(get_u32(bytes, at));
}

}  // namespace

std::vector<std::uint8_t> encode_rwb1(const BaselineModel& model) {
  model.validate();
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, static_cast<std::uint32_t>(model.dims.width));
  put_u32(out, static_cast<std::uint32_t>(model.dims.height));
  put_u32(out, static_cast<std::uint32_t>(model.grid));
  put_u32(out, static_cast<std::uint32_t>(model.num_features()));
  put_u32(out, static_cast<std::uint32_t>(model.num_classes()));
  for (float w : model.weights) put_f32(out, w);
  for (float b : model.bias) put_f32(out, b);
  return out;
}

BaselineModel decode_rwb1(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error("not an RWB1 model file");
  }
  const std::uint32_t width = get_u32(bytes, 4);
  const std::uint32_t height = get_u32(bytes, 8);
  const std::uint32_t grid = get_u32(bytes, 12);
  const std::uint32_t features = get_u32(bytes, 16);
  const std::uint32_t classes = get_u32(bytes, 20);
  if (width == 0 || height == 0 || width > 65536 || height > 65536 || grid == 0 || grid > 4096) {
    throw Error("RWB1 header has invalid dimensions");
  }
  if (features != grid * grid * 3) {
    throw Error(fmt::format("RWB1 declares {} features, grid {} implies {}", features, grid,
                            grid * grid * 3));
  }
  const auto scheme = scheme_for_class_count(classes);
  if (!scheme) throw Error(fmt::format("RWB1 declares {} classes; supported: 2, 4, 5", classes));
  const std::size_t expected =
      kHeaderBytes + (static_cast<std::size_t>(classes) * features + classes) * 4;
  if (bytes.size() != expected) {
    throw Error(fmt::format("RWB1 file is {} bytes, expected {}", bytes.size(), expected));
  }
  BaselineModel m;
  m.dims = {static_cast<int>(width), static_cast<int>(height)};
  m.grid = static_cast<int>(grid);
  m.scheme = *scheme;
  std::size_t at = kHeaderBytes;
  m.weights.resize(static_cast<std::size_t>(classes) * features);
  for (float& w : m.weights) {
    w = get_f32(bytes, at);
    at += 4;
  }
  m.bias.resize(classes);
  for (float& b : m.bias) {
    b = get_f32(bytes, at);
    at += 4;
  }
  return m;
}

void save_rwb1(const BaselineModel& model, const std::filesystem::path& path) {
  const auto bytes = encode_rwb1(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

std::shared_ptr<Backend> load_external_backend(const std::filesystem::path& path, Scheme scheme) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open model file '{}'", path.string()));
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    if (path.extension() == ".onnx") {
      throw Error(fmt::format("'{}': ONNX models need an ONNX runtime, which this build lacks; "
                              "export the model as RWB1",
                              path.string()));
    }
    throw Error(fmt::format("'{}' is not an RWB1 model file", path.string()));
  }
  BaselineModel model = decode_rwb1(bytes);
  if (model.num_classes() != class_count(scheme)) {
    throw Error(fmt::format("model '{}' has {} outputs, scheme {} needs {}", path.string(),
                            model.num_classes(), to_string(scheme), class_count(scheme)));
  }
  model.scheme = scheme;
  return std::make_shared<BaselineBackend>(std::move(model), path.stem().string());
}

}  // namespace roadcond::classifier
