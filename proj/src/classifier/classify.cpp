// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/classifier/classify.hpp"

#include <fmt/format.h>

#include "roadcond/core/error.hpp"

namespace roadcond::classifier {

std::vector<LabelRecord> classify_batch(const Backend& backend, std::span<const imaging::Image> images,
                                        std::span<const ingest::CameraRecord> records, Timestamp now) {
  const std::vector<Timestamp> stamps(images.size(), now);
  return classify_batch(backend, images, records, stamps);
}

std::vector<LabelRecord> classify_batch(const Backend& backend, std::span<const imaging::Image> images,
                                        std::span<const ingest::CameraRecord> records,
                                        std::span<const Timestamp> timestamps) {
  if (images.size() != records.size() || images.size() != timestamps.size()) {
    throw Error(fmt::format("batch has {} images, {} records and {} timestamps", images.size(),
                            records.size(), timestamps.size()));
  }
  const InputDims dims = backend.input_dims();
  std::vector<imaging::Tensor> tensors;
  tensors.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].width() != dims.width || images[i].height() != dims.height) {
      throw Error(fmt::format("image {} is {}x{}, backend '{}' expects {}x{}", i, images[i].width(),
                              images[i].height(), backend.name(), dims.width, dims.height));
    }
    tensors.push_back(imaging::rescale_01(images[i]));
  }
  const auto dists = classify_checked(backend, tensors);

  std::vector<LabelRecord> out;
  out.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    out.push_back(LabelRecord{records[i].camera_id, timestamps[i], dists[i].argmax(),
                              dists[i].confidence(), records[i].latitude, records[i].longitude});
  }
  return out;
}

}  // namespace roadcond::classifier
