// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/dataset/split.hpp"

#include <cmath>
#include <functional>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "roadcond/core/error.hpp"
#include "roadcond/core/random.hpp"

namespace roadcond::dataset {

std::size_t train_count(std::size_t n, double ratio) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9));
}

namespace {

DatasetManifest assign(DatasetManifest manifest, std::uint64_t seed,
                       const std::function<std::size_t(RoadCondition, std::size_t)>& train_for) {
  manifest.validate();
  const auto classes = classes_of(manifest.scheme);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
      if (manifest.samples[i].label == classes[k]) members.push_back(i);
    }
    if (members.empty()) {
      spdlog::warn("split: class {} has no samples", to_string(classes[k]));
      continue;
    }
    auto rng = SplitMix64::derive(seed, k);
    shuffle(members, rng);
    const std::size_t n_train = train_for(classes[k], members.size());
    for (std::size_t j = 0; j < members.size(); ++j) {
      manifest.samples[members[j]].split = j < n_train ? Split::Train : Split::Validation;
    }
  }
  return manifest;
}

}  // namespace

DatasetManifest stratified_split(DatasetManifest manifest, double train_ratio, std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio <= 1.0)) {
    throw Error(fmt::format("train ratio must lie in (0, 1], got {}", train_ratio));
  }
  return assign(std::move(manifest), seed,
                [&](RoadCondition, std::size_t n) { return train_count(n, train_ratio); });
}

DatasetManifest fixed_count_split(DatasetManifest manifest, std::size_t validation_per_class,
                                  std::uint64_t seed) {
  return assign(std::move(manifest), seed, [&](RoadCondition c, std::size_t n) {
    if (n < validation_per_class) {
      throw Error(fmt::format("class {} has {} samples, fewer than the {} validation samples requested",
                              to_string(c), n, validation_per_class));
    }
    return n - validation_per_class;
  });
}

}  // namespace roadcond::dataset
