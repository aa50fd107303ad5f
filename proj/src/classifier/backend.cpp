// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/classifier/backend.hpp"

#include <cmath>

#include <fmt/format.h>

#include "roadcond/core/error.hpp"

namespace roadcond::classifier {

std::vector<ClassDistribution> classify_checked(const Backend& backend,
                                                std::span<const imaging::Tensor> batch) {
  auto out = backend.classify(batch);
  if (out.size() != batch.size()) {
    throw Error(fmt::format("backend '{}' returned {} distributions for {} inputs", backend.name(),
                            out.size(), batch.size()));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].scheme() != backend.scheme()) {
      throw Error(fmt::format("backend '{}' returned a {} distribution at index {}", backend.name(),
                              to_string(out[i].scheme()), i));
    }
    double sum = 0.0;
    for (double p : out[i].probabilities()) sum += p;
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
      throw Error(fmt::format("backend '{}' output {} sums to {}", backend.name(), i, sum));
    }
  }
  return out;
}

ConstantBackend::ConstantBackend(ClassDistribution distribution, InputDims dims, std::string name)
    : distribution_(std::move(distribution)), dims_(dims), name_(std::move(name)) {
  if (dims_.width < 1 || dims_.height < 1) throw Error("backend input dims must be >= 1");
}

std::vector<ClassDistribution> ConstantBackend::classify(std::span<const imaging::Tensor> batch) const {
  return std::vector<ClassDistribution>(batch.size(), distribution_);
}

}  // namespace roadcond::classifier
