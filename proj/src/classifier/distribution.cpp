// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/classifier/distribution.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "roadcond/core/error.hpp"

namespace roadcond::classifier {

ClassDistribution::ClassDistribution(Scheme scheme, std::vector<double> probabilities)
    : scheme_(scheme), probabilities_(std::move(probabilities)) {
  if (probabilities_.size() != class_count(scheme_)) {
    throw Error(fmt::format("distribution has {} entries, scheme {} has {} classes",
                            probabilities_.size(), to_string(scheme_), class_count(scheme_)));
  }
  double sum = 0.0;
  for (double p : probabilities_) {
    if (!std::isfinite(p) || p < 0.0) throw Error(fmt::format("invalid probability {}", p));
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    throw Error(fmt::format("probabilities sum to {}, expected 1", sum));
  }
}

ClassDistribution ClassDistribution::from_logits(Scheme scheme, std::span<const double> logits) {
  return ClassDistribution(scheme, softmax(logits));
}

ClassDistribution ClassDistribution::one_hot(Scheme scheme, RoadCondition label) {
  const auto idx = class_index(scheme, label);
  if (!idx) throw Error(fmt::format("{} is not a {} class", to_string(label), to_string(scheme)));
  std::vector<double> p(class_count(scheme), 0.0);
  p[*idx] = 1.0;
  return ClassDistribution(scheme, std::move(p));
}

double ClassDistribution::probability(RoadCondition c) const {
  const auto idx = class_index(scheme_, c);
  return idx ? probabilities_[*idx] : 0.0;
}

std::size_t ClassDistribution::argmax_index() const {
  return static_cast<std::size_t>(std::max_element(probabilities_.begin(), probabilities_.end()) -
                                  probabilities_.begin());
}

RoadCondition ClassDistribution::argmax() const { return classes_of(scheme_)[argmax_index()]; }

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) return {};
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace roadcond::classifier
