// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "roadcond/core/road_condition.hpp"

namespace roadcond::classifier {

inline constexpr double kNormalizationTolerance = 1e-6;

/// Softmax output over a scheme's classes, in the scheme's class order.
class ClassDistribution {
 public:
  /// Throws roadcond::Error when the arity does not match the scheme, a
  /// probability is negative or non-finite, or the sum is off by more than
  /// kNormalizationTolerance.
  ClassDistribution(Scheme scheme, std::vector<double> probabilities);

  static ClassDistribution from_logits(Scheme scheme, std::span<const double> logits);
  /// All mass on `label`.
  static ClassDistribution one_hot(Scheme scheme, RoadCondition label);

  Scheme scheme() const { return scheme_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  double probability(RoadCondition c) const;

  /// Index of the largest probability; ties go to the lowest index.
  std::size_t argmax_index() const;
  RoadCondition argmax() const;
  double confidence() const { return probabilities_[argmax_index()]; }

 private:
  Scheme scheme_;
  std::vector<double> probabilities_;
};

/// Numerically stable softmax (max-subtracted).
std::vector<double> softmax(std::span<const double> logits);

}  // namespace roadcond::classifier
