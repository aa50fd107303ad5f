// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace roadcond::classifier {

inline constexpr double kScalingTolerance = 0.1;

struct ScalingCoefficients {
  double phi = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;

  /// alpha * beta^2 * gamma^2
  double constraint() const { return alpha * beta * beta * gamma * gamma; }
};

struct NetworkDims {
  double depth = 1.0;
  double width = 1.0;
  int resolution = 224;
};

/// depth * alpha^phi, width * beta^phi, resolution * gamma^phi rounded to the
/// nearest integer. Throws roadcond::Error when phi < 0, a coefficient is
/// below 1, or |constraint - 2| exceeds `tolerance` (the message carries the
/// constraint value).
NetworkDims compound_scale(const NetworkDims& base, const ScalingCoefficients& coeffs,
                           double tolerance = kScalingTolerance);

}  // namespace roadcond::classifier
