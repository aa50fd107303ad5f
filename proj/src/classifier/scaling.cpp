// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/classifier/scaling.hpp"

#include <cmath>

#include <fmt/format.h>

#include "roadcond/core/error.hpp"

namespace roadcond::classifier {

NetworkDims compound_scale(const NetworkDims& base, const ScalingCoefficients& coeffs,
                           double tolerance) {
  if (!(coeffs.phi >= 0.0)) throw Error(fmt::format("phi must be >= 0, got {}", coeffs.phi));
  if (!(coeffs.alpha >= 1.0 && coeffs.beta >= 1.0 && coeffs.gamma >= 1.0)) {
    throw Error(fmt::format("alpha, beta and gamma must be >= 1, got {}, {}, {}", coeffs.alpha,
                            coeffs.beta, coeffs.gamma));
  }
  const double constraint = coeffs.constraint();
  if (std::abs(constraint - 2.0) > tolerance) {
    throw Error(fmt::format("alpha*beta^2*gamma^2 = {:.6f}, must be within {} of 2", constraint,
                            tolerance));
  }
  NetworkDims out;
  out.depth = base.depth * std::pow(coeffs.alpha, coeffs.phi);
  out.width = base.width * std::pow(coeffs.beta, coeffs.phi);
  out.resolution = static_cast<int>(std::round(base.resolution * std::pow(coeffs.gamma, coeffs.phi)));
  return out;
}

}  // namespace roadcond::classifier
