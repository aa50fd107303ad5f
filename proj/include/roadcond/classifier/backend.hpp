// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "roadcond/classifier/distribution.hpp"
#include "roadcond/imaging/image.hpp"

namespace roadcond::classifier {

struct InputDims {
  int width = 0;
  int height = 0;

  friend bool operator==(const InputDims&, const InputDims&) = default;
};

/// Classification backend contract. classify returns one distribution per
/// input tensor, in input order, and must not depend on batch order.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string name() const = 0;
  virtual InputDims input_dims() const = 0;
  virtual Scheme scheme() const = 0;
  /// False when concurrent classify calls are unsafe; callers then serialize.
  virtual bool thread_safe() const { return true; }
  /// Whether bench can train this backend.
  virtual bool trainable() const { return false; }

  virtual std::vector<ClassDistribution> classify(std::span<const imaging::Tensor> batch) const = 0;
};

/// classify plus contract checks: output length, scheme and normalization.
/// Throws roadcond::Error on violation.
std::vector<ClassDistribution> classify_checked(const Backend& backend,
                                                std::span<const imaging::Tensor> batch);

/// Returns the same distribution for every input.
class ConstantBackend final : public Backend {
 public:
  ConstantBackend(ClassDistribution distribution, InputDims dims, std::string name = "constant");

  std::string name() const override { return name_; }
  InputDims input_dims() const override { return dims_; }
  Scheme scheme() const override { return distribution_.scheme(); }
  std::vector<ClassDistribution> classify(std::span<const imaging::Tensor> batch) const override;

 private:
  ClassDistribution distribution_;
  InputDims dims_;
  std::string name_;
};

}  // namespace roadcond::classifier
