// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "roadcond/classifier/backend.hpp"

namespace roadcond::classifier {

/// Multinomial logistic regression over grid x grid x 3 mean-pooled features.
/// weights is class-major: weights[k * num_features + f].
struct BaselineModel {
  InputDims dims;
  int grid = 8;
  Scheme scheme = Scheme::FiveClass;
  std::vector<float> weights;
  std::vector<float> bias;

  std::size_t num_features() const { return static_cast<std::size_t>(grid) * grid * 3; }
  std::size_t num_classes() const { return class_count(scheme); }
  /// Throws roadcond::Error when sizes disagree with dims, grid and scheme.
  void validate() const;

  friend bool operator==(const BaselineModel&, const BaselineModel&) = default;
};

/// Mean of each cell of a grid x grid partition, per channel; cell (gx, gy)
/// covers columns [gx*W/grid, (gx+1)*W/grid), at least one pixel wide.
std::vector<double> pooled_features(const imaging::Tensor& tensor, int grid);

class BaselineBackend final : public Backend {
 public:
  explicit BaselineBackend(BaselineModel model, std::string name = "baseline");

  std::string name() const override { return name_; }
  InputDims input_dims() const override { return model_.dims; }
  Scheme scheme() const override { return model_.scheme; }
  bool trainable() const override { return true; }
  std::vector<ClassDistribution> classify(std::span<const imaging::Tensor> batch) const override;

  const BaselineModel& model() const { return model_; }
  std::vector<double> logits(const imaging::Tensor& tensor) const;

 private:
  BaselineModel model_;
  std::string name_;
};

struct TrainingSample {
  imaging::Tensor tensor;
  RoadCondition label;
};

struct TrainOptions {
  std::size_t epochs = 12;
  double learning_rate = 0.5;
  std::size_t batch_size = 16;
  int grid = 8;
  std::uint64_t seed = 0;
};

/// Minibatch SGD on softmax cross-entropy. Weights start at zero and each
/// epoch visits the samples in an order drawn from the seed, so training is
/// deterministic in (samples, scheme, options).
class BaselineTrainer {
 public:
  /// Throws roadcond::Error on an empty set, fewer than two distinct
  /// classes, labels outside the scheme, or tensors of mixed dimensions.
  BaselineTrainer(std::span<const TrainingSample> samples, Scheme scheme, TrainOptions options);

  /// Runs one epoch and returns the mean training loss.
  double run_epoch();
  std::size_t epochs_run() const { return epoch_; }

  BaselineModel model() const;
  /// Fraction of samples whose argmax matches the label under the current weights.
  double accuracy(std::span<const TrainingSample> samples) const;

 private:
  std::vector<double> logits_for(std::span<const double> features) const;

  Scheme scheme_;
  TrainOptions options_;
  InputDims dims_;
  std::size_t num_features_;
  std::size_t num_classes_;
  std::vector<std::vector<double>> features_;
  std::vector<std::size_t> targets_;
  std::vector<double> weights_;
  std::vector<double> bias_;
  std::size_t epoch_ = 0;
};

std::shared_ptr<BaselineBackend> train_baseline(std::span<const TrainingSample> samples,
                                                Scheme scheme, const TrainOptions& options,
                                                std::string name = "baseline");

}  // namespace roadcond::classifier
