// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/classifier/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "roadcond/core/error.hpp"
#include "roadcond/core/random.hpp"

namespace roadcond::classifier {

void BaselineModel::validate() const {
  if (dims.width < 1 || dims.height < 1) throw Error("baseline input dims must be >= 1");
  if (grid < 1) throw Error("baseline grid must be >= 1");
  if (weights.size() != num_classes() * num_features()) {
    throw Error(fmt::format("baseline weights have {} entries, expected {} x {}", weights.size(),
                            num_classes(), num_features()));
  }
  if (bias.size() != num_classes()) {
    throw Error(fmt::format("baseline bias has {} entries, expected {}", bias.size(), num_classes()));
  }
}

std::vector<double> pooled_features(const imaging::Tensor& tensor, int grid) {
  if (grid < 1) throw Error("grid must be >= 1");
  const auto cell_range = [grid](int i, int extent) {
    const int lo = static_cast<int>(static_cast<long long>(i) * extent / grid);
    const int hi = static_cast<int>(static_cast<long long>(i + 1) * extent / grid);
    const int first = std::min(lo, extent - 1);
    return std::pair{first, std::max(hi, first + 1)};
  };
  std::vector<double> out(static_cast<std::size_t>(grid) * grid * imaging::kChannels, 0.0);
  for (int gy = 0; gy < grid; ++gy) {
    const auto [y0, y1] = cell_range(gy, tensor.height);
    for (int gx = 0; gx < grid; ++gx) {
      const auto [x0, x1] = cell_range(gx, tensor.width);
      const double n = static_cast<double>(y1 - y0) * (x1 - x0);
      for (int c = 0; c < imaging::kChannels; ++c) {
        double sum = 0.0;
        for (int y = y0; y < y1; ++y) {
          for (int x = x0; x < x1; ++x) sum += tensor.at(x, y, c);
        }
        out[(static_cast<std::size_t>(gy) * grid + gx) * imaging::kChannels + c] = sum / n;
      }
    }
  }
  return out;
}

BaselineBackend::BaselineBackend(BaselineModel model, std::string name)
    : model_(std::move(model)), name_(std::move(name)) {
  model_.validate();
}

std::vector<double> BaselineBackend::logits(const imaging::Tensor& tensor) const {
  if (tensor.width != model_.dims.width || tensor.height != model_.dims.height) {
    throw Error(fmt::format("tensor is {}x{}, backend '{}' expects {}x{}", tensor.width,
                            tensor.height, name_, model_.dims.width, model_.dims.height));
  }
  const auto features = pooled_features(tensor, model_.grid);
  const std::size_t nf = model_.num_features();
  std::vector<double> out(model_.num_classes());
  for (std::size_t k = 0; k < out.size(); ++k) {
    double z = model_.bias[k];
    for (std::size_t f = 0; f < nf; ++f) z += static_cast<double>(model_.weights[k * nf + f]) * features[f];
    out[k] = z;
  }
  return out;
}

std::vector<ClassDistribution> BaselineBackend::classify(std::span<const imaging::Tensor> batch) const {
  std::vector<ClassDistribution> out;
  out.reserve(batch.size());
  for (const auto& t : batch) out.push_back(ClassDistribution::from_logits(model_.scheme, logits(t)));
  return out;
}

BaselineTrainer::BaselineTrainer(std::span<const TrainingSample> samples, Scheme scheme,
                                 TrainOptions options)
    : scheme_(scheme), options_(options) {
  if (samples.empty()) throw Error("training set is empty");
  if (options_.grid < 1) throw Error("grid must be >= 1");
  if (options_.batch_size < 1) throw Error("batch size must be >= 1");
  if (!(options_.learning_rate > 0.0)) throw Error("learning rate must be positive");
  dims_ = {samples.front().tensor.width, samples.front().tensor.height};
  num_features_ = static_cast<std::size_t>(options_.grid) * options_.grid * imaging::kChannels;
  num_classes_ = class_count(scheme_);

  std::set<std::size_t> distinct;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.tensor.width != dims_.width || s.tensor.height != dims_.height) {
      throw Error(fmt::format("sample {} is {}x{}, expected {}x{}", i, s.tensor.width,
                              s.tensor.height, dims_.width, dims_.height));
    }
    const auto idx = class_index(scheme_, s.label);
    if (!idx) {
      throw Error(fmt::format("sample {} label {} is not a {} class", i, to_string(s.label),
                              to_string(scheme_)));
    }
    distinct.insert(*idx);
    targets_.push_back(*idx);
    features_.push_back(pooled_features(s.tensor, options_.grid));
  }
  if (distinct.size() < 2) throw Error("training set needs at least two classes");
  weights_.assign(num_classes_ * num_features_, 0.0);
  bias_.assign(num_classes_, 0.0);
}

std::vector<double> BaselineTrainer::logits_for(std::span<const double> features) const {
  std::vector<double> z(num_classes_);
  for (std::size_t k = 0; k < num_classes_; ++k) {
    double acc = bias_[k];
    for (std::size_t f = 0; f < num_features_; ++f) acc += weights_[k * num_features_ + f] * features[f];
    z[k] = acc;
  }
  return z;
}

double BaselineTrainer::run_epoch() {
  std::vector<std::size_t> order(features_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = SplitMix64::derive(options_.seed, epoch_);
  shuffle(order, rng);

  std::vector<double> grad_w(weights_.size());
  std::vector<double> grad_b(bias_.size());
  double total_loss = 0.0;
  for (std::size_t start = 0; start < order.size(); start += options_.batch_size) {
    const std::size_t end = std::min(order.size(), start + options_.batch_size);
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    for (std::size_t i = start; i < end; ++i) {
      const auto& x = features_[order[i]];
      const std::size_t y = targets_[order[i]];
      const auto p = softmax(logits_for(x));
      total_loss -= std::log(std::max(p[y], 1e-300));
      for (std::size_t k = 0; k < num_classes_; ++k) {
        const double d = p[k] - (k == y ? 1.0 : 0.0);
        grad_b[k] += d;
        for (std::size_t f = 0; f < num_features_; ++f) grad_w[k * num_features_ + f] += d * x[f];
      }
    }
    const double step = options_.learning_rate / static_cast<double>(end - start);
    for (std::size_t j = 0; j < weights_.size(); ++j) weights_[j] -= step * grad_w[j];
    for (std::size_t k = 0; k < bias_.size(); ++k) bias_[k] -= step * grad_b[k];
  }
  ++epoch_;
  return total_loss / static_cast<double>(features_.size());
}

BaselineModel BaselineTrainer::model() const {
  BaselineModel m;
  m.dims = dims_;
  m.grid = options_.grid;
  m.scheme = scheme_;
  m.weights.assign(weights_.begin(), weights_.end());
  m.bias.assign(bias_.begin(), bias_.end());
  return m;
}

double BaselineTrainer::accuracy(std::span<const TrainingSample> samples) const {
  if (samples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& s : samples) {
    const auto z = logits_for(pooled_features(s.tensor, options_.grid));
    const auto best = static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
    if (classes_of(scheme_)[best] == s.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

std::shared_ptr<BaselineBackend> train_baseline(std::span<const TrainingSample> samples,
                                                Scheme scheme, const TrainOptions& options,
                                                std::string name) {
  BaselineTrainer trainer(samples, scheme, options);
  for (std::size_t e = 0; e < options.epochs; ++e) trainer.run_epoch();
  return std::make_shared<BaselineBackend>(trainer.model(), std::move(name));
}

}  // namespace roadcond::classifier
