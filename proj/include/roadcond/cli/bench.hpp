// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadcond/classifier/baseline.hpp"

namespace roadcond::cli {

struct EpochResult {
  std::size_t epoch = 0;  // 1-based
  double train_accuracy = 0.0;
  double validation_accuracy = 0.0;
  std::int64_t duration_us = 0;
  std::int64_t cumulative_us = 0;
};

struct BenchResult {
  std::string backend;
  std::vector<EpochResult> epochs;

  std::int64_t cumulative_us() const { return epochs.empty() ? 0 : epochs.back().cumulative_us; }
};

struct BenchOptions {
  std::size_t epochs = 12;
  std::uint64_t seed = 0;
  double learning_rate = 0.5;
  std::size_t batch_size = 16;
};

/// "baseline-G" names a trainable baseline with a G x G pooling grid; other
/// names (model files, constant backends) are not trainable.
std::optional<int> baseline_grid(std::string_view backend_name);

/// Trains one baseline variant for options.epochs epochs. Each epoch's
/// duration covers training, validation and serialising the model.
BenchResult bench_baseline(std::string name, int grid, std::span<const classifier::TrainingSample> train,
                           std::span<const classifier::TrainingSample> validation, Scheme scheme,
                           const BenchOptions& options);

/// Per-epoch train/validation accuracy, one column pair per backend.
std::string render_accuracy_table(const std::vector<BenchResult>& results);
/// Per-epoch and cumulative durations in milliseconds.
std::string render_timing_table(const std::vector<BenchResult>& results);
std::string bench_json(const std::vector<BenchResult>& results, const std::vector<std::string>& skipped);

}  // namespace roadcond::cli
