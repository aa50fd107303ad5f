// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/cli/bench.hpp"

#include <chrono>
#include <charconv>

#include <fmt/format.h>
#include <json.hpp>

#include "roadcond/classifier/model_file.hpp"
#include "roadcond/core/error.hpp"

namespace roadcond::cli {

std::optional<int> baseline_grid(std::string_view name) {
  constexpr std::string_view prefix = "baseline-";
  if (!name.starts_with(prefix)) return std::nullopt;
  name.remove_prefix(prefix.size());
  int grid = 0;
  const auto [p, ec] = std::from_chars(name.data(), name.data() + name.size(), grid);
  if (ec != std::errc{} || p != name.data() + name.size() || grid < 1) return std::nullopt;
  return grid;
}

BenchResult bench_baseline(std::string name, int grid, std::span<const classifier::TrainingSample> train,
                           std::span<const classifier::TrainingSample> validation, Scheme scheme,
                           const BenchOptions& options) {
  BenchResult result{std::move(name), {}};
  if (options.epochs == 0) return result;
  classifier::TrainOptions topts;
  topts.epochs = options.epochs;
  topts.learning_rate = options.learning_rate;
  topts.batch_size = options.batch_size;
  topts.grid = grid;
  topts.seed = options.seed;
  classifier::BaselineTrainer trainer(train, scheme, topts);

  std::int64_t cumulative = 0;
  for (std::size_t e = 1; e <= options.epochs; ++e) {
    const auto start = std::chrono::steady_clock::now();
    trainer.run_epoch();
    const double train_acc = trainer.accuracy(train);
    const double val_acc = validation.empty() ? 0.0 : trainer.accuracy(validation);
    const auto saved = classifier::encode_rwb1(trainer.model());
    const auto stop = std::chrono::steady_clock::now();
    if (saved.empty()) throw Error("model serialisation produced no bytes");
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count();
    cumulative += us;
    result.epochs.push_back({e, train_acc, val_acc, us, cumulative});
  }
  return result;
}

namespace {

std::size_t max_epochs(const std::vector<BenchResult>& results) {
  std::size_t n = 0;
  for (const auto& r : results) n = std::max(n, r.epochs.size());
  return n;
}

std::string ms(std::int64_t us) { return fmt::format("{}.{:03d}", us / 1000, us % 1000); }

}  // namespace

std::string render_accuracy_table(const std::vector<BenchResult>& results) {
  std::string out = fmt::format("{:>5}", "epoch");
  for (const auto& r : results) out += fmt::format("  {:>14}  {:>14}", r.backend + " train", r.backend + " val");
  out.push_back('\n');
  for (std::size_t i = 0; i < max_epochs(results); ++i) {
    out += fmt::format("{:>5}", i + 1);
    for (const auto& r : results) {
      if (i < r.epochs.size()) {
        out += fmt::format("  {:>14.4f}  {:>14.4f}", r.epochs[i].train_accuracy, r.epochs[i].validation_accuracy);
      } else {
        out += fmt::format("  {:>14}  {:>14}", "", "");
      }
    }
    out.push_back('\n');
  }
  return out;
}

std::string render_timing_table(const std::vector<BenchResult>& results) {
  std::string out = fmt::format("{:>5}", "epoch");
  for (const auto& r : results) out += fmt::format("  {:>14}  {:>14}", r.backend + " ms", r.backend + " cum");
  out.push_back('\n');
  for (std::size_t i = 0; i < max_epochs(results); ++i) {
    out += fmt::format("{:>5}", i + 1);
    for (const auto& r : results) {
      if (i < r.epochs.size()) {
        out += fmt::format("  {:>14}  {:>14}", ms(r.epochs[i].duration_us), ms(r.epochs[i].cumulative_us));
      } else {
        out += fmt::format("  {:>14}  {:>14}", "", "");
      }
    }
    out.push_back('\n');
  }
  return out;
}

std::string bench_json(const std::vector<BenchResult>& results, const std::vector<std::string>& skipped) {
  nlohmann::ordered_json doc;
  doc["backends"] = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json epochs = nlohmann::ordered_json::array();
    for (const auto& e : r.epochs) {
      epochs.push_back({{"epoch", e.epoch},
                        {"train_accuracy", e.train_accuracy},
                        {"validation_accuracy", e.validation_accuracy},
                        {"duration_us", e.duration_us},
                        {"cumulative_us", e.cumulative_us}});
    }
    doc["backends"].push_back({{"name", r.backend}, {"epochs", std::move(epochs)}});
  }
  doc["skipped"] = skipped;
  return doc.dump(2) + "\n";
}

}  // namespace roadcond::cli
