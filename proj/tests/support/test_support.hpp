// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "roadcond/classifier/backend.hpp"
#include "roadcond/pipeline/sinks.hpp"

namespace roadcond::testing {

std::filesystem::path fixture(const std::string& relative);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& path);

/// JPEG of a synthetic scene of the given class.
std::vector<std::uint8_t> scene_jpeg(RoadCondition label, int width, int height, std::uint64_t seed);

/// Backend that returns a fixed class and sleeps per batch; records the
/// number of batches it saw.
class SlowConstantBackend final : public classifier::Backend {
 public:
  SlowConstantBackend(RoadCondition label, classifier::InputDims dims, std::chrono::milliseconds per_batch);
  std::string name() const override { return "slow-constant"; }
  classifier::InputDims input_dims() const override { return dims_; }
  Scheme scheme() const override { return Scheme::FiveClass; }
  bool thread_safe() const override { return false; }
  std::vector<classifier::ClassDistribution> classify(std::span<const imaging::Tensor> batch) const override;
  std::size_t batches() const { return batches_.load(); }
  std::size_t max_concurrent() const { return max_concurrent_.load(); }

 private:
  RoadCondition label_;
  classifier::InputDims dims_;
  std::chrono::milliseconds per_batch_;
  mutable std::atomic<std::size_t> batches_{0};
  mutable std::atomic<std::size_t> in_flight_{0};
  mutable std::atomic<std::size_t> max_concurrent_{0};
};

/// Sink that fails its first `failures` submissions, then accepts. When
/// `gated`, every submission blocks until release() is called.
class ScriptedSink final : public pipeline::RecordSink {
 public:
  explicit ScriptedSink(std::size_t failures = 0, bool gated = false);
  std::string name() const override { return "scripted"; }
  void submit(std::span<const pipeline::LabelRecord> records) override;
  void release();
  void fail_forever() { failures_ = SIZE_MAX; }

  std::size_t attempts() const;
  std::size_t accepted_records() const;
  std::vector<pipeline::LabelRecord> accepted() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::size_t failures_;
  bool gated_;
  std::size_t attempts_ = 0;
  std::vector<pipeline::LabelRecord> accepted_;
};

}  // namespace roadcond::testing
