// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "roadcond/pipeline/record_store.hpp"
#include "roadcond/pipeline/sinks.hpp"

namespace roadcond::pipeline {

struct BackoffPolicy {
  std::chrono::milliseconds base{1000};
  std::chrono::milliseconds cap{60'000};
  int max_attempts = 8;

  /// Wait after the given failed attempt (1-based): min(cap, base * 2^(attempt-1)).
  std::chrono::milliseconds delay_after(int attempt) const;
  void validate() const;
};

struct SubmissionBatch {
  std::string file;
  std::size_t first_row = 0;
  std::vector<LabelRecord> records;
  int attempt = 1;
  std::chrono::system_clock::time_point next_retry_at{};
};

enum class SubmitStatus { Acknowledged, RetryScheduled, DeadLettered };

struct SubmitOutcome {
  SubmitStatus status = SubmitStatus::Acknowledged;
  std::string error;
};

/// Makes attempt number batch.attempt. On failure either schedules the next
/// attempt (incrementing batch.attempt and setting next_retry_at) or, once
/// max_attempts have failed, reports DeadLettered.
SubmitOutcome submit_records(RecordSink& sink, SubmissionBatch& batch, const BackoffPolicy& policy);

/// Rows handled (acknowledged or dead-lettered) per record file.
struct Watermark {
  std::map<std::string, std::size_t> rows;
  std::size_t submitted = 0;
  std::size_t dead_lettered = 0;

  std::size_t total() const;
  friend bool operator==(const Watermark&, const Watermark&) = default;
};

Watermark load_watermark(const std::filesystem::path& path);
void save_watermark(const Watermark& watermark, const std::filesystem::path& path);

struct SubmitterOptions {
  std::size_t batch_size = 16;
  BackoffPolicy backoff;
  std::chrono::milliseconds poll_interval{1000};
  /// Default to files inside the record store directory.
  std::filesystem::path watermark_path;
  std::filesystem::path dead_letter_path;
};

struct SubmitterStats {
  std::size_t attempts = 0;
  std::size_t failures = 0;
  std::size_t batches_acknowledged = 0;
  std::size_t batches_dead_lettered = 0;
};

/// At-least-once delivery of the record store to a sink. Progress survives
/// restarts through the watermark file; rows past it are resent.
class Submitter {
 public:
  Submitter(const RecordStore& store, std::shared_ptr<RecordSink> sink, SubmitterOptions options = {});
  ~Submitter();
  Submitter(const Submitter&) = delete;
  Submitter& operator=(const Submitter&) = delete;

  /// Starts the background thread.
  void start();
  /// Wakes the background thread after new rows were appended.
  void notify();
  /// Stops after the attempt in progress. A batch waiting for its retry stays
  /// pending and is resent on the next start.
  void stop();

  /// Submits everything appended so far on the calling thread, sleeping
  /// through backoff. Returns early only if stop() is requested.
  void drain();

  Watermark watermark() const;
  SubmitterStats stats() const;
  std::size_t pending_records() const;
  const SubmitterOptions& options() const { return options_; }

 private:
  void run();
  void pass();
  void dead_letter(const SubmissionBatch& batch, const std::string& error);
  void advance(const SubmissionBatch& batch, bool acknowledged);

  const RecordStore& store_;
  std::shared_ptr<RecordSink> sink_;
  SubmitterOptions options_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::mutex pass_mu_;
  Watermark watermark_;
  SubmitterStats stats_;
  bool stopping_ = false;
  bool notified_ = false;
  std::thread thread_;
};

struct ReplayResult {
  std::size_t replayed_batches = 0;
  std::size_t replayed_records = 0;
  std::size_t remaining_batches = 0;
};

/// Resubmits each dead-lettered batch once; acknowledged batches are removed
/// from the file, the rest stay.
ReplayResult replay_dead_letters(const std::filesystem::path& path, RecordSink& sink);

}  // namespace roadcond::pipeline
