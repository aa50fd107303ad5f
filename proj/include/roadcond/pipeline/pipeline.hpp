// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "roadcond/classifier/backend.hpp"
#include "roadcond/imaging/image.hpp"
#include "roadcond/ingest/poller.hpp"
#include "roadcond/pipeline/bounded_queue.hpp"
#include "roadcond/pipeline/record_store.hpp"
#include "roadcond/pipeline/submitter.hpp"

namespace roadcond::pipeline {

struct PipelineConfig {
  std::filesystem::path catalogue_path;
  /// Used instead of catalogue_path when non-empty.
  std::vector<ingest::CameraRecord> cameras;
  std::chrono::milliseconds poll_interval{60'000};
  std::size_t workers = 4;
  std::size_t batch_size = 16;
  /// Path of an RWB1 model file; ignored when `backend` is set.
  std::string backend_spec;
  std::shared_ptr<const classifier::Backend> backend;
  Scheme scheme = Scheme::FiveClass;
  std::filesystem::path output_dir = "out";
  /// sqlite:PATH; no submission when empty and `sink` is unset.
  std::optional<std::string> db_url;
  std::shared_ptr<RecordSink> sink;

  std::chrono::milliseconds linger{2000};
  std::optional<std::size_t> max_cycles;
  ingest::FetchOptions fetch;
  ingest::Fetcher fetcher;
  bool store_images = true;
  BackoffPolicy backoff;
  std::chrono::milliseconds submit_poll{1000};
  std::chrono::milliseconds disk_full_retry{250};

  /// Throws roadcond::Error; batch_size and workers must be at least 1.
  void validate() const;
};

enum class EventKind { AcquireEnd, DecodeEnd, ClassifyStart, ClassifyEnd, AppendEnd };

std::string_view to_string(EventKind kind);

struct StageEvent {
  EventKind kind;
  /// Camera id for per-image events, batch number for batch events.
  std::string subject;
  std::chrono::steady_clock::time_point at;
};

struct StageCounters {
  std::size_t fetched = 0;
  std::size_t fetch_failures = 0;
  std::size_t corrupt = 0;
  std::size_t decoded = 0;
  std::size_t batches = 0;
  std::size_t classified = 0;
  std::size_t classify_failures = 0;
  std::size_t appended = 0;
  std::size_t disk_full_retries = 0;
  std::size_t submitted = 0;
  std::size_t dead_lettered = 0;
};

/// Acquisition, integrity check and resize, batched classification, record
/// append and submission, each on its own thread(s) and linked by bounded
/// queues of four batches, so a slow stage backs up into acquisition.
class Pipeline {
 public:
  /// Loads the backend and catalogue and starts every stage. Throws
  /// roadcond::Error when either cannot be loaded.
  explicit Pipeline(PipelineConfig config);
  ~Pipeline();
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  /// Stops acquisition, then lets every snapshot already fetched flow through
  /// classification and into the record store before returning. The
  /// submitter is stopped last.
  void stop();
  /// Blocks until acquisition has finished by itself (max_cycles) and the
  /// queues have drained. The submitter keeps running.
  void wait();

  StageCounters counters() const;
  std::vector<StageEvent> events() const;
  const RecordStore& store() const { return *store_; }
  /// Null when no sink is configured.
  Submitter* submitter() { return submitter_.get(); }
  const classifier::Backend& backend() const { return *backend_; }
  const PipelineConfig& config() const { return config_; }
  std::filesystem::path images_dir() const { return config_.output_dir / "images"; }

 private:
  struct Fetched {
    std::size_t camera;
    Timestamp at;
    std::vector<std::uint8_t> body;
  };
  struct Decoded {
    std::size_t camera;
    Timestamp at;
    imaging::Image image;
  };

  bool on_fetch(ingest::FetchResult result);
  void decode_loop();
  void classify_loop();
  void write_loop();
  void log(EventKind kind, std::string subject);
  void join_stages();

  PipelineConfig config_;
  std::shared_ptr<const classifier::Backend> backend_;
  std::vector<ingest::CameraRecord> cameras_;
  std::unordered_map<std::string, std::size_t> camera_index_;
  std::unique_ptr<RecordStore> store_;
  std::unique_ptr<Submitter> submitter_;

  BoundedQueue<Fetched> fetched_;
  BoundedQueue<Decoded> decoded_;
  BoundedQueue<std::vector<LabelRecord>> labelled_;

  mutable std::mutex mu_;
  StageCounters counters_;
  std::vector<StageEvent> events_;
  std::mutex join_mu_;

  std::unique_ptr<ingest::Poller> poller_;
  std::thread decode_thread_;
  std::thread classify_thread_;
  std::thread write_thread_;
};

/// Loads an RWB1 model file for the given scheme.
std::shared_ptr<const classifier::Backend> load_backend(const std::string& spec, Scheme scheme);

}  // namespace roadcond::pipeline
