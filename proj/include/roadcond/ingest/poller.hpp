// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "roadcond/ingest/fetch.hpp"

namespace roadcond::ingest {

/// Called concurrently from worker threads. Returning false (or throwing)
/// rejects the emission and stops the poller.
using SnapshotSink = std::function<bool(FetchResult)>;
using Fetcher = std::function<FetchResult(const CameraRecord&)>;

struct PollerOptions {
  std::chrono::milliseconds interval{60'000};
  std::size_t workers = 4;
  FetchOptions fetch;
  /// Stop after this many completed cycles; unbounded when empty.
  std::optional<std::size_t> max_cycles;
  /// Replaces fetch_snapshot, for tests and offline replays.
  Fetcher fetcher;
};

/// Polls every camera once per interval with at most `workers` fetches in
/// flight. A cycle ends when every camera of that cycle has been emitted;
/// the next cycle starts at the later of cycle start + interval and that
/// point. fetched_at is clamped to be non-decreasing per camera.
class Poller {
 public:
  Poller(std::vector<CameraRecord> catalogue, PollerOptions options, SnapshotSink sink);
  ~Poller();

  Poller(const Poller&) = delete;
  Poller& operator=(const Poller&) = delete;

  /// Requests a graceful stop: queued fetches are dropped, in-flight fetches
  /// finish and are emitted. Returns immediately.
  void stop();
  /// Blocks until the poller has stopped (max_cycles reached, stop(), or a
  /// sink rejection).
  void wait();
  bool finished() const;

  std::size_t completed_cycles() const;
  std::size_t emitted() const;
  /// Set when a sink rejection stopped the poller.
  std::optional<std::string> error() const;

 private:
  void schedule_loop();
  void worker_loop();
  void emit(FetchResult result);

  std::vector<CameraRecord> catalogue_;
  PollerOptions options_;
  SnapshotSink sink_;

  mutable std::mutex mu_;
  std::condition_variable work_cv_;
  std::condition_variable done_cv_;
  std::deque<std::size_t> queue_;
  std::size_t outstanding_ = 0;
  std::size_t completed_cycles_ = 0;
  std::size_t emitted_ = 0;
  bool stopping_ = false;
  bool finished_ = false;
  std::optional<std::string> error_;
  std::unordered_map<std::string, Timestamp> last_seen_;

  std::vector<std::thread> workers_;
  std::thread scheduler_;
};

/// Validates arguments (workers >= 1, positive interval) and starts polling.
std::unique_ptr<Poller> run_poller(std::vector<CameraRecord> catalogue, PollerOptions options,
                                   SnapshotSink sink);

}  // namespace roadcond::ingest
