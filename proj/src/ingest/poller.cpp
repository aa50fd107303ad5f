// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/ingest/poller.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace roadcond::ingest {

Poller::Poller(std::vector<CameraRecord> catalogue, PollerOptions options, SnapshotSink sink)
    : catalogue_(std::move(catalogue)), options_(std::move(options)), sink_(std::move(sink)) {
  if (options_.workers < 1) throw Error("poller needs at least one worker");
  if (options_.interval.count() <= 0) throw Error("poll interval must be positive");
  if (!sink_) throw Error("poller needs a sink");
  if (!options_.fetcher) {
    options_.fetcher = [fetch = options_.fetch](const CameraRecord& cam) {
      return fetch_snapshot(cam, fetch);
    };
  }
  workers_.reserve(options_.workers);
  for (std::size_t i = 0; i < options_.workers; ++i) workers_.emplace_back([this] { worker_loop(); });
  scheduler_ = std::thread([this] { schedule_loop(); });
}

Poller::~Poller() {
  stop();
  wait();
}

void Poller::stop() {
  std::lock_guard lock(mu_);
  if (stopping_) return;
  stopping_ = true;
  outstanding_ -= queue_.size();
  queue_.clear();
  work_cv_.notify_all();
  done_cv_.notify_all();
}

void Poller::wait() {
  if (scheduler_.joinable()) scheduler_.join();
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
}

bool Poller::finished() const {
  std::lock_guard lock(mu_);
  return finished_;
}

std::size_t Poller::completed_cycles() const {
  std::lock_guard lock(mu_);
  return completed_cycles_;
}

std::size_t Poller::emitted() const {
  std::lock_guard lock(mu_);
  return emitted_;
}

std::optional<std::string> Poller::error() const {
  std::lock_guard lock(mu_);
  return error_;
}

void Poller::schedule_loop() {
  std::unique_lock lock(mu_);
  while (!stopping_) {
    if (options_.max_cycles && completed_cycles_ >= *options_.max_cycles) break;
    if (catalogue_.empty()) break;

    const auto cycle_start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < catalogue_.size(); ++i) queue_.push_back(i);
    outstanding_ = catalogue_.size();
    work_cv_.notify_all();

    done_cv_.wait(lock, [&] { return outstanding_ == 0; });
    if (stopping_) break;
    ++completed_cycles_;
    if (options_.max_cycles && completed_cycles_ >= *options_.max_cycles) break;

    done_cv_.wait_until(lock, cycle_start + options_.interval, [&] { return stopping_; });
  }
  // Let in-flight fetches drain before the workers are told to exit.
  done_cv_.wait(lock, [&] { return outstanding_ == 0; });
  stopping_ = true;
  finished_ = true;
  work_cv_.notify_all();
}

void Poller::worker_loop() {
  for (;;) {
    std::size_t index;
    {
      std::unique_lock lock(mu_);
      work_cv_.wait(lock, [&] { return finished_ || !queue_.empty(); });
      if (queue_.empty()) return;
      index = queue_.front();
      queue_.pop_front();
    }
    const CameraRecord& cam = catalogue_[index];
    FetchResult result = [&]() -> FetchResult {
      try {
        return options_.fetcher(cam);
      } catch (const std::exception& e) {
        return FetchFailure{cam.camera_id, now_utc(), FailureKind::Connection, 0, e.what()};
      }
    }();
    emit(std::move(result));
    std::lock_guard lock(mu_);
    --outstanding_;
    done_cv_.notify_all();
  }
}

void Poller::emit(FetchResult result) {
  {
    std::lock_guard lock(mu_);
    auto& last = last_seen_[camera_id_of(result)];
    std::visit([&](auto& r) { r.fetched_at = std::max(r.fetched_at, last); }, result);
    last = fetched_at_of(result);
  }
  std::optional<std::string> rejection;
  try {
    if (!sink_(std::move(result))) rejection = "sink rejected an emission";
  } catch (const std::exception& e) {
    rejection = fmt::format("sink failed: {}", e.what());
  }
  std::lock_guard lock(mu_);
  ++emitted_;
  if (rejection) {
    if (!error_) {
      spdlog::error("poller stopping: {}", *rejection);
      error_ = std::move(rejection);
    }
    if (!stopping_) {
      stopping_ = true;
      outstanding_ -= queue_.size();
      queue_.clear();
      done_cv_.notify_all();
    }
  }
}

std::unique_ptr<Poller> run_poller(std::vector<CameraRecord> catalogue, PollerOptions options,
                                   SnapshotSink sink) {
  return std::make_unique<Poller>(std::move(catalogue), std::move(options), std::move(sink));
}

}  // namespace roadcond::ingest
