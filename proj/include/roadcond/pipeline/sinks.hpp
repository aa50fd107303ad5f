// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadcond/classifier/classify.hpp"

struct sqlite3;

namespace roadcond::pipeline {

using classifier::LabelRecord;

/// Remote store for label records. submit() either stores the whole batch
/// or throws; it must be idempotent on (camera_id, timestamp).
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual std::string name() const = 0;
  virtual void submit(std::span<const LabelRecord> records) = 0;
};

class CallbackSink final : public RecordSink {
 public:
  using Callback = std::function<void(std::span<const LabelRecord>)>;
  explicit CallbackSink(Callback callback, std::string name = "callback");
  std::string name() const override { return name_; }
  void submit(std::span<const LabelRecord> records) override { callback_(records); }

 private:
  Callback callback_;
  std::string name_;
};

/// label_records(camera_id, ts, class, confidence, lat, lon) with primary
/// key (camera_id, ts); submit() upserts inside one transaction.
class SqliteSink final : public RecordSink {
 public:
  explicit SqliteSink(const std::filesystem::path& path);
  ~SqliteSink() override;
  SqliteSink(const SqliteSink&) = delete;
  SqliteSink& operator=(const SqliteSink&) = delete;

  std::string name() const override;
  void submit(std::span<const LabelRecord> records) override;

  std::size_t row_count() const;
  /// Ordered by (camera_id, ts).
  std::vector<LabelRecord> rows() const;

 private:
  void exec(const char* sql) const;

  std::filesystem::path path_;
  sqlite3* db_ = nullptr;
  mutable std::mutex mu_;
};

/// "sqlite:PATH", "sqlite://PATH", or a path ending in .db/.sqlite/.sqlite3.
/// postgres URLs are recognised and rejected with an explanatory error.
std::unique_ptr<RecordSink> open_sink(std::string_view url);

}  // namespace roadcond::pipeline
