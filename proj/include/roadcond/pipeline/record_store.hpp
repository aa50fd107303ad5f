// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadcond/classifier/classify.hpp"
#include "roadcond/core/error.hpp"

namespace roadcond::pipeline {

using classifier::LabelRecord;

inline constexpr std::string_view kRecordHeader = "image_name,latitude,longitude,class,confidence,timestamp";

/// "<camera_id>_<YYYYMMDDTHHMMSSZ>"
std::string image_name(const LabelRecord& record);
std::string image_name(std::string_view camera_id, Timestamp t);

std::string format_record_row(const LabelRecord& record);
/// Inverse of format_record_row. Throws roadcond::Error on a malformed row.
LabelRecord parse_record_row(std::string_view line);

/// "labels-YYYYMMDD.csv" for the UTC day of `t`.
std::string record_file_name(Timestamp t);

/// Raised when the filesystem reports ENOSPC or EDQUOT. Nothing from the
/// failed append is left behind.
class DiskFullError : public Error {
 public:
  using Error::Error;
};

/// Daily CSV record catalogue. append() is serialized internally, so any
/// number of threads may call it; each call reaches the disk (fdatasync)
/// before returning.
class RecordStore {
 public:
  explicit RecordStore(std::filesystem::path directory);

  const std::filesystem::path& directory() const { return directory_; }

  void append(const LabelRecord& record);
  void append(std::span<const LabelRecord> records);

  /// Record files in name (and therefore date) order.
  std::vector<std::filesystem::path> files() const;
  std::vector<LabelRecord> read_all() const;
  /// Rows of one file by name; empty when it does not exist yet.
  std::vector<LabelRecord> read_file(const std::string& name) const;

  /// Test hook: called before each write; a non-zero errno is reported as
  /// if write(2) had failed with it.
  void set_fault_injector(std::function<int()> injector);

 private:
  void append_locked(const std::filesystem::path& path, const std::string& rows);

  std::filesystem::path directory_;
  mutable std::mutex mu_;
  std::function<int()> fault_;
};

/// Rows of one record file. Throws on a missing header or malformed row.
std::vector<LabelRecord> read_record_file(const std::filesystem::path& path);
/// All record files under `directory`; empty when it does not exist.
std::vector<LabelRecord> load_records(const std::filesystem::path& directory);
/// A single record file, or every record file when given a directory.
std::vector<LabelRecord> load_records_from(const std::filesystem::path& path);

}  // namespace roadcond::pipeline
