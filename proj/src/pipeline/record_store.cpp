// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/pipeline/record_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "roadcond/core/csv.hpp"

namespace roadcond::pipeline {

namespace {

constexpr std::size_t kCompactLength = 16;  // YYYYMMDDTHHMMSSZ

class FileDescriptor {
 public:
  explicit FileDescriptor(int fd) : fd_(fd) {}
  ~FileDescriptor() {
    if (fd_ >= 0) ::close(fd_);
  }
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;
  int get() const { return fd_; }

 private:
  int fd_;
};

[[noreturn]] void throw_errno(int err, const std::filesystem::path& path, std::string_view op) {
  const std::string msg = fmt::format("{} '{}': {}", op, path.string(), std::strerror(err));
  if (err == ENOSPC || err == EDQUOT) throw DiskFullError(msg);
  throw Error(msg);
}

}  // namespace

std::string image_name(std::string_view camera_id, Timestamp t) {
  return fmt::format("{}_{}", camera_id, format_compact(t));
}

std::string image_name(const LabelRecord& record) { return image_name(record.camera_id, record.timestamp); }

std::string format_record_row(const LabelRecord& r) {
  return csv::join({image_name(r), fmt::format("{}", r.latitude), fmt::format("{}", r.longitude),
                    std::string(to_string(r.label)), fmt::format("{}", r.confidence),
                    format_iso8601(r.timestamp)});
}

LabelRecord parse_record_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto fields = csv::split_line(line);
  if (!fields || fields->size() != 6) throw Error(fmt::format("record row '{}' does not have 6 fields", line));
  const auto& f = *fields;
  LabelRecord r;
  const std::string& name = f[0];
  if (name.size() < kCompactLength + 2 || name[name.size() - kCompactLength - 1] != '_') {
    throw Error(fmt::format("malformed image_name '{}'", name));
  }
  r.camera_id = name.substr(0, name.size() - kCompactLength - 1);
  const auto lat = csv::parse_double(f[1]);
  const auto lon = csv::parse_double(f[2]);
  const auto label = parse_road_condition(f[3]);
  const auto conf = csv::parse_double(f[4]);
  if (!lat || !lon) throw Error(fmt::format("malformed coordinates in row '{}'", line));
  if (!label) throw Error(fmt::format("unknown class '{}'", f[3]));
  if (!conf || *conf < 0.0 || *conf > 1.0) throw Error(fmt::format("malformed confidence '{}'", f[4]));
  r.latitude = *lat;
  r.longitude = *lon;
  r.label = *label;
  r.confidence = *conf;
  r.timestamp = parse_iso8601(f[5]);
  if (parse_compact(std::string_view(name).substr(name.size() - kCompactLength)) != r.timestamp) {
    throw Error(fmt::format("image_name '{}' disagrees with timestamp {}", name, f[5]));
  }
  return r;
}

std::string record_file_name(Timestamp t) { return fmt::format("labels-{}.csv", format_day(t)); }

RecordStore::RecordStore(std::filesystem::path directory) : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) throw Error(fmt::format("cannot create '{}': {}", directory_.string(), ec.message()));
}

void RecordStore::set_fault_injector(std::function<int()> injector) {
  std::lock_guard lock(mu_);
  fault_ = std::move(injector);
}

void RecordStore::append(const LabelRecord& record) { append(std::span<const LabelRecord>(&record, 1)); }

void RecordStore::append(std::span<const LabelRecord> records) {
  std::map<std::string, std::string> by_file;
  for (const auto& r : records) {
    auto& rows = by_file[record_file_name(r.timestamp)];
    rows += format_record_row(r);
    rows.push_back('\n');
  }
  std::lock_guard lock(mu_);
  for (const auto& [name, rows] : by_file) append_locked(directory_ / name, rows);
}

void RecordStore::append_locked(const std::filesystem::path& path, const std::string& rows) {
  FileDescriptor fd(::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644));
  if (fd.get() < 0) throw_errno(errno, path, "open");

  const off_t start = ::lseek(fd.get(), 0, SEEK_END);
  if (start < 0) throw_errno(errno, path, "seek");
  std::string payload;
  if (start == 0) {
    payload = std::string(kRecordHeader) + "\n";
  }
  payload += rows;

  std::size_t written = 0;
  while (written < payload.size()) {
    int err = fault_ ? fault_() : 0;
    ssize_t n = -1;
    if (err == 0) {
      n = ::write(fd.get(), payload.data() + written, payload.size() - written);
      if (n < 0) err = errno;
    }
    if (err == EINTR) continue;
    if (err != 0) {
      // Roll back a partial append so the file never holds a torn row.
      if (::ftruncate(fd.get(), start) != 0) {
        throw Error(fmt::format("cannot roll back '{}' after a failed write", path.string()));
      }
      throw_errno(err, path, "write");
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fdatasync(fd.get()) != 0) throw_errno(errno, path, "fdatasync");
}

std::vector<std::filesystem::path> RecordStore::files() const {
  std::vector<std::filesystem::path> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(directory_, ec)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("labels-") && name.ends_with(".csv")) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LabelRecord> RecordStore::read_all() const {
  std::lock_guard lock(mu_);
  return load_records(directory_);
}

std::vector<LabelRecord> RecordStore::read_file(const std::string& name) const {
  std::lock_guard lock(mu_);
  const auto path = directory_ / name;
  if (!std::filesystem::exists(path)) return {};
  return read_record_file(path);
}

std::vector<LabelRecord> read_record_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::vector<LabelRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kRecordHeader) throw Error(fmt::format("'{}' lacks the record header", path.string()));
      continue;
    }
    if (line.empty()) continue;
    try {
      out.push_back(parse_record_row(line));
    } catch (const Error& e) {
      throw Error(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return out;
}

std::vector<LabelRecord> load_records(const std::filesystem::path& directory) {
  std::vector<LabelRecord> out;
  if (!std::filesystem::is_directory(directory)) return out;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("labels-") && name.ends_with(".csv")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto rows = read_record_file(f);
    out.insert(out.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
  }
  return out;
}

std::vector<LabelRecord> load_records_from(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return load_records(path);
  return read_record_file(path);
}

}  // namespace roadcond::pipeline
