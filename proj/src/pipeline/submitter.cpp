// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/pipeline/submitter.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

namespace roadcond::pipeline {

std::chrono::milliseconds BackoffPolicy::delay_after(int attempt) const {
  if (attempt < 1) throw Error("attempt numbers start at 1");
  auto delay = base;
  for (int i = 1; i < attempt && delay < cap; ++i) delay *= 2;
  return std::min(delay, cap);
}

void BackoffPolicy::validate() const {
  if (base.count() <= 0) throw Error("backoff base must be positive");
  if (cap < base) throw Error("backoff cap must be at least the base");
  if (max_attempts < 1) throw Error("max_attempts must be at least 1");
}

SubmitOutcome submit_records(RecordSink& sink, SubmissionBatch& batch, const BackoffPolicy& policy) {
  if (batch.records.empty()) throw Error("submission batch is empty");
  if (batch.attempt < 1) throw Error("submission attempt must be at least 1");
  try {
    sink.submit(batch.records);
    return {SubmitStatus::Acknowledged, {}};
  } catch (const std::exception& e) {
    if (batch.attempt >= policy.max_attempts) return {SubmitStatus::DeadLettered, e.what()};
    batch.next_retry_at = std::chrono::system_clock::now() + policy.delay_after(batch.attempt);
    ++batch.attempt;
    return {SubmitStatus::RetryScheduled, e.what()};
  }
}

std::size_t Watermark::total() const {
  std::size_t n = 0;
  for (const auto& [file, rows] : rows) n += rows;
  return n;
}

Watermark load_watermark(const std::filesystem::path& path) {
  Watermark wm;
  std::ifstream in(path, std::ios::binary);
  if (!in) return wm;
  try {
    const auto doc = nlohmann::json::parse(in);
    for (const auto& [file, rows] : doc.at("files").items()) wm.rows[file] = rows.get<std::size_t>();
    wm.submitted = doc.value("submitted", std::size_t{0});
    wm.dead_lettered = doc.value("dead_lettered", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("corrupt watermark '{}': {}", path.string(), e.what()));
  }
  return wm;
}

void save_watermark(const Watermark& wm, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["files"] = nlohmann::ordered_json::object();
  for (const auto& [file, rows] : wm.rows) doc["files"][file] = rows;
  doc["submitted"] = wm.submitted;
  doc["dead_lettered"] = wm.dead_lettered;
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << '\n';
    if (!out) throw Error(fmt::format("cannot write '{}'", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

namespace {

nlohmann::ordered_json record_json(const LabelRecord& r) {
  return {{"camera_id", r.camera_id},         {"timestamp", format_iso8601(r.timestamp)},
          {"class", std::string(to_string(r.label))}, {"confidence", r.confidence},
          {"latitude", r.latitude},           {"longitude", r.longitude}};
}

LabelRecord record_from_json(const nlohmann::json& j) {
  LabelRecord r;
  r.camera_id = j.at("camera_id").get<std::string>();
  r.timestamp = parse_iso8601(j.at("timestamp").get<std::string>());
  const auto label = parse_road_condition(j.at("class").get<std::string>());
  if (!label) throw Error("dead-letter record has an unknown class");
  r.label = *label;
  r.confidence = j.at("confidence").get<double>();
  r.latitude = j.at("latitude").get<double>();
  r.longitude = j.at("longitude").get<double>();
  return r;
}

}  // namespace

Submitter::Submitter(const RecordStore& store, std::shared_ptr<RecordSink> sink, SubmitterOptions options)
    : store_(store), sink_(std::move(sink)), options_(std::move(options)) {
  if (!sink_) throw Error("submitter needs a sink");
  if (options_.batch_size < 1) throw Error("submission batch size must be at least 1");
  options_.backoff.validate();
  if (options_.watermark_path.empty()) options_.watermark_path = store_.directory() / "submission-watermark.json";
  if (options_.dead_letter_path.empty()) options_.dead_letter_path = store_.directory() / "dead-letter.jsonl";
  watermark_ = load_watermark(options_.watermark_path);
}

Submitter::~Submitter() { stop(); }

void Submitter::start() {
  std::lock_guard lock(mu_);
  if (thread_.joinable()) return;
  stopping_ = false;
  thread_ = std::thread([this] { run(); });
}

void Submitter::notify() {
  std::lock_guard lock(mu_);
  notified_ = true;
  cv_.notify_all();
}

void Submitter::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
    cv_.notify_all();
  }
  if (thread_.joinable()) thread_.join();
}

void Submitter::drain() { pass(); }

Watermark Submitter::watermark() const {
  std::lock_guard lock(mu_);
  return watermark_;
}

SubmitterStats Submitter::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

std::size_t Submitter::pending_records() const {
  const Watermark wm = watermark();
  std::size_t pending = 0;
  for (const auto& file : store_.files()) {
    const auto name = file.filename().string();
    const std::size_t rows = store_.read_file(name).size();
    const auto it = wm.rows.find(name);
    const std::size_t done = it == wm.rows.end() ? 0 : it->second;
    if (rows > done) pending += rows - done;
  }
  return pending;
}

void Submitter::run() {
  for (;;) {
    try {
      pass();
    } catch (const std::exception& e) {
      spdlog::error("submission pass failed: {}", e.what());
    }
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, options_.poll_interval, [&] { return stopping_ || notified_; });
    notified_ = false;
    if (stopping_) return;
  }
}

void Submitter::pass() {
  std::lock_guard pass_lock(pass_mu_);
  for (const auto& file : store_.files()) {
    const std::string name = file.filename().string();
    const auto rows = store_.read_file(name);
    std::size_t next;
    {
      std::lock_guard lock(mu_);
      next = watermark_.rows[name];
    }
    while (next < rows.size()) {
      SubmissionBatch batch;
      batch.file = name;
      batch.first_row = next;
      const std::size_t end = std::min(rows.size(), next + options_.batch_size);
      batch.records.assign(rows.begin() + static_cast<std::ptrdiff_t>(next),
                           rows.begin() + static_cast<std::ptrdiff_t>(end));
      for (;;) {
        {
          std::lock_guard lock(mu_);
          if (stopping_) return;
          ++stats_.attempts;
        }
        const auto outcome = submit_records(*sink_, batch, options_.backoff);
        if (outcome.status == SubmitStatus::Acknowledged) {
          advance(batch, true);
          break;
        }
        {
          std::lock_guard lock(mu_);
          ++stats_.failures;
        }
        if (outcome.status == SubmitStatus::DeadLettered) {
          spdlog::error("batch {}@{} dead-lettered after {} attempts: {}", name, batch.first_row, batch.attempt,
                        outcome.error);
          dead_letter(batch, outcome.error);
          advance(batch, false);
          break;
        }
        spdlog::warn("submission attempt {} for {}@{} failed: {}", batch.attempt - 1, name, batch.first_row,
                     outcome.error);
        std::unique_lock lock(mu_);
        if (cv_.wait_until(lock, batch.next_retry_at, [&] { return stopping_; })) return;
      }
      next = end;
    }
  }
}

void Submitter::advance(const SubmissionBatch& batch, bool acknowledged) {
  std::lock_guard lock(mu_);
  watermark_.rows[batch.file] = batch.first_row + batch.records.size();
  if (acknowledged) {
    watermark_.submitted += batch.records.size();
    ++stats_.batches_acknowledged;
  } else {
    watermark_.dead_lettered += batch.records.size();
    ++stats_.batches_dead_lettered;
  }
  save_watermark(watermark_, options_.watermark_path);
}

void Submitter::dead_letter(const SubmissionBatch& batch, const std::string& error) {
  nlohmann::ordered_json j{{"file", batch.file},
                           {"first_row", batch.first_row},
                           {"attempts", batch.attempt},
                           {"error", error},
                           {"records", nlohmann::ordered_json::array()}};
  for (const auto& r : batch.records) j["records"].push_back(record_json(r));
  std::ofstream out(options_.dead_letter_path, std::ios::binary | std::ios::app);
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw Error(fmt::format("cannot append to '{}'", options_.dead_letter_path.string()));
}

ReplayResult replay_dead_letters(const std::filesystem::path& path, RecordSink& sink) {
  ReplayResult result;
  std::ifstream in(path, std::ios::binary);
  if (!in) return result;
  std::vector<std::string> kept;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<LabelRecord> records;
    try {
      const auto doc = nlohmann::json::parse(line);
      for (const auto& r : doc.at("records")) records.push_back(record_from_json(r));
    } catch (const std::exception& e) {
      throw Error(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
    try {
      if (!records.empty()) sink.submit(records);
      ++result.replayed_batches;
      result.replayed_records += records.size();
    } catch (const std::exception& e) {
      spdlog::warn("replay of {}:{} failed: {}", path.string(), line_no, e.what());
      kept.push_back(line);
    }
  }
  in.close();
  result.remaining_batches = kept.size();
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    for (const auto& k : kept) out << k << '\n';
    if (!out) throw Error(fmt::format("cannot write '{}'", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
  return result;
}

}  // namespace roadcond::pipeline
