// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/pipeline/pipeline.hpp"

#include <fstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "roadcond/classifier/classify.hpp"
#include "roadcond/classifier/model_file.hpp"
#include "roadcond/imaging/codec.hpp"
#include "roadcond/imaging/resize.hpp"

namespace roadcond::pipeline {

void PipelineConfig::validate() const {
  if (batch_size < 1) throw Error("batch size must be at least 1");
  if (workers < 1) throw Error("worker count must be at least 1");
  if (poll_interval.count() <= 0) throw Error("poll interval must be positive");
  if (linger.count() < 0) throw Error("linger must not be negative");
  if (cameras.empty() && catalogue_path.empty()) throw Error("pipeline needs a camera catalogue");
  if (!backend && backend_spec.empty()) throw Error("pipeline needs a classifier backend");
  backoff.validate();
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::AcquireEnd: return "acquire_end";
    case EventKind::DecodeEnd: return "decode_end";
    case EventKind::ClassifyStart: return "classify_start";
    case EventKind::ClassifyEnd: return "classify_end";
    case EventKind::AppendEnd: return "append_end";
  }
  return "unknown";
}

std::shared_ptr<const classifier::Backend> load_backend(const std::string& spec, Scheme scheme) {
  return classifier::load_external_backend(spec, scheme);
}

Pipeline::Pipeline(PipelineConfig config)
    : config_((config.validate(), std::move(config))),
      fetched_(4 * config_.batch_size),
      decoded_(4 * config_.batch_size),
      labelled_(4) {
  backend_ = config_.backend ? config_.backend : load_backend(config_.backend_spec, config_.scheme);
  cameras_ = config_.cameras.empty() ? ingest::load_catalogue(config_.catalogue_path) : config_.cameras;
  for (std::size_t i = 0; i < cameras_.size(); ++i) camera_index_.emplace(cameras_[i].camera_id, i);

  store_ = std::make_unique<RecordStore>(config_.output_dir);
  if (config_.store_images) std::filesystem::create_directories(images_dir());

  std::shared_ptr<RecordSink> sink = config_.sink;
  if (!sink && config_.db_url) sink = open_sink(*config_.db_url);
  if (sink) {
    SubmitterOptions opts;
    opts.batch_size = config_.batch_size;
    opts.backoff = config_.backoff;
    opts.poll_interval = config_.submit_poll;
    submitter_ = std::make_unique<Submitter>(*store_, std::move(sink), opts);
    submitter_->start();
  }

  write_thread_ = std::thread([this] { write_loop(); });
  classify_thread_ = std::thread([this] { classify_loop(); });
  decode_thread_ = std::thread([this] { decode_loop(); });

  ingest::PollerOptions popts;
  popts.interval = config_.poll_interval;
  popts.workers = config_.workers;
  popts.fetch = config_.fetch;
  popts.max_cycles = config_.max_cycles;
  popts.fetcher = config_.fetcher;
  poller_ = ingest::run_poller(cameras_, popts, [this](ingest::FetchResult r) { return on_fetch(std::move(r)); });
}

Pipeline::~Pipeline() { stop(); }

void Pipeline::log(EventKind kind, std::string subject) {
  const auto at = std::chrono::steady_clock::now();
  std::lock_guard lock(mu_);
  events_.push_back({kind, std::move(subject), at});
}

bool Pipeline::on_fetch(ingest::FetchResult result) {
  log(EventKind::AcquireEnd, ingest::camera_id_of(result));
  if (auto* failure = std::get_if<ingest::FetchFailure>(&result)) {
    spdlog::warn("fetch {} failed ({}): {}", failure->camera_id, ingest::to_string(failure->kind), failure->detail);
    std::lock_guard lock(mu_);
    ++counters_.fetch_failures;
    return true;
  }
  auto& snap = std::get<ingest::Snapshot>(result);
  {
    std::lock_guard lock(mu_);
    ++counters_.fetched;
  }
  const auto it = camera_index_.find(snap.camera_id);
  if (it == camera_index_.end()) return true;
  // Blocks while downstream is full; this is what pauses acquisition.
  fetched_.push({it->second, snap.fetched_at, std::move(snap.body)});
  return true;
}

void Pipeline::decode_loop() {
  const auto dims = backend_->input_dims();
  while (auto item = fetched_.pop()) {
    const auto& cam = cameras_[item->camera];
    try {
      auto image = imaging::decode_and_check(item->body);
      if (config_.store_images) {
        const auto ext = imaging::file_extension(imaging::sniff_format(item->body));
        const auto path = images_dir() / fmt::format("{}{}", image_name(cam.camera_id, item->at), ext);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(item->body.data()), static_cast<std::streamsize>(item->body.size()));
        if (!out) spdlog::warn("could not store snapshot {}", path.string());
      }
      if (image.width() != dims.width || image.height() != dims.height) {
        image = imaging::resize(image, dims.width, dims.height);
      }
      {
        std::lock_guard lock(mu_);
        ++counters_.decoded;
      }
      log(EventKind::DecodeEnd, cam.camera_id);
      decoded_.push({item->camera, item->at, std::move(image)});
    } catch (const std::exception& e) {
      spdlog::warn("dropping snapshot from {}: {}", cam.camera_id, e.what());
      std::lock_guard lock(mu_);
      ++counters_.corrupt;
    }
  }
  decoded_.close();
}

void Pipeline::classify_loop() {
  std::size_t batch_no = 0;
  for (;;) {
    auto first = decoded_.pop();
    if (!first) break;
    std::vector<Decoded> batch;
    batch.push_back(std::move(*first));
    const auto deadline = std::chrono::steady_clock::now() + config_.linger;
    while (batch.size() < config_.batch_size) {
      auto next = decoded_.pop_until(deadline);
      if (!next) break;
      batch.push_back(std::move(*next));
    }

    std::vector<imaging::Image> images;
    std::vector<ingest::CameraRecord> cams;
    std::vector<Timestamp> stamps;
    for (auto& d : batch) {
      images.push_back(std::move(d.image));
      cams.push_back(cameras_[d.camera]);
      stamps.push_back(d.at);
    }
    const std::string subject = std::to_string(batch_no++);
    log(EventKind::ClassifyStart, subject);
    try {
      auto records = classifier::classify_batch(*backend_, images, cams, stamps);
      log(EventKind::ClassifyEnd, subject);
      {
        std::lock_guard lock(mu_);
        ++counters_.batches;
        counters_.classified += records.size();
      }
      labelled_.push(std::move(records));
    } catch (const std::exception& e) {
      spdlog::error("classification of batch {} failed: {}", subject, e.what());
      std::lock_guard lock(mu_);
      counters_.classify_failures += batch.size();
    }
  }
  labelled_.close();
}

void Pipeline::write_loop() {
  while (auto records = labelled_.pop()) {
    for (;;) {
      try {
        store_->append(*records);
        break;
      } catch (const DiskFullError& e) {
        spdlog::warn("record store full, retrying: {}", e.what());
        {
          std::lock_guard lock(mu_);
          ++counters_.disk_full_retries;
        }
        std::this_thread::sleep_for(config_.disk_full_retry);
      }
    }
    {
      std::lock_guard lock(mu_);
      counters_.appended += records->size();
    }
    log(EventKind::AppendEnd, std::to_string(records->size()));
    if (submitter_) submitter_->notify();
  }
}

void Pipeline::join_stages() {
  std::lock_guard lock(join_mu_);
  poller_->wait();
  fetched_.close();
  if (decode_thread_.joinable()) decode_thread_.join();
  if (classify_thread_.joinable()) classify_thread_.join();
  if (write_thread_.joinable()) write_thread_.join();
}

void Pipeline::wait() {
  join_stages();
  if (submitter_) submitter_->notify();
}

void Pipeline::stop() {
  poller_->stop();
  join_stages();
  if (submitter_) submitter_->stop();
}

StageCounters Pipeline::counters() const {
  std::lock_guard lock(mu_);
  StageCounters c = counters_;
  if (submitter_) {
    const auto wm = submitter_->watermark();
    c.submitted = wm.submitted;
    c.dead_lettered = wm.dead_lettered;
  }
  return c;
}

std::vector<StageEvent> Pipeline::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

}  // namespace roadcond::pipeline
