// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>

#include "roadcond/mapgen/layer.hpp"
#include "roadcond/pipeline/pipeline.hpp"

namespace httplib {
class Server;
}

namespace roadcond::pipeline {

struct ServiceConfig {
  std::filesystem::path records_dir = "out";
  std::filesystem::path images_dir = "out/images";
  std::filesystem::path manifest_path = "manifest.jsonl";
  /// Pending pseudo-label run behind /api/queue and /api/judgment.
  std::filesystem::path run_path;
  std::filesystem::path exclusions_path = "exclusions.jsonl";
  Scheme scheme = Scheme::FiveClass;
  std::string phase = "review";
  mapgen::LayerOptions map;
  std::size_t default_limit = 100;
};

/// JSON API over the record store, the dataset manifest and a pending
/// pseudo-label run:
///   GET  /api/records?limit=N      newest records first
///   GET  /api/map.geojson          ?region=lat1,lon1,lat2,lon2&stale_after=SECONDS&hide=Poor,Offline
///   GET  /api/queue                ?class=Dry,Wet&min_confidence=&max_confidence=&sample=&seed=&limit=
///   POST /api/verdicts             400 with diagnostics on a malformed body, 422 on a rejected batch
///   POST /api/judgment             acceptable/refused summary of a verdict batch
///   GET  /api/stats                manifest and record class counts, stage counters
///   GET  /images/{id}              stored snapshot bytes
class Service {
 public:
  /// `pipeline` is optional; when given, its counters appear in /api/stats
  /// and records are read through its store.
  explicit Service(ServiceConfig config, const Pipeline* pipeline = nullptr);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds to host:port (0 picks a free port) and serves on a background
  /// thread. Returns the bound port. Throws roadcond::Error if the port is
  /// taken.
  int start(const std::string& host, int port);
  /// Blocks serving on the calling thread until stop().
  void serve(const std::string& host, int port);
  void stop();
  int port() const { return port_; }

 private:
  void install_routes();
  std::vector<LabelRecord> records() const;

  ServiceConfig config_;
  const Pipeline* pipeline_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::shared_mutex state_mu_;
};

}  // namespace roadcond::pipeline
