// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "roadcond/ingest/catalogue.hpp"

namespace httplib {
class Server;
}

namespace roadcond::testing {

struct MockCamera {
  std::string id;
  std::chrono::milliseconds delay{0};
  int status = 200;
  std::vector<std::uint8_t> body;
  std::string content_type = "image/jpeg";
  /// Serve a 302 to the real snapshot path instead.
  bool redirect = false;
};

/// Local HTTP server impersonating a fleet of traffic cameras. Snapshots are
/// served at /cam/<id>; redirecting cameras answer /cam/<id> with a 302 to
/// /real/<id>.
class MockCameraServer {
 public:
  MockCameraServer();
  ~MockCameraServer();
  MockCameraServer(const MockCameraServer&) = delete;
  MockCameraServer& operator=(const MockCameraServer&) = delete;

  void set_camera(MockCamera camera);
  int port() const { return port_; }
  std::string url_for(const std::string& id) const;
  /// Catalogue entries for every configured camera, in id order, spread
  /// over a small grid of coordinates.
  std::vector<ingest::CameraRecord> catalogue() const;

  std::size_t max_concurrent() const { return max_concurrent_.load(); }
  std::size_t requests(const std::string& id) const;
  std::size_t total_requests() const;

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;

  mutable std::mutex mu_;
  std::map<std::string, MockCamera> cameras_;
  std::map<std::string, std::size_t> requests_;
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> max_concurrent_{0};
};

}  // namespace roadcond::testing
