// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/ingest/fetch.hpp"

#include <charconv>

#include <fmt/format.h>
#include <httplib.h>

namespace roadcond::ingest {

std::string_view to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::Timeout: return "timeout";
    case FailureKind::HttpError: return "http_error";
    case FailureKind::Connection: return "connection";
    case FailureKind::TooLarge: return "too_large";
  }
  return "unknown";
}

const std::string& camera_id_of(const FetchResult& result) {
  return std::visit([](const auto& r) -> const std::string& { return r.camera_id; }, result);
}

Timestamp fetched_at_of(const FetchResult& result) {
  return std::visit([](const auto& r) { return r.fetched_at; }, result);
}

FetchResult fetch_snapshot(const CameraRecord& camera, const FetchOptions& options) {
  if (options.timeout.count() <= 0) throw Error("fetch timeout must be positive");

  const auto failure = [&](FailureKind kind, std::string detail, int status = 0) -> FetchResult {
    return FetchFailure{camera.camera_id, now_utc(), kind, status, std::move(detail)};
  };

  const auto url = parse_url(camera.snapshot_url);
  if (!url) return failure(FailureKind::Connection, "invalid URL");

  httplib::Client client(url->origin());
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  client.set_follow_location(true);

  int status = 0;
  bool too_large = false;
  std::string content_type;
  std::vector<std::uint8_t> body;

  const auto started = std::chrono::steady_clock::now();
  auto result = client.Get(
      url->target, httplib::Headers{{"Accept", "image/*"}},
      [&](const httplib::Response& res) {
        status = res.status;
        content_type = res.get_header_value("Content-Type");
        if (status != 200) return false;
        const std::string length = res.get_header_value("Content-Length");
        std::size_t declared = 0;
        if (!length.empty() &&
            std::from_chars(length.data(), length.data() + length.size(), declared).ec == std::errc{} &&
            declared > options.max_bytes) {
          too_large = true;
          return false;
        }
        return true;
      },
      [&](const char* data, std::size_t n) {
        if (body.size() + n > options.max_bytes) {
          too_large = true;
          return false;
        }
        body.insert(body.end(), data, data + n);
        return true;
      });
  const auto elapsed = std::chrono::steady_clock::now() - started;

  if (too_large) {
    return failure(FailureKind::TooLarge, fmt::format("body exceeds {} bytes", options.max_bytes));
  }
  if (status != 0 && status != 200) {
    return failure(FailureKind::HttpError, fmt::format("HTTP {}", status), status);
  }
  if (!result) {
    const auto err = result.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           (err == httplib::Error::Read && elapsed >= options.timeout * 9 / 10);
    return failure(timed_out ? FailureKind::Timeout : FailureKind::Connection, httplib::to_string(err));
  }
  if (body.empty()) return failure(FailureKind::HttpError, "empty body", 200);
  return Snapshot{camera.camera_id, now_utc(), std::move(body), std::move(content_type)};
}

}  // namespace roadcond::ingest
