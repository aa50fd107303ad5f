// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "roadcond/core/time.hpp"
#include "roadcond/ingest/catalogue.hpp"

namespace roadcond::ingest {

struct Snapshot {
  std::string camera_id;
  Timestamp fetched_at;
  std::vector<std::uint8_t> body;
  std::string content_type;
};

enum class FailureKind { Timeout, HttpError, Connection, TooLarge };

std::string_view to_string(FailureKind kind);

struct FetchFailure {
  std::string camera_id;
  Timestamp fetched_at;
  FailureKind kind = FailureKind::Connection;
  int http_status = 0;  // set for HttpError
  std::string detail;
};

using FetchResult = std::variant<Snapshot, FetchFailure>;

const std::string& camera_id_of(const FetchResult& result);
Timestamp fetched_at_of(const FetchResult& result);

struct FetchOptions {
  std::chrono::milliseconds timeout{10'000};
  std::size_t max_bytes = 8u << 20;
};

/// One HTTP GET with `Accept: image/*`. Redirects are followed. Network and
/// protocol problems come back as FetchFailure; a 200 with an empty body is
/// an HttpError. Throws roadcond::Error only when timeout is not positive.
FetchResult fetch_snapshot(const CameraRecord& camera, const FetchOptions& options = {});

}  // namespace roadcond::ingest
