// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roadcond/core/error.hpp"

namespace roadcond::ingest {

/// One camera of interest. Immutable once loaded; shared freely across threads.
struct CameraRecord {
  std::string camera_id;
  std::string snapshot_url;
  double latitude = 0.0;
  double longitude = 0.0;
  std::optional<std::string> jurisdiction;

  friend bool operator==(const CameraRecord&, const CameraRecord&) = default;
};

class CatalogueError : public Error {
 public:
  CatalogueError(std::size_t line, const std::string& message);
  /// 1-based line in the source file (the header is line 1); 0 when the
  /// error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr std::string_view kCatalogueHeader =
    "camera_id,snapshot_url,latitude,longitude,jurisdiction";

/// Parses catalogue text: the header above, then one camera per line. The
/// jurisdiction column may be empty or omitted. Blank lines are skipped.
/// Order is preserved. Throws CatalogueError on duplicate ids, bad
/// coordinates, bad URLs or malformed rows.
std::vector<CameraRecord> parse_catalogue(std::string_view text);
std::vector<CameraRecord> load_catalogue(const std::filesystem::path& path);

std::string format_catalogue(const std::vector<CameraRecord>& cameras);

struct ParsedUrl {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;        // explicit or scheme default
  std::string target;  // path plus query, at least "/"

  /// "http://host:port", as cpp-httplib expects.
  std::string origin() const;
};

/// Absolute http(s) URL with a host; nullopt otherwise.
std::optional<ParsedUrl> parse_url(std::string_view url);

}  // namespace roadcond::ingest
