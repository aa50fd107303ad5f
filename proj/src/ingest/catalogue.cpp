// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/ingest/catalogue.hpp"

#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "roadcond/core/csv.hpp"

namespace roadcond::ingest {

CatalogueError::CatalogueError(std::size_t line, const std::string& message)
    : Error(line ? fmt::format("catalogue line {}: {}", line, message)
                 : fmt::format("catalogue: {}", message)),
      line_(line) {}

std::string ParsedUrl::origin() const { return fmt::format("{}://{}:{}", scheme, host, port); }

std::optional<ParsedUrl> parse_url(std::string_view url) {
  static const std::regex pattern(R"(^(https?)://([A-Za-z0-9.\-]+|\[[0-9A-Fa-f:.]+\])(?::(\d{1,5}))?([/?][^\s#]*)?$)",
                                  std::regex::icase);
  std::cmatch m;
  if (!std::regex_match(url.data(), url.data() + url.size(), m, pattern)) return std::nullopt;
  ParsedUrl out;
  out.scheme = m[1].str();
  for (char& ch : out.scheme) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  out.host = m[2].str();
  if (m[3].matched) {
    const std::string port = m[3].str();
    std::from_chars(port.data(), port.data() + port.size(), out.port);
    if (out.port < 1 || out.port > 65535) return std::nullopt;
  } else {
    out.port = out.scheme == "https" ? 443 : 80;
  }
  out.target = m[4].matched ? m[4].str() : "/";
  if (out.target.front() == '?') out.target.insert(out.target.begin(), '/');
  return out;
}

std::vector<CameraRecord> parse_catalogue(std::string_view text) {
  std::vector<CameraRecord> cameras;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  bool header_seen = false;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (csv::trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!header_seen) {
      if (csv::trim(line) != kCatalogueHeader) {
        throw CatalogueError(line_no, fmt::format("expected header '{}'", kCatalogueHeader));
      }
      header_seen = true;
      continue;
    }
    const auto fields = csv::split_line(line);
    if (!fields) throw CatalogueError(line_no, "unterminated quoted field");
    if (fields->size() != 4 && fields->size() != 5) {
      throw CatalogueError(line_no, fmt::format("expected 5 fields, found {}", fields->size()));
    }
    CameraRecord cam;
    cam.camera_id = std::string(csv::trim((*fields)[0]));
    cam.snapshot_url = std::string(csv::trim((*fields)[1]));
    if (cam.camera_id.empty()) throw CatalogueError(line_no, "empty camera_id");
    if (!parse_url(cam.snapshot_url)) {
      throw CatalogueError(line_no, fmt::format("invalid snapshot_url '{}'", cam.snapshot_url));
    }
    const auto lat = csv::parse_double((*fields)[2]);
    const auto lon = csv::parse_double((*fields)[3]);
    if (!lat) throw CatalogueError(line_no, fmt::format("malformed latitude '{}'", (*fields)[2]));
    if (!lon) throw CatalogueError(line_no, fmt::format("malformed longitude '{}'", (*fields)[3]));
    if (*lat < -90.0 || *lat > 90.0) {
      throw CatalogueError(line_no, fmt::format("latitude {} out of range [-90, 90]", *lat));
    }
    if (*lon < -180.0 || *lon > 180.0) {
      throw CatalogueError(line_no, fmt::format("longitude {} out of range [-180, 180]", *lon));
    }
    cam.latitude = *lat;
    cam.longitude = *lon;
    if (fields->size() == 5 && !csv::trim((*fields)[4]).empty()) {
      cam.jurisdiction = std::string(csv::trim((*fields)[4]));
    }
    if (!seen.insert(cam.camera_id).second) {
      throw CatalogueError(line_no, fmt::format("duplicate camera_id '{}'", cam.camera_id));
    }
    cameras.push_back(std::move(cam));
    if (end == text.size()) break;
  }
  if (!header_seen) throw CatalogueError(0, "missing header");
  return cameras;
}

std::vector<CameraRecord> load_catalogue(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogueError(0, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_catalogue(buffer.str());
}

std::string format_catalogue(const std::vector<CameraRecord>& cameras) {
  std::string out(kCatalogueHeader);
  out.push_back('\n');
  for (const auto& cam : cameras) {
    out += csv::join({cam.camera_id, cam.snapshot_url, fmt::format("{}", cam.latitude),
                      fmt::format("{}", cam.longitude), cam.jurisdiction.value_or("")});
    out.push_back('\n');
  }
  return out;
}

}  // namespace roadcond::ingest
