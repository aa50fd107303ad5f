// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/dataset/manifest.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "roadcond/core/error.hpp"

namespace roadcond::dataset {

std::string_view to_string(SampleSource s) {
  switch (s) {
    case SampleSource::CherryPicked: return "cherry_picked";
    case SampleSource::Random: return "random";
    case SampleSource::Rwis: return "rwis";
    case SampleSource::Augmented: return "augmented";
  }
  return "unknown";
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Unassigned: return "unassigned";
    case Split::Train: return "train";
    case Split::Validation: return "validation";
  }
  return "unknown";
}

std::optional<SampleSource> parse_source(std::string_view text) {
  for (auto s : {SampleSource::CherryPicked, SampleSource::Random, SampleSource::Rwis,
                 SampleSource::Augmented}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view text) {
  for (auto s : {Split::Unassigned, Split::Train, Split::Validation}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

std::map<RoadCondition, std::size_t> DatasetManifest::class_counts() const {
  std::map<RoadCondition, std::size_t> out;
  for (auto c : classes_of(scheme)) out[c] = 0;
  for (const auto& s : samples) ++out[s.label];
  return out;
}

std::map<RoadCondition, std::size_t> DatasetManifest::class_counts(Split split) const {
  std::map<RoadCondition, std::size_t> out;
  for (auto c : classes_of(scheme)) out[c] = 0;
  for (const auto& s : samples) {
    if (s.split == split) ++out[s.label];
  }
  return out;
}

std::size_t DatasetManifest::count(Split split) const {
  std::size_t n = 0;
  for (const auto& s : samples) n += s.split == split ? 1 : 0;
  return n;
}

const LabelledSample* DatasetManifest::find(std::string_view image_ref) const {
  for (const auto& s : samples) {
    if (s.image_ref == image_ref) return &s;
  }
  return nullptr;
}

void DatasetManifest::validate() const {
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.image_ref.empty()) throw Error(fmt::format("sample {} has an empty image_ref", i));
    if (!seen.insert(s.image_ref).second) {
      throw Error(fmt::format("image_ref '{}' appears more than once", s.image_ref));
    }
    if (!in_scheme(scheme, s.label)) {
      throw Error(fmt::format("sample '{}' label {} is not a {} class", s.image_ref,
                              to_string(s.label), to_string(scheme)));
    }
    if (s.confidence && !(*s.confidence >= 0.0 && *s.confidence <= 1.0)) {
      throw Error(fmt::format("sample '{}' confidence {} outside [0, 1]", s.image_ref, *s.confidence));
    }
  }
}

namespace {

LabelledSample sample_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("expected a JSON object");
  LabelledSample s;
  if (!j.contains("image_ref") || !j["image_ref"].is_string()) throw Error("missing string \"image_ref\"");
  s.image_ref = j["image_ref"].get<std::string>();
  if (!j.contains("label") || !j["label"].is_string()) throw Error("missing string \"label\"");
  const auto label = parse_road_condition(j["label"].get<std::string>());
  if (!label) throw Error(fmt::format("unknown label {}", j["label"].dump()));
  s.label = *label;
  if (j.contains("source") && !j["source"].is_null()) {
    const auto src = j["source"].is_string() ? parse_source(j["source"].get<std::string>()) : std::nullopt;
    if (!src) throw Error(fmt::format("unknown source {}", j["source"].dump()));
    s.source = *src;
  }
  if (j.contains("phase") && !j["phase"].is_null()) {
    if (!j["phase"].is_string()) throw Error("\"phase\" must be a string");
    s.phase = j["phase"].get<std::string>();
  }
  if (j.contains("confidence") && !j["confidence"].is_null()) {
    if (!j["confidence"].is_number()) throw Error("\"confidence\" must be a number");
    s.confidence = j["confidence"].get<double>();
  }
  if (j.contains("split") && !j["split"].is_null()) {
    const auto split = j["split"].is_string() ? parse_split(j["split"].get<std::string>()) : std::nullopt;
    if (!split) throw Error(fmt::format("unknown split {}", j["split"].dump()));
    s.split = *split;
  }
  return s;
}

}  // namespace

DatasetManifest parse_manifest(std::string_view jsonl, Scheme scheme) {
  DatasetManifest m{scheme, {}};
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    const std::size_t end = std::min(jsonl.find('\n', pos), jsonl.size());
    const std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      m.samples.push_back(sample_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw Error(fmt::format("manifest line {}: {}", line_no, e.what()));
    }
  }
  m.validate();
  return m;
}

std::string format_manifest(const DatasetManifest& manifest) {
  std::string out;
  for (const auto& s : manifest.samples) {
    nlohmann::ordered_json j;
    j["image_ref"] = s.image_ref;
    j["label"] = std::string(to_string(s.label));
    j["source"] = std::string(to_string(s.source));
    j["phase"] = s.phase;
    j["confidence"] = s.confidence ? nlohmann::ordered_json(*s.confidence) : nlohmann::ordered_json();
    j["split"] = s.split == Split::Unassigned ? nlohmann::ordered_json()
                                               : nlohmann::ordered_json(std::string(to_string(s.split)));
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

DatasetManifest load_manifest(const std::filesystem::path& path, Scheme scheme) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open manifest '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str(), scheme);
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", tmp.string()));
    out << format_manifest(manifest);
    if (!out) throw Error(fmt::format("failed writing '{}'", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace roadcond::dataset
