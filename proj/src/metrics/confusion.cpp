// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/metrics/confusion.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "roadcond/core/error.hpp"

namespace roadcond::metrics {

ConfusionMatrix::ConfusionMatrix(Scheme scheme)
    : scheme_(scheme),
      counts_(class_count(scheme), std::vector<std::uint64_t>(class_count(scheme), 0)) {}

ConfusionMatrix::ConfusionMatrix(Scheme scheme, std::vector<std::vector<std::uint64_t>> counts)
    : scheme_(scheme), counts_(std::move(counts)) {
  const std::size_t k = class_count(scheme_);
  if (counts_.size() != k) {
    throw Error(fmt::format("matrix has {} rows, scheme {} needs {}", counts_.size(),
                            to_string(scheme_), k));
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (counts_[i].size() != k) {
      throw Error(fmt::format("matrix row {} has {} columns, expected {}", i, counts_[i].size(), k));
    }
  }
}

std::size_t ConfusionMatrix::index(RoadCondition c) const {
  const auto idx = class_index(scheme_, c);
  if (!idx) throw Error(fmt::format("{} is not a {} class", to_string(c), to_string(scheme_)));
  return *idx;
}

std::uint64_t ConfusionMatrix::count(RoadCondition truth, RoadCondition predicted) const {
  return counts_[index(truth)][index(predicted)];
}

void ConfusionMatrix::accumulate(RoadCondition truth, RoadCondition predicted, std::uint64_t n) {
  const std::size_t t = index(truth);
  const std::size_t p = index(predicted);
  counts_[t][p] += n;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (const auto& row : counts_) {
    for (auto v : row) sum += v;
  }
  return sum;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) sum += counts_[i][i];
  return sum;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t i) const {
  std::uint64_t sum = 0;
  for (auto v : counts_.at(i)) sum += v;
  return sum;
}

std::uint64_t ConfusionMatrix::column_sum(std::size_t j) const {
  std::uint64_t sum = 0;
  for (const auto& row : counts_) sum += row.at(j);
  return sum;
}

ConfusionMatrix merge(const ConfusionMatrix& a, const ConfusionMatrix& b) {
  if (a.scheme() != b.scheme()) {
    throw Error(fmt::format("cannot merge {} and {} matrices", to_string(a.scheme()),
                            to_string(b.scheme())));
  }
  auto counts = a.counts();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = 0; j < counts.size(); ++j) counts[i][j] += b.at(i, j);
  }
  return ConfusionMatrix(a.scheme(), std::move(counts));
}

namespace {

Metric ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

std::size_t checked_index(const ConfusionMatrix& cm, RoadCondition c) {
  const auto idx = class_index(cm.scheme(), c);
  if (!idx) throw Error(fmt::format("{} is not a {} class", to_string(c), to_string(cm.scheme())));
  return *idx;
}

}  // namespace

Metric precision(const ConfusionMatrix& cm, RoadCondition c) {
  const std::size_t i = checked_index(cm, c);
  return ratio(cm.at(i, i), cm.column_sum(i));
}

Metric recall(const ConfusionMatrix& cm, RoadCondition c) {
  const std::size_t i = checked_index(cm, c);
  return ratio(cm.at(i, i), cm.row_sum(i));
}

Metric f1(const ConfusionMatrix& cm, RoadCondition c) {
  const Metric p = precision(cm, c);
  const Metric r = recall(cm, c);
  if (p.undefined || r.undefined || p.value + r.value == 0.0) return {0.0, true};
  return {2.0 * p.value * r.value / (p.value + r.value), false};
}

double accuracy(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw Error("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

ConfusionMatrix parse_matrix_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("matrix JSON: {}", e.what()));
  }
  if (!doc.is_object() || !doc.contains("matrix") || !doc["matrix"].is_array()) {
    throw Error("matrix JSON: expected an object with a \"matrix\" array");
  }
  const auto& rows = doc["matrix"];
  std::optional<Scheme> scheme;
  if (doc.contains("scheme")) {
    scheme = parse_scheme(doc["scheme"].get<std::string>());
    if (!scheme) throw Error(fmt::format("matrix JSON: unknown scheme {}", doc["scheme"].dump()));
  } else {
    scheme = scheme_for_class_count(rows.size());
    if (!scheme) throw Error(fmt::format("matrix JSON: no scheme has {} classes", rows.size()));
  }
  const std::size_t k = class_count(*scheme);

  std::vector<std::size_t> order(k);
  if (doc.contains("classes")) {
    const auto& names = doc["classes"];
    if (!names.is_array() || names.size() != k) {
      throw Error(fmt::format("matrix JSON: \"classes\" must list {} names", k));
    }
    std::vector<bool> seen(k, false);
    for (std::size_t i = 0; i < k; ++i) {
      const auto c = parse_road_condition(names[i].get<std::string>());
      const auto idx = c ? class_index(*scheme, *c) : std::nullopt;
      if (!idx || seen[*idx]) {
        throw Error(fmt::format("matrix JSON: bad or repeated class {}", names[i].dump()));
      }
      seen[*idx] = true;
      order[i] = *idx;
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
  }

  if (rows.size() != k) throw Error(fmt::format("matrix JSON: {} rows, expected {}", rows.size(), k));
  std::vector<std::vector<std::uint64_t>> counts(k, std::vector<std::uint64_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    if (!rows[i].is_array() || rows[i].size() != k) {
      throw Error(fmt::format("matrix JSON: row {} must have {} entries", i, k));
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (!rows[i][j].is_number_unsigned() && !(rows[i][j].is_number_integer() && rows[i][j].get<long long>() >= 0)) {
        throw Error(fmt::format("matrix JSON: cell ({}, {}) must be a non-negative integer", i, j));
      }
      counts[order[i]][order[j]] = rows[i][j].get<std::uint64_t>();
    }
  }
  return ConfusionMatrix(*scheme, std::move(counts));
}

ConfusionMatrix load_matrix_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix_json(buffer.str());
}

}  // namespace roadcond::metrics
