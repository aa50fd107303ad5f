// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "roadcond/core/road_condition.hpp"

namespace roadcond::metrics {

/// K x K counts, rows = true class, columns = predicted class, both in the
/// scheme's class order.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(Scheme scheme);
  /// Throws roadcond::Error unless `counts` is K x K for the scheme.
  ConfusionMatrix(Scheme scheme, std::vector<std::vector<std::uint64_t>> counts);

  Scheme scheme() const { return scheme_; }
  std::size_t size() const { return counts_.size(); }
  const std::vector<std::vector<std::uint64_t>>& counts() const { return counts_; }

  std::uint64_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth][predicted]; }
  /// Throws roadcond::Error when either class is outside the scheme.
  std::uint64_t count(RoadCondition truth, RoadCondition predicted) const;

  /// Increments exactly one cell. Throws roadcond::Error when either class
  /// is outside the scheme.
  void accumulate(RoadCondition truth, RoadCondition predicted, std::uint64_t n = 1);

  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(std::size_t i) const;
  std::uint64_t column_sum(std::size_t j) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t index(RoadCondition c) const;

  Scheme scheme_;
  std::vector<std::vector<std::uint64_t>> counts_;
};

/// Cell-wise sum. Throws roadcond::Error on differing schemes.
ConfusionMatrix merge(const ConfusionMatrix& a, const ConfusionMatrix& b);

/// A ratio metric. A zero denominator yields value 0 with `undefined` set.
struct Metric {
  double value = 0.0;
  bool undefined = false;
};

/// One-vs-rest: TP / (TP + FP).
Metric precision(const ConfusionMatrix& cm, RoadCondition c);
/// One-vs-rest: TP / (TP + FN).
Metric recall(const ConfusionMatrix& cm, RoadCondition c);
/// 2PR / (P + R); undefined when P or R is undefined or both are zero.
Metric f1(const ConfusionMatrix& cm, RoadCondition c);
/// trace / total as a fraction. Throws roadcond::Error on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

/// Parses {"scheme": ..., "classes": [...], "matrix": [[...]]}. "classes"
/// names the row/column order used in the file (any permutation of the
/// scheme's classes); it defaults to the scheme order. "scheme" may be
/// omitted when it follows from the class count.
ConfusionMatrix parse_matrix_json(std::string_view text);
ConfusionMatrix load_matrix_json(const std::filesystem::path& path);

}  // namespace roadcond::metrics
