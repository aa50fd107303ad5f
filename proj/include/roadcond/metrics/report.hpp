// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roadcond/metrics/confusion.hpp"

namespace roadcond::metrics {

struct ClassReport {
  RoadCondition label;
  Metric precision;
  Metric recall;
  Metric f1;
  std::uint64_t support = 0;  // row sum
};

/// Full-precision values; rounding happens only when rendering.
struct ClassificationReport {
  Scheme scheme;
  std::vector<ClassReport> classes;  // scheme order
  double accuracy = 0.0;             // fraction
  std::uint64_t total = 0;
};

/// Throws roadcond::Error on an empty matrix.
ClassificationReport make_report(const ConfusionMatrix& cm);

/// Rounds the stored binary value half away from zero to `decimals` places:
/// 193/200 is stored just below 0.965 and rounds to 0.96; 82.25 is exact
/// and rounds to 82.3.
double round_decimal(double value, int decimals);

/// Aligned table: class, precision, recall, f1-score, support, then the
/// accuracy as a percentage with one decimal fewer than the metrics.
std::string render_text(const ClassificationReport& report, int decimals = 2);
/// Header "class,precision,recall,f1,support"; a final "accuracy" row
/// carries the percentage in the precision column.
std::string render_csv(const ClassificationReport& report, int decimals = 2);
std::string render_json(const ClassificationReport& report, int decimals = 2);

}  // namespace roadcond::metrics
