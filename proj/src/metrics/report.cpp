// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/metrics/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "roadcond/core/error.hpp"

namespace roadcond::metrics {

ClassificationReport make_report(const ConfusionMatrix& cm) {
  ClassificationReport r{cm.scheme(), {}, accuracy(cm), cm.total()};
  const auto classes = classes_of(cm.scheme());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    r.classes.push_back(ClassReport{classes[i], precision(cm, classes[i]), recall(cm, classes[i]),
                                    f1(cm, classes[i]), cm.row_sum(i)});
  }
  return r;
}

namespace {

// Half away from zero, decided on the exact binary value: 193/200 is stored
// just below 0.965 and gives 0.96, while 82.25 is exact and gives 82.3.
std::string fixed(double v, int decimals) {
  decimals = std::max(decimals, 0);
  const std::string exact = fmt::format("{:.{}f}", std::abs(v), decimals + 40);
  std::string digits = exact.substr(0, exact.size() - 40);
  if (exact[exact.size() - 40] >= '5') {
    std::size_t i = digits.size();
    for (;;) {
      if (i == 0) {
        digits.insert(digits.begin(), '1');
        break;
      }
      --i;
      if (digits[i] == '.') continue;
      if (digits[i] == '9') {
        digits[i] = '0';
        continue;
      }
      ++digits[i];
      break;
    }
  }
  if (!digits.empty() && digits.back() == '.') digits.pop_back();
  const bool zero = digits.find_first_not_of("0.") == std::string::npos;
  return (std::signbit(v) && !zero ? "-" : "") + digits;
}

}  // namespace

double round_decimal(double value, int decimals) { return std::stod(fixed(value, decimals)); }

namespace {

std::string percent(const ClassificationReport& r, int decimals) {
  const int d = std::max(decimals - 1, 0);
  return fixed(100.0 * r.accuracy, d) + "%";
}

}  // namespace

std::string render_text(const ClassificationReport& r, int decimals) {
  std::string out = fmt::format("{:<10}{:>11}{:>11}{:>11}{:>10}\n", "", "precision", "recall",
                                "f1-score", "support");
  bool any_undefined = false;
  for (const auto& c : r.classes) {
    const auto cell = [&](const Metric& m) {
      any_undefined = any_undefined || m.undefined;
      return fixed(m.value, decimals) + (m.undefined ? "*" : "");
    };
    out += fmt::format("{:<10}{:>11}{:>11}{:>11}{:>10}\n", to_string(c.label), cell(c.precision),
                       cell(c.recall), cell(c.f1), c.support);
  }
  out += fmt::format("\n{:<10}{:>11}{:>32}\n", "accuracy", percent(r, decimals), r.total);
  if (any_undefined) out += "* zero denominator, reported as 0\n";
  return out;
}

std::string render_csv(const ClassificationReport& r, int decimals) {
  std::string out = "class,precision,recall,f1,support\n";
  for (const auto& c : r.classes) {
    out += fmt::format("{},{},{},{},{}\n", to_string(c.label), fixed(c.precision.value, decimals),
                       fixed(c.recall.value, decimals), fixed(c.f1.value, decimals), c.support);
  }
  out += fmt::format("accuracy,{},,,{}\n", fixed(100.0 * r.accuracy, std::max(decimals - 1, 0)), r.total);
  return out;
}

std::string render_json(const ClassificationReport& r, int decimals) {
  nlohmann::ordered_json doc;
  doc["scheme"] = std::string(to_string(r.scheme));
  auto& classes = doc["classes"] = nlohmann::ordered_json::array();
  for (const auto& c : r.classes) {
    nlohmann::ordered_json row;
    row["class"] = std::string(to_string(c.label));
    row["precision"] = round_decimal(c.precision.value, decimals);
    row["recall"] = round_decimal(c.recall.value, decimals);
    row["f1"] = round_decimal(c.f1.value, decimals);
    row["support"] = c.support;
    if (c.precision.undefined || c.recall.undefined || c.f1.undefined) row["undefined"] = true;
    classes.push_back(std::move(row));
  }
  doc["accuracy_percent"] = round_decimal(100.0 * r.accuracy, std::max(decimals - 1, 0));
  doc["total"] = r.total;
  return doc.dump(2) + "\n";
}

}  // namespace roadcond::metrics
