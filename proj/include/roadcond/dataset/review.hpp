// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "roadcond/core/error.hpp"
#include "roadcond/dataset/manifest.hpp"
#include "roadcond/dataset/pseudo_label.hpp"

namespace roadcond::dataset {

struct QueueFilter {
  std::set<RoadCondition> classes;  // empty selects every class
  double min_confidence = 0.0;
  double max_confidence = 1.0;
  std::optional<std::size_t> sample_size;
  std::uint64_t seed = 0;
  std::set<std::string> exclude;  // refs refused in earlier sessions
};

/// Pseudo-labels matching the filter (confidence range inclusive). When
/// sample_size is smaller than the match count, a seeded random subset is
/// kept. Ordered by class (scheme order), then descending confidence, then
/// image_ref. Throws roadcond::Error on an inverted confidence range.
std::vector<PseudoLabel> build_review_queue(const PseudoLabelRun& run, const QueueFilter& filter);

enum class VerdictKind { Acceptable, Refused, Relabel, Poor };

std::string_view to_string(VerdictKind kind);

struct ReviewVerdict {
  std::string image_ref;
  VerdictKind kind = VerdictKind::Acceptable;
  std::optional<RoadCondition> relabel;  // set iff kind == Relabel

  friend bool operator==(const ReviewVerdict&, const ReviewVerdict&) = default;
};

/// Malformed verdict batch; one diagnostic per offending field.
class VerdictFormatError : public Error {
 public:
  explicit VerdictFormatError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// JSON array of {"image_ref": str, "verdict": "acceptable"|"refused"|
/// "poor"|"relabel", "label": class (relabel only)}. Collects every problem
/// before throwing VerdictFormatError.
std::vector<ReviewVerdict> parse_verdicts(std::string_view json);
std::string format_verdicts(const std::vector<ReviewVerdict>& verdicts);

struct ExclusionEntry {
  std::string image_ref;
  RoadCondition pseudo_label = RoadCondition::Dry;
  double confidence = 0.0;
  std::string phase;
};

struct VerdictOutcome {
  DatasetManifest manifest;
  std::vector<ExclusionEntry> excluded;
  std::size_t added = 0;
  std::size_t updated = 0;
  std::size_t removed = 0;
};

/// Applies one review batch against the pending pseudo-label run.
///   acceptable  -> sample with the pseudo-label, source random
///   relabel(c)  -> sample with label c
///   poor        -> sample labelled Poor
///   refused     -> no sample; recorded in `excluded`
/// A ref already in the manifest is updated in place (or removed when
/// refused). Throws roadcond::Error on a duplicate ref within the batch, a
/// ref missing from the run, or a resulting label outside the manifest's
/// scheme; the manifest is then left unchanged.
VerdictOutcome apply_verdicts(DatasetManifest manifest, const PseudoLabelRun& pending,
                              const std::vector<ReviewVerdict>& verdicts, const std::string& phase);

/// Appends one JSON line per entry.
void append_exclusions(const std::filesystem::path& path, const std::vector<ExclusionEntry>& entries);
/// Refs recorded so far; empty when the file does not exist.
std::set<std::string> load_exclusions(const std::filesystem::path& path);

struct JudgmentRow {
  std::size_t acceptable = 0;
  std::size_t refused = 0;

  friend bool operator==(const JudgmentRow&, const JudgmentRow&) = default;
};

/// Acceptable/refused tallies keyed by the predicted (pseudo) class. A
/// relabel counts as acceptable only when it names the predicted class; a
/// poor verdict only when the prediction was Poor.
struct JudgmentSummary {
  Scheme scheme = Scheme::FiveClass;
  std::map<RoadCondition, JudgmentRow> per_class;  // every scheme class present
  JudgmentRow total;

  friend bool operator==(const JudgmentSummary&, const JudgmentSummary&) = default;
};

/// Throws roadcond::Error when a verdict's ref is not in the run.
JudgmentSummary judgment_summary(const PseudoLabelRun& run, const std::vector<ReviewVerdict>& verdicts);

/// Two-row table (Acceptable, Refused) with one column per class and a total.
std::string render_judgment(const JudgmentSummary& summary);
std::string judgment_json(const JudgmentSummary& summary);

}  // namespace roadcond::dataset
