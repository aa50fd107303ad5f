// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/dataset/review.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "roadcond/core/random.hpp"

namespace roadcond::dataset {

std::vector<PseudoLabel> build_review_queue(const PseudoLabelRun& run, const QueueFilter& filter) {
  if (filter.min_confidence > filter.max_confidence) {
    throw Error(fmt::format("confidence range [{}, {}] is inverted", filter.min_confidence,
                            filter.max_confidence));
  }
  std::vector<PseudoLabel> out;
  for (const auto& l : run.labels) {
    if (!filter.classes.empty() && !filter.classes.contains(l.label)) continue;
    if (l.confidence < filter.min_confidence || l.confidence > filter.max_confidence) continue;
    if (filter.exclude.contains(l.image_ref)) continue;
    out.push_back(l);
  }
  if (filter.sample_size && *filter.sample_size < out.size()) {
    SplitMix64 rng(filter.seed);
    shuffle(out, rng);
    out.resize(*filter.sample_size);
  }
  std::sort(out.begin(), out.end(), [&](const PseudoLabel& a, const PseudoLabel& b) {
    const auto ka = class_index(run.scheme, a.label).value_or(99);
    const auto kb = class_index(run.scheme, b.label).value_or(99);
    if (ka != kb) return ka < kb;
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.image_ref < b.image_ref;
  });
  return out;
}

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Acceptable: return "acceptable";
    case VerdictKind::Refused: return "refused";
    case VerdictKind::Relabel: return "relabel";
    case VerdictKind::Poor: return "poor";
  }
  return "unknown";
}

namespace {

std::string join_diagnostics(const std::vector<std::string>& d) {
  std::string out = "invalid verdict batch";
  for (const auto& line : d) out += "\n  " + line;
  return out;
}

}  // namespace

VerdictFormatError::VerdictFormatError(std::vector<std::string> diagnostics)
    : Error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<ReviewVerdict> parse_verdicts(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw VerdictFormatError({fmt::format("body: not valid JSON ({})", e.what())});
  }
  if (!doc.is_array()) throw VerdictFormatError({"body: expected a JSON array of verdicts"});

  std::vector<std::string> problems;
  std::vector<ReviewVerdict> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& v = doc[i];
    if (!v.is_object()) {
      problems.push_back(fmt::format("[{}]: expected an object", i));
      continue;
    }
    ReviewVerdict verdict;
    bool ok = true;
    if (!v.contains("image_ref") || !v["image_ref"].is_string() || v["image_ref"].get<std::string>().empty()) {
      problems.push_back(fmt::format("[{}].image_ref: required non-empty string", i));
      ok = false;
    } else {
      verdict.image_ref = v["image_ref"].get<std::string>();
    }
    std::optional<VerdictKind> kind;
    if (v.contains("verdict") && v["verdict"].is_string()) {
      const auto text = v["verdict"].get<std::string>();
      for (auto k : {VerdictKind::Acceptable, VerdictKind::Refused, VerdictKind::Relabel, VerdictKind::Poor}) {
        if (text == to_string(k)) kind = k;
      }
    }
    if (!kind) {
      problems.push_back(fmt::format("[{}].verdict: expected one of acceptable, refused, relabel, poor", i));
      ok = false;
    } else {
      verdict.kind = *kind;
    }
    if (kind == VerdictKind::Relabel) {
      const auto label = v.contains("label") && v["label"].is_string()
                             ? parse_road_condition(v["label"].get<std::string>())
                             : std::nullopt;
      if (!label) {
        problems.push_back(fmt::format("[{}].label: relabel needs a class name", i));
        ok = false;
      }
      verdict.relabel = label;
    } else if (v.contains("label") && !v["label"].is_null()) {
      problems.push_back(fmt::format("[{}].label: only allowed with verdict relabel", i));
      ok = false;
    }
    if (ok) out.push_back(std::move(verdict));
  }
  if (!problems.empty()) throw VerdictFormatError(std::move(problems));
  return out;
}

std::string format_verdicts(const std::vector<ReviewVerdict>& verdicts) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& v : verdicts) {
    nlohmann::ordered_json j{{"image_ref", v.image_ref}, {"verdict", std::string(to_string(v.kind))}};
    if (v.relabel) j["label"] = std::string(to_string(*v.relabel));
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

VerdictOutcome apply_verdicts(DatasetManifest manifest, const PseudoLabelRun& pending,
                              const std::vector<ReviewVerdict>& verdicts, const std::string& phase) {
  std::unordered_map<std::string_view, const PseudoLabel*> by_ref;
  for (const auto& l : pending.labels) by_ref.emplace(l.image_ref, &l);

  // Validate the whole batch before touching the manifest.
  std::unordered_set<std::string_view> seen;
  for (const auto& v : verdicts) {
    if (!seen.insert(v.image_ref).second) {
      throw Error(fmt::format("duplicate verdict for '{}' in one batch", v.image_ref));
    }
    if (!by_ref.contains(v.image_ref)) {
      throw Error(fmt::format("verdict for '{}', which is not in the pending run", v.image_ref));
    }
    if (v.kind == VerdictKind::Relabel && !v.relabel) {
      throw Error(fmt::format("relabel verdict for '{}' has no class", v.image_ref));
    }
  }

  VerdictOutcome outcome;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < manifest.samples.size(); ++i) index.emplace(manifest.samples[i].image_ref, i);
  std::vector<bool> remove(manifest.samples.size(), false);

  for (const auto& v : verdicts) {
    const PseudoLabel& pl = *by_ref.at(v.image_ref);
    const auto existing = index.find(v.image_ref);
    if (v.kind == VerdictKind::Refused) {
      outcome.excluded.push_back({pl.image_ref, pl.label, pl.confidence, phase});
      if (existing != index.end() && existing->second < remove.size() && !remove[existing->second]) {
        remove[existing->second] = true;
        ++outcome.removed;
      }
      continue;
    }
    RoadCondition label = pl.label;
    if (v.kind == VerdictKind::Relabel) label = *v.relabel;
    if (v.kind == VerdictKind::Poor) label = RoadCondition::Poor;
    if (!in_scheme(manifest.scheme, label)) {
      throw Error(fmt::format("verdict for '{}' gives {}, which is not a {} class", v.image_ref,
                              to_string(label), to_string(manifest.scheme)));
    }
    if (existing != index.end()) {
      auto& s = manifest.samples[existing->second];
      if (s.label != label) {
        s.label = label;
        ++outcome.updated;
      }
      continue;
    }
    index.emplace(v.image_ref, manifest.samples.size());
    manifest.samples.push_back({pl.image_ref, label, SampleSource::Random, phase, pl.confidence, Split::Unassigned});
    ++outcome.added;
  }

  if (outcome.removed) {
    std::vector<LabelledSample> kept;
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
      if (i >= remove.size() || !remove[i]) kept.push_back(std::move(manifest.samples[i]));
    }
    manifest.samples = std::move(kept);
  }
  outcome.manifest = std::move(manifest);
  return outcome;
}

void append_exclusions(const std::filesystem::path& path, const std::vector<ExclusionEntry>& entries) {
  if (entries.empty()) return;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(fmt::format("cannot append to '{}'", path.string()));
  for (const auto& e : entries) {
    nlohmann::ordered_json j{{"image_ref", e.image_ref},
                             {"pseudo_label", std::string(to_string(e.pseudo_label))},
                             {"confidence", e.confidence},
                             {"phase", e.phase}};
    out << j.dump() << '\n';
  }
  if (!out) throw Error(fmt::format("failed appending to '{}'", path.string()));
}

std::set<std::string> load_exclusions(const std::filesystem::path& path) {
  std::set<std::string> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.insert(nlohmann::json::parse(line).at("image_ref").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(fmt::format("exclusion log line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

JudgmentSummary judgment_summary(const PseudoLabelRun& run, const std::vector<ReviewVerdict>& verdicts) {
  std::unordered_map<std::string_view, const PseudoLabel*> by_ref;
  for (const auto& l : run.labels) by_ref.emplace(l.image_ref, &l);

  JudgmentSummary s;
  s.scheme = run.scheme;
  for (auto c : classes_of(run.scheme)) s.per_class[c] = {};
  for (const auto& v : verdicts) {
    const auto it = by_ref.find(v.image_ref);
    if (it == by_ref.end()) throw Error(fmt::format("verdict for '{}', which is not in the run", v.image_ref));
    const RoadCondition predicted = it->second->label;
    bool acceptable = false;
    switch (v.kind) {
      case VerdictKind::Acceptable: acceptable = true; break;
      case VerdictKind::Refused: acceptable = false; break;
      case VerdictKind::Relabel: acceptable = v.relabel == predicted; break;
      case VerdictKind::Poor: acceptable = predicted == RoadCondition::Poor; break;
    }
    auto& row = s.per_class[predicted];
    (acceptable ? row.acceptable : row.refused) += 1;
    (acceptable ? s.total.acceptable : s.total.refused) += 1;
  }
  return s;
}

std::string render_judgment(const JudgmentSummary& s) {
  std::string header = fmt::format("{:<12}", "verdict");
  std::string acc = fmt::format("{:<12}", "acceptable");
  std::string ref = fmt::format("{:<12}", "refused");
  for (const auto& [c, row] : s.per_class) {
    header += fmt::format("{:>9}", to_string(c));
    acc += fmt::format("{:>9}", row.acceptable);
    ref += fmt::format("{:>9}", row.refused);
  }
  header += fmt::format("{:>9}", "total");
  acc += fmt::format("{:>9}", s.total.acceptable);
  ref += fmt::format("{:>9}", s.total.refused);
  return header + "\n" + acc + "\n" + ref + "\n";
}

std::string judgment_json(const JudgmentSummary& s) {
  nlohmann::ordered_json doc;
  doc["scheme"] = std::string(to_string(s.scheme));
  auto& classes = doc["classes"] = nlohmann::ordered_json::object();
  for (const auto& [c, row] : s.per_class) {
    classes[std::string(to_string(c))] = {{"acceptable", row.acceptable}, {"refused", row.refused}};
  }
  doc["total"] = {{"acceptable", s.total.acceptable}, {"refused", s.total.refused}};
  return doc.dump(2) + "\n";
}

}  // namespace roadcond::dataset
