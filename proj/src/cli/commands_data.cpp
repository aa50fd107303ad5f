// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <memory>

#include <fmt/format.h>
#include <json.hpp>

#include "commands.hpp"
#include "roadcond/cli/app.hpp"
#include "roadcond/core/csv.hpp"
#include "roadcond/core/error.hpp"
#include "roadcond/dataset/review.hpp"
#include "roadcond/dataset/split.hpp"
#include "roadcond/mapgen/emit.hpp"
#include "roadcond/metrics/report.hpp"
#include "roadcond/pipeline/record_store.hpp"

namespace roadcond::cli {

namespace {

std::string split_table(const dataset::DatasetManifest& m, bool json) {
  const auto train = m.class_counts(dataset::Split::Train);
  const auto val = m.class_counts(dataset::Split::Validation);
  const auto all = m.class_counts();
  if (json) {
    nlohmann::ordered_json doc;
    for (const auto& [c, n] : all) {
      doc["classes"][std::string(to_string(c))] = {
          {"train", train.at(c)}, {"validation", val.at(c)}, {"total", n}};
    }
    doc["train"] = m.count(dataset::Split::Train);
    doc["validation"] = m.count(dataset::Split::Validation);
    doc["total"] = m.samples.size();
    return doc.dump(2) + "\n";
  }
  std::string out = fmt::format("{:<10}{:>10}{:>12}{:>10}\n", "class", "train", "validation", "total");
  for (const auto& [c, n] : all) out += fmt::format("{:<10}{:>10}{:>12}{:>10}\n", to_string(c), train.at(c), val.at(c), n);
  out += fmt::format("{:<10}{:>10}{:>12}{:>10}\n", "total", m.count(dataset::Split::Train),
                     m.count(dataset::Split::Validation), m.samples.size());
  return out;
}

std::set<RoadCondition> parse_class_list(const std::string& text) {
  std::set<RoadCondition> out;
  if (text.empty()) return out;
  for (const auto& part : csv::split_line(text).value_or(std::vector<std::string>{})) {
    const auto c = parse_road_condition(csv::trim(part));
    if (!c) throw CLI::ValidationError("--hide", fmt::format("unknown class '{}'", part));
    out.insert(*c);
  }
  return out;
}

void add_split(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string manifest, out, scheme = "five";
    std::optional<double> ratio;
    std::optional<std::size_t> val_per_class;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("split", "Assign train/validation splits to a manifest");
  sub->add_option("--manifest", o->manifest, "Manifest (JSON lines)")->required()->check(CLI::ExistingFile);
  sub->add_option("--scheme", o->scheme, "Class scheme: two, four or five")->check(scheme_validator())->capture_default_str();
  auto* ratio = sub->add_option("--ratio", o->ratio, "Per-class train fraction in (0, 1]");
  auto* fixed = sub->add_option("--val-per-class", o->val_per_class, "Fixed validation count per class");
  ratio->excludes(fixed);
  sub->add_option("--seed", o->seed, "Shuffle seed")->required();
  sub->add_option("--out", o->out, "Output manifest; stdout when omitted");
  sub->callback([o, &ctx] {
    if (!o->ratio && !o->val_per_class) throw CLI::RequiredError("--ratio or --val-per-class");
    ctx.action = [o, &ctx] {
      auto m = dataset::load_manifest(o->manifest, to_scheme(o->scheme));
      m = o->ratio ? dataset::stratified_split(std::move(m), *o->ratio, o->seed)
                   : dataset::fixed_count_split(std::move(m), *o->val_per_class, o->seed);
      if (o->out.empty()) {
        ctx.out << dataset::format_manifest(m);
      } else {
        dataset::save_manifest(m, o->out);
        ctx.out << split_table(m, ctx.json);
      }
      return kExitOk;
    };
  });
}

void add_verdict_import(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string manifest, run, verdicts, phase, exclusions, scheme = "five";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("verdict-import", "Apply a batch of review verdicts to a manifest");
  sub->add_option("--manifest", o->manifest, "Manifest to update (created if missing)")->required();
  sub->add_option("--run", o->run, "Pseudo-label run the verdicts refer to")->required()->check(CLI::ExistingFile);
  sub->add_option("--verdicts", o->verdicts, "Verdict batch (JSON array)")->required()->check(CLI::ExistingFile);
  sub->add_option("--phase", o->phase, "Phase tag stored on new samples")->required();
  sub->add_option("--exclusions", o->exclusions, "Exclusion log; defaults to exclusions.jsonl beside the manifest");
  sub->add_option("--scheme", o->scheme, "Class scheme")->check(scheme_validator())->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      const Scheme scheme = to_scheme(o->scheme);
      dataset::DatasetManifest manifest{scheme, {}};
      if (std::filesystem::exists(o->manifest)) manifest = dataset::load_manifest(o->manifest, scheme);
      const auto run = dataset::load_run(o->run);
      const auto verdicts = dataset::parse_verdicts(read_text(o->verdicts));
      auto outcome = dataset::apply_verdicts(std::move(manifest), run, verdicts, o->phase);
      const std::filesystem::path exclusions =
          o->exclusions.empty() ? std::filesystem::path(o->manifest).parent_path() / "exclusions.jsonl"
                                : std::filesystem::path(o->exclusions);
      dataset::save_manifest(outcome.manifest, o->manifest);
      dataset::append_exclusions(exclusions, outcome.excluded);
      if (ctx.json) {
        nlohmann::ordered_json doc{{"added", outcome.added},
                                   {"updated", outcome.updated},
                                   {"removed", outcome.removed},
                                   {"excluded", outcome.excluded.size()}};
        for (const auto& [c, n] : outcome.manifest.class_counts()) doc["counts"][std::string(to_string(c))] = n;
        ctx.out << doc.dump(2) << '\n';
      } else {
        ctx.out << fmt::format("added {}, updated {}, removed {}, excluded {}\n", outcome.added, outcome.updated,
                               outcome.removed, outcome.excluded.size());
      }
      return kExitOk;
    };
  });
}

void add_judgment(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string run, verdicts;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("judgment", "Summarise an acceptable/refused audit per predicted class");
  sub->add_option("--run", o->run, "Pseudo-label run that was audited")->required()->check(CLI::ExistingFile);
  sub->add_option("--verdicts", o->verdicts, "Audit verdicts (JSON array)")->required()->check(CLI::ExistingFile);
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      const auto summary =
          dataset::judgment_summary(dataset::load_run(o->run), dataset::parse_verdicts(read_text(o->verdicts)));
      ctx.out << (ctx.json ? dataset::judgment_json(summary) : dataset::render_judgment(summary));
      return kExitOk;
    };
  });
}

void add_report(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string matrix, format = "text";
    int decimals = 2;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("report", "Per-class precision, recall and F1 from a confusion matrix");
  sub->add_option("--matrix", o->matrix, "Confusion matrix JSON")->required()->check(CLI::ExistingFile);
  sub->add_option("--decimals", o->decimals, "Rounding for P/R/F1")->check(CLI::Range(1, 6))->capture_default_str();
  sub->add_option("--format", o->format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      const auto report = metrics::make_report(metrics::load_matrix_json(o->matrix));
      const std::string format = ctx.json ? "json" : o->format;
      if (format == "json") {
        ctx.out << metrics::render_json(report, o->decimals);
      } else if (format == "csv") {
        ctx.out << metrics::render_csv(report, o->decimals);
      } else {
        ctx.out << metrics::render_text(report, o->decimals);
      }
      return kExitOk;
    };
  });
}

void add_map(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string in, out, region, now, hide, title = "Road conditions";
    double stale_minutes = 60;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("map", "Render label records as GeoJSON or a static HTML map");
  sub->add_option("--in", o->in, "Record CSV file or directory of daily files")->required()->check(CLI::ExistingPath);
  sub->add_option("--out", o->out, "Output .geojson/.json or .html")->required();
  sub->add_option("--region", o->region, "Bounding box lat1,lon1,lat2,lon2");
  sub->add_option("--stale-after", o->stale_minutes, "Drop cameras whose newest record is older (minutes)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--now", o->now, "Reference time (ISO 8601); defaults to the newest record");
  sub->add_option("--hide", o->hide, "Classes to leave off the map, e.g. Poor,Offline");
  sub->add_option("--title", o->title, "HTML page title");
  sub->callback([o, &ctx] {
    const auto hidden = parse_class_list(o->hide);
    const auto ext = std::filesystem::path(o->out).extension().string();
    if (ext != ".geojson" && ext != ".json" && ext != ".html" && ext != ".htm") {
      throw CLI::ValidationError("--out", "must end in .geojson, .json or .html");
    }
    ctx.action = [o, hidden, ext, &ctx] {
      const auto records = pipeline::load_records_from(o->in);
      mapgen::LayerOptions opts;
      opts.hidden = hidden;
      opts.stale_after = std::chrono::seconds(static_cast<std::int64_t>(o->stale_minutes * 60));
      if (!o->region.empty()) opts.region = mapgen::parse_bbox(o->region);
      Timestamp now{};
      if (!o->now.empty()) {
        now = parse_iso8601(o->now);
      } else {
        for (const auto& r : records) now = std::max(now, r.timestamp);
      }
      const auto layer = mapgen::build_layer(records, opts, now);
      write_text(o->out, ext == ".html" || ext == ".htm" ? mapgen::emit_html(layer, o->title)
                                                         : mapgen::emit_geojson(layer));
      if (ctx.json) {
        nlohmann::ordered_json doc{{"features", layer.features.size()}, {"records", records.size()}, {"out", o->out}};
        ctx.out << doc.dump(2) << '\n';
      } else {
        ctx.out << fmt::format("{} features from {} records -> {}\n", layer.features.size(), records.size(), o->out);
      }
      return kExitOk;
    };
  });
}

}  // namespace

void add_data_commands(CLI::App& app, Context& ctx) {
  add_split(app, ctx);
  add_verdict_import(app, ctx);
  add_judgment(app, ctx);
  add_report(app, ctx);
  add_map(app, ctx);
}

}  // namespace roadcond::cli
