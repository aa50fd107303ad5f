// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "mock_camera_server.hpp"
#include "roadcond/classifier/architectures.hpp"
#include "roadcond/classifier/shape.hpp"
#include "roadcond/classifier/synthetic.hpp"
#include "roadcond/cli/bench.hpp"
#include "roadcond/core/random.hpp"
#include "roadcond/core/time.hpp"
#include "roadcond/dataset/manifest.hpp"
#include "roadcond/dataset/pseudo_label.hpp"
#include "roadcond/dataset/review.hpp"
#include "roadcond/dataset/rwis.hpp"
#include "roadcond/dataset/split.hpp"
#include "roadcond/mapgen/emit.hpp"
#include "roadcond/mapgen/layer.hpp"
#include "roadcond/metrics/confusion.hpp"
#include "roadcond/metrics/report.hpp"
#include "roadcond/pipeline/pipeline.hpp"
#include "roadcond/pipeline/record_store.hpp"
#include "roadcond/pipeline/submitter.hpp"
#include "test_support.hpp"

using namespace roadcond;
using namespace std::chrono_literals;
using roadcond::testing::fixture;
using roadcond::testing::slurp;

namespace {

/// Collects failed checks for one criterion.
class Checker {
 public:
  void expect(bool ok, std::string what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(std::move(what));
    failed_ += !ok;
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    if (ok()) return fmt::format("{} checks", checks_);
    return fmt::format("{}/{} checks failed: {}", failed_, checks_, fmt::join(failures_, "; "));
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

struct Criterion {
  int number;
  std::string name;
  std::chrono::milliseconds limit;
  std::function<void(Checker&)> body;
};

// Metrics golden suite.
void metrics_suite(Checker& c) {
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(fixture("metrics"))) {
    ++files;
    const auto name = entry.path().stem().string();
    const auto text = slurp(entry.path());
    const auto doc = nlohmann::json::parse(text);
    const auto cm = metrics::parse_matrix_json(text);
    std::set<std::pair<std::string, std::string>> swapped;
    if (doc.contains("printed_swaps")) {
      for (const auto& s : doc["printed_swaps"]) {
        for (const auto& column : s["columns"]) {
          swapped.insert({s["class"].get<std::string>(), column.get<std::string>()});
        }
      }
    }
    for (const auto& [cls, row] : doc["report"].items()) {
      const auto label = parse_road_condition(cls);
      c.expect(label.has_value(), fmt::format("{}: unknown class {}", name, cls));
      if (!label) continue;
      const std::map<std::string, double> computed{{"precision", metrics::precision(cm, *label).value},
                                                   {"recall", metrics::recall(cm, *label).value},
                                                   {"f1", metrics::f1(cm, *label).value}};
      for (const auto& [column, value] : computed) {
        std::string printed = column;
        if (swapped.count({cls, column})) printed = column == "recall" ? "f1" : "recall";
        const double rounded = metrics::round_decimal(value, 2);
        const double expected = row[printed].get<double>();
        c.expect(std::abs(rounded - expected) <= 0.005 + 1e-9,
                 fmt::format("{} {} {}: {} vs {}", name, cls, column, rounded, expected));
      }
      const auto idx = class_index(cm.scheme(), *label);
      c.expect(idx && cm.row_sum(*idx) == row["support"].get<std::uint64_t>(),
               fmt::format("{} {} support", name, cls));
    }
    const double acc = 100.0 * metrics::accuracy(cm);
    c.expect(std::abs(acc - doc["accuracy_percent"].get<double>()) <= 0.05 + 1e-9,
             fmt::format("{} accuracy {:.3f}", name, acc));
  }
  c.expect(files == 7, fmt::format("expected 7 matrix fixtures, found {}", files));

  // The printed phase-3 Dry F1 of 0.93 is unreachable; it is pinned at the
  // harmonic mean of the printed precision and recall.
  const auto phase3 = nlohmann::json::parse(slurp(fixture("metrics/phase3_vgg16_5class.json")));
  const double p = phase3["report"]["Dry"]["precision"].get<double>();
  const double r = phase3["report"]["Dry"]["recall"].get<double>();
  c.expect(metrics::round_decimal(2 * p * r / (p + r), 2) == 0.89, "phase-3 Dry F1 pin");
  const auto cm = metrics::parse_matrix_json(phase3.dump());
  c.expect(metrics::round_decimal(metrics::f1(cm, RoadCondition::Dry).value, 2) != 0.93, "phase-3 Dry F1 is not 0.93");
}

// Shape-inference golden suite.
void shape_suite(Checker& c) {
  using classifier::Shape;
  const auto map = [](int h, int w, int ch) { return Shape{h, w, ch, false}; };
  const auto vec = [](int ch) { return Shape{1, 1, ch, true}; };
  namespace arch = classifier::arch;
  const std::vector<std::pair<classifier::ArchitectureSpec, std::vector<std::pair<const char*, Shape>>>> tables{
      {arch::vgg16(5),
       {{"conv-block1", map(224, 224, 64)},
        {"maxpool1", map(112, 112, 64)},
        {"conv-block2", map(112, 112, 128)},
        {"maxpool2", map(56, 56, 128)},
        {"conv-block3", map(56, 56, 256)},
        {"maxpool3", map(28, 28, 256)},
        {"conv-block4", map(28, 28, 512)},
        {"maxpool4", map(14, 14, 512)},
        {"conv-block5", map(14, 14, 512)},
        {"maxpool5", map(7, 7, 512)},
        {"fc-relu", vec(4096)},
        {"fc-softmax", vec(5)}}},
      {arch::resnet50(5),
       {{"conv1", map(112, 112, 64)},
        {"maxpool", map(56, 56, 64)},
        {"conv2_x", map(56, 56, 256)},
        {"conv3_x", map(28, 28, 512)},
        {"conv4_x", map(14, 14, 1024)},
        {"conv5_x", map(7, 7, 2048)},
        {"global_avg_pooling", vec(2048)},
        {"dropout", vec(2048)},
        {"fc_softmax", vec(5)}}},
      {arch::inception_resnet_v2(5),
       {{"stem1", map(149, 149, 32)},
        {"stem2", map(147, 147, 32)},
        {"stem3", map(147, 147, 64)},
        {"stem4", map(73, 73, 160)},
        {"stem5", map(71, 71, 192)},
        {"stem6", map(35, 35, 256)},
        {"inceptionresnet-a", map(35, 35, 256)},
        {"reduction-a", map(17, 17, 896)},
        {"inceptionresnet-b", map(17, 17, 896)},
        {"reduction-b", map(8, 8, 1792)},
        {"inceptionresnet-c", map(8, 8, 1792)},
        {"avgpool", vec(1792)},
        {"fc_softmax", vec(5)}}},
      {arch::xception(5),
       {{"entry", map(19, 19, 728)},
        {"middle", map(19, 19, 728)},
        {"exit", vec(2048)},
        {"dropout", vec(2048)},
        {"fc_softmax", vec(5)}}},
      {arch::efficientnet_b0(5),
       {{"conv3", map(224, 224, 32)},
        {"mbconv1", map(112, 112, 16)},
        {"mbconv6-1", map(112, 112, 24)},
        {"mbconv6-2", map(56, 56, 40)},
        {"mbconv6-3", map(28, 28, 80)},
        {"mbconv6-4", map(28, 28, 112)},
        {"mbconv6-5", map(14, 14, 192)},
        {"mbconv6-6", map(7, 7, 320)},
        {"conv1", map(7, 7, 1280)},
        {"pooling", vec(1280)},
        {"fc_softmax", vec(5)}}},
  };
  for (const auto& [spec, cells] : tables) {
    for (const auto& [layer, expected] : cells) {
      const auto out = classifier::output_of(spec, layer);
      c.expect(out && *out == expected,
               fmt::format("{} {}: {}", spec.name, layer, out ? classifier::to_string(*out) : "missing"));
    }
  }
  c.expect(classifier::count_parameters(arch::dense_head(4096, 2)) == 8194, "4096x2 head params");
  c.expect(classifier::count_parameters(arch::dense_head(2048, 2)) == 4098, "2048x2 head params");
}

dataset::DatasetManifest manifest_with(const std::vector<std::pair<RoadCondition, std::size_t>>& counts) {
  dataset::DatasetManifest m{Scheme::FiveClass, {}};
  std::size_t i = 0;
  for (const auto& [label, n] : counts) {
    for (std::size_t k = 0; k < n; ++k) {
      m.samples.push_back({fmt::format("img/{:06}.jpg", i++), label, dataset::SampleSource::CherryPicked, "p",
                           std::nullopt, dataset::Split::Unassigned});
    }
  }
  return m;
}

// Split reproduction.
void split_suite(Checker& c) {
  using dataset::Split;
  constexpr auto Dry = RoadCondition::Dry, Wet = RoadCondition::Wet, Snow = RoadCondition::Snow,
                 Offline = RoadCondition::Offline, Poor = RoadCondition::Poor;
  struct Case {
    const char* name;
    std::vector<std::pair<RoadCondition, std::size_t>> totals;
    double ratio;
    std::map<RoadCondition, std::size_t> train;
    std::size_t train_total, validation_total;
  };
  const std::vector<Case> cases{
      {"20K",
       {{Dry, 9620}, {Wet, 5012}, {Snow, 4028}, {Offline, 676}, {Poor, 1108}},
       0.8,
       {{Dry, 7696}, {Wet, 4009}, {Snow, 3222}, {Offline, 540}, {Poor, 886}},
       16353,
       4091},
      {"47K",
       {{Dry, 16065}, {Offline, 5225}, {Poor, 9259}, {Snow, 7565}, {Wet, 9228}},
       0.9,
       {{Dry, 14458}, {Offline, 4702}, {Poor, 8333}, {Snow, 6808}, {Wet, 8305}},
       42606,
       4736},
  };
  for (const auto& k : cases) {
    const auto m = dataset::stratified_split(manifest_with(k.totals), k.ratio, 17);
    const auto train = m.class_counts(Split::Train);
    for (const auto& [label, n] : k.train) {
      c.expect(train.at(label) == n, fmt::format("{} {} train {}", k.name, to_string(label), train.at(label)));
    }
    c.expect(m.count(Split::Train) == k.train_total, fmt::format("{} train total", k.name));
    c.expect(m.count(Split::Validation) == k.validation_total, fmt::format("{} validation total", k.name));
  }

  SplitMix64 rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<RoadCondition, std::size_t>> counts;
    for (RoadCondition label : classes_of(Scheme::FiveClass)) counts.push_back({label, rng.below(120)});
    const auto base = manifest_with(counts);
    const double ratio = std::array<double, 4>{0.8, 0.9, 0.95, 0.5}[rng.below(4)];
    const auto seed = rng.next();
    const auto a = dataset::stratified_split(base, ratio, seed);
    c.expect(a == dataset::stratified_split(base, ratio, seed), fmt::format("trial {} not deterministic", trial));
    c.expect(a.samples.size() == base.samples.size(), fmt::format("trial {} size", trial));
    for (const auto& [label, n] : counts) {
      const auto t = dataset::train_count(n, ratio);
      c.expect(a.class_counts(Split::Train).at(label) == t && a.class_counts(Split::Validation).at(label) == n - t,
               fmt::format("trial {} {} counts", trial, to_string(label)));
    }
    bool partition = true;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      partition = partition && a.samples[i].image_ref == base.samples[i].image_ref &&
                  a.samples[i].label == base.samples[i].label &&
                  (a.samples[i].split == Split::Train || a.samples[i].split == Split::Validation);
    }
    c.expect(partition, fmt::format("trial {} partition", trial));
  }
}

// Pipeline properties against the mock camera server.
void pipeline_suite(Checker& c) {
  constexpr int kCameras = 20;
  constexpr std::size_t kCycles = 2;
  testing::MockCameraServer server;
  for (int i = 0; i < kCameras; ++i) {
    server.set_camera({fmt::format("c{:02}", i), i == kCameras - 1 ? 800ms : 0ms, 200,
                       testing::scene_jpeg(classes_of(Scheme::FiveClass)[static_cast<std::size_t>(i) % 5], 64, 48,
                                           static_cast<std::uint64_t>(i)),
                       "image/jpeg", false});
  }
  testing::TempDir dir;
  auto sink = std::make_shared<testing::ScriptedSink>(0, true);
  pipeline::PipelineConfig cfg;
  cfg.cameras = server.catalogue();
  cfg.poll_interval = 50ms;
  cfg.workers = 4;
  cfg.batch_size = 16;
  cfg.backend =
      std::make_shared<testing::SlowConstantBackend>(RoadCondition::Dry, classifier::InputDims{32, 32}, 10ms);
  cfg.output_dir = dir.path();
  cfg.sink = sink;
  cfg.linger = 200ms;
  cfg.max_cycles = kCycles;
  cfg.backoff = {1ms, 10ms, 8};
  cfg.submit_poll = 20ms;

  pipeline::Pipeline p(cfg);
  p.wait();

  const auto events = p.events();
  std::map<std::string, std::size_t> acquired;
  std::optional<std::chrono::steady_clock::time_point> first_classify, first_slow_acquire;
  const std::string slow = fmt::format("c{:02}", kCameras - 1);
  for (const auto& e : events) {
    if (e.kind == pipeline::EventKind::AcquireEnd) {
      ++acquired[e.subject];
      if (e.subject == slow && !first_slow_acquire) first_slow_acquire = e.at;
    }
    if (e.kind == pipeline::EventKind::ClassifyStart && !first_classify) first_classify = e.at;
  }
  c.expect(acquired.size() == kCameras, fmt::format("{} cameras acquired", acquired.size()));
  for (const auto& [id, n] : acquired) c.expect(n == kCycles, fmt::format("{} acquired {} times", id, n));
  c.expect(server.total_requests() == kCameras * kCycles, "one request per camera per cycle");
  c.expect(first_classify && first_slow_acquire && *first_classify < *first_slow_acquire,
           "first classification precedes the slow camera's acquisition");

  const auto counters = p.counters();
  c.expect(counters.classified == kCameras * kCycles, fmt::format("classified {}", counters.classified));
  c.expect(p.store().read_all().size() == counters.classified, "every classified record appended");
  c.expect(sink->accepted_records() == 0, "stalled sink accepted nothing while acquisition finished");

  sink->release();
  for (int i = 0; i < 500 && sink->accepted_records() < counters.classified; ++i) std::this_thread::sleep_for(10ms);
  p.stop();
  const auto* submitter = p.submitter();
  const auto wm = submitter->watermark();
  const auto final_counts = p.counters();
  c.expect(sink->accepted_records() == final_counts.classified, "sink caught up after release");
  c.expect(final_counts.classified == wm.submitted + submitter->pending_records() + wm.dead_lettered,
           fmt::format("reconciliation {} = {} + {} + {}", final_counts.classified, wm.submitted,
                       submitter->pending_records(), wm.dead_lettered));
}

// Baseline backend sanity.
void baseline_suite(Checker& c) {
  const auto train = classifier::synthetic::to_samples(
      classifier::synthetic::generate(2000, Scheme::FiveClass, 64, 64, 2024));
  const auto validation = classifier::synthetic::to_samples(
      classifier::synthetic::generate(500, Scheme::FiveClass, 64, 64, 2025));
  cli::BenchOptions opts;
  opts.epochs = 12;
  opts.seed = 2024;
  const auto result = cli::bench_baseline("baseline-8", 8, train, validation, Scheme::FiveClass, opts);
  c.expect(result.epochs.size() == 12, "12 epochs tabulated");
  double best = 0.0;
  std::int64_t previous = 0;
  for (const auto& e : result.epochs) {
    best = std::max(best, e.validation_accuracy);
    c.expect(e.cumulative_us >= previous && e.duration_us >= 0, fmt::format("epoch {} timing", e.epoch));
    previous = e.cumulative_us;
  }
  c.expect(best >= 0.95, fmt::format("best validation accuracy {:.4f}", best));
}

// Judgment workflow.
void judgment_suite(Checker& c) {
  const std::vector<std::tuple<const char*, std::size_t, std::size_t>> expected{{"vgg16_20k", 888, 112},
                                                                                {"efficientnet_b4_47k", 978, 22}};
  for (const auto& [name, acceptable, refused] : expected) {
    const auto run = dataset::load_run(fixture(fmt::format("judgment/{}_run.json", name)));
    const auto verdicts = dataset::parse_verdicts(slurp(fixture(fmt::format("judgment/{}_verdicts.json", name))));
    const auto summary = dataset::judgment_summary(run, verdicts);
    c.expect(summary.total == dataset::JudgmentRow{acceptable, refused},
             fmt::format("{}: {}/{}", name, summary.total.acceptable, summary.total.refused));
  }
  const auto en = dataset::judgment_summary(
      dataset::load_run(fixture("judgment/efficientnet_b4_47k_run.json")),
      dataset::parse_verdicts(slurp(fixture("judgment/efficientnet_b4_47k_verdicts.json"))));
  const std::map<RoadCondition, dataset::JudgmentRow> row{{RoadCondition::Dry, {608, 18}},
                                                          {RoadCondition::Offline, {78, 1}},
                                                          {RoadCondition::Poor, {217, 0}},
                                                          {RoadCondition::Snow, {9, 1}},
                                                          {RoadCondition::Wet, {66, 2}}};
  for (const auto& [label, counts] : row) {
    c.expect(en.per_class.at(label) == counts, fmt::format("efficientnet_b4_47k {}", to_string(label)));
  }
}

// Map contract.
void map_suite(Checker& c) {
  const auto records = pipeline::load_records_from(fixture("map/labels-20260115.csv"));
  const auto noon = parse_iso8601("2026-01-15T12:00:00Z");
  const auto layer = mapgen::build_layer(records, {}, noon + 15min);
  const auto doc = nlohmann::json::parse(mapgen::emit_geojson(layer));
  c.expect(doc["features"].size() == 782, fmt::format("{} features", doc["features"].size()));

  SplitMix64 rng(782);
  std::vector<classifier::LabelRecord> random;
  for (int i = 0; i < 1000; ++i) {
    random.push_back({"cam-" + std::to_string(rng.below(300)), noon - std::chrono::seconds(rng.below(7200)),
                      classes_of(Scheme::FiveClass)[rng.below(5)], rng.uniform(0.2, 1.0), rng.uniform(25.0, 60.0),
                      rng.uniform(-130.0, -60.0)});
  }
  for (int trial = 0; trial < 20; ++trial) {
    mapgen::LayerOptions opts;
    if (trial > 0) {
      opts.region = mapgen::make_bbox(rng.uniform(25, 60), rng.uniform(-130, -60), rng.uniform(25, 60),
                                      rng.uniform(-130, -60));
    }
    const auto l = mapgen::build_layer(random, opts, noon);
    std::set<std::string> ids;
    bool sound = true, unique = true;
    for (const auto& f : l.features) {
      unique = ids.insert(f.camera_id).second && unique;
      sound = sound && (!opts.region || opts.region->contains(f.latitude, f.longitude));
    }
    c.expect(unique, fmt::format("trial {} duplicate camera", trial));
    c.expect(sound, fmt::format("trial {} feature outside region", trial));
    c.expect(mapgen::build_layer(mapgen::to_records(l), opts, noon).features == l.features,
             fmt::format("trial {} dedup is not a fixed point", trial));
  }
}

double chord_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double rad = 3.14159265358979323846 / 180.0;
  const auto xyz = [&](double lat, double lon) {
    return std::array<double, 3>{std::cos(lat * rad) * std::cos(lon * rad), std::cos(lat * rad) * std::sin(lon * rad),
                                 std::sin(lat * rad)};
  };
  const auto a = xyz(lat1, lon1), b = xyz(lat2, lon2);
  const double d = std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                             (a[2] - b[2]) * (a[2] - b[2]));
  return 2.0 * dataset::kEarthRadiusKm * std::asin(std::min(1.0, d / 2.0));
}

// RWIS matching.
void rwis_suite(Checker& c) {
  SplitMix64 rng(1000);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a1 = rng.uniform(-89.0, 89.0), o1 = rng.uniform(-180.0, 180.0);
    const double a2 = rng.uniform(-89.0, 89.0), o2 = rng.uniform(-180.0, 180.0);
    worst = std::max(worst, std::abs(dataset::haversine_km(a1, o1, a2, o2) - chord_km(a1, o1, a2, o2)));
  }
  c.expect(worst < 0.001, fmt::format("worst disagreement {:.6f} km", worst));

  const auto t = parse_iso8601("2020-01-11T21:00:00Z");
  const std::vector<ingest::CameraRecord> cam{{"cam", "http://x/1", 45.0, -75.0, {}}};
  const auto match = [&](double lat) {
    return dataset::match_rwis(cam, {{"s", lat, -75.0, t, 1}}, 10.0, dataset::kDefaultRwisMaxAge, t);
  };
  const auto same = match(45.0);
  c.expect(same.size() == 1 && same[0].distance_km == 0.0, "identical coordinates match at 0 km");
  const auto near = match(45.05);
  c.expect(near.size() == 1 && std::abs(near[0].distance_km - 5.56) < 0.01, "0.05 deg matches at about 5.56 km");
  c.expect(match(46.0).empty(), "one degree is not matched");
  c.expect(std::abs(dataset::haversine_km(45.0, -75.0, 46.0, -75.0) - 111.19) < 0.01, "one degree is 111.19 km");
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::off);
  const std::vector<Criterion> criteria{
      {1, "metrics golden suite", 1000ms, metrics_suite},
      {2, "shape-inference golden suite", 1000ms, shape_suite},
      {3, "split reproduction", 5000ms, split_suite},
      {4, "pipeline properties", 30000ms, pipeline_suite},
      {5, "baseline backend sanity", 60000ms, baseline_suite},
      {6, "judgment workflow", 60000ms, judgment_suite},
      {7, "map contract", 60000ms, map_suite},
      {8, "rwis matching", 60000ms, rwis_suite},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.body(checker);
    } catch (const std::exception& e) {
      checker.expect(false, fmt::format("exception: {}", e.what()));
    }
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    const bool in_time = elapsed <= criterion.limit;
    const bool pass = checker.ok() && in_time;
    failed += !pass;
    std::cout << fmt::format("{} criterion {}: {} ({}; {} ms, limit {} ms)\n", pass ? "PASS" : "FAIL",
                             criterion.number, criterion.name, checker.summary(), elapsed.count(),
                             criterion.limit.count());
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
                           criteria.size());
  return failed == 0 ? 0 : 1;
}
