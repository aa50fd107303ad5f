// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cerrno>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "mock_camera_server.hpp"
#include "roadcond/core/csv.hpp"
#include "roadcond/core/time.hpp"
#include "roadcond/pipeline/bounded_queue.hpp"
#include "roadcond/pipeline/pipeline.hpp"
#include "roadcond/pipeline/record_store.hpp"
#include "roadcond/pipeline/sinks.hpp"
#include "roadcond/pipeline/submitter.hpp"
#include "test_support.hpp"

using namespace roadcond;
using namespace roadcond::pipeline;
using namespace std::chrono_literals;
using roadcond::testing::MockCamera;
using roadcond::testing::MockCameraServer;
using roadcond::testing::ScriptedSink;
using roadcond::testing::SlowConstantBackend;
using roadcond::testing::TempDir;

namespace {

const Timestamp kT0 = parse_iso8601("2026-01-15T12:00:00Z");

LabelRecord rec(std::string id, Timestamp t, RoadCondition label = RoadCondition::Dry) {
  return {std::move(id), t, label, 0.875, 45.25, -75.5};
}

std::vector<LabelRecord> records(std::size_t n, Timestamp t = kT0) {
  std::vector<LabelRecord> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(rec(fmt::format("cam-{:04}", i), t + std::chrono::seconds(i)));
  return out;
}

std::size_t count_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty();
  return n;
}

BackoffPolicy fast_backoff() { return {1ms, 4ms, 8}; }

void add_scene_cameras(MockCameraServer& server, int n, std::chrono::milliseconds delay = 0ms) {
  for (int i = 0; i < n; ++i) {
    server.set_camera(MockCamera{fmt::format("c{}", i), delay, 200,
                                 testing::scene_jpeg(RoadCondition::Dry, 64, 48, static_cast<std::uint64_t>(i)),
                                 "image/jpeg", false});
  }
}

PipelineConfig base_config(const MockCameraServer& server, const TempDir& dir,
                           std::shared_ptr<const classifier::Backend> backend) {
  PipelineConfig cfg;
  cfg.cameras = server.catalogue();
  cfg.poll_interval = 50ms;
  cfg.workers = 4;
  cfg.batch_size = 4;
  cfg.backend = std::move(backend);
  cfg.output_dir = dir.path();
  cfg.linger = 100ms;
  cfg.max_cycles = 1;
  cfg.fetch.timeout = 5000ms;
  cfg.backoff = fast_backoff();
  cfg.submit_poll = 20ms;
  return cfg;
}

}  // namespace

TEST_CASE("record rows") {
  const auto r = rec("on-2201", kT0, RoadCondition::Snow);
  CHECK(image_name(r) == "on-2201_20260115T120000Z");
  const auto row = format_record_row(r);
  const auto fields = csv::split_line(row);
  REQUIRE(fields);
  CHECK(fields->size() == 6);
  CHECK(parse_record_row(row) == r);
  CHECK(record_file_name(kT0) == "labels-20260115.csv");
  CHECK_THROWS_AS(parse_record_row("x,1,2"), Error);
  CHECK_THROWS_AS(parse_record_row("cam_20260115T120000Z,45,-75,Hail,0.5,2026-01-15T12:00:00Z"), Error);
  CHECK_THROWS_AS(parse_record_row("cam_20260115T120001Z,45,-75,Dry,0.5,2026-01-15T12:00:00Z"), Error);
}

TEST_CASE("record store append and restart") {
  TempDir dir;
  {
    RecordStore store(dir.path());
    store.append(rec("a", kT0));
    const auto file = dir / "labels-20260115.csv";
    REQUIRE(std::filesystem::exists(file));
    std::ifstream in(file);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == kRecordHeader);
    CHECK(csv::split_line(row)->size() == 6);
  }
  RecordStore reopened(dir.path());
  reopened.append(rec("b", kT0 + 24h));
  const auto all = reopened.read_all();
  REQUIRE(all.size() == 2);
  CHECK(all[0].camera_id == "a");
  CHECK(reopened.files().size() == 2);
  CHECK(load_records(dir.path()).size() == 2);
  CHECK(reopened.read_file("labels-20260116.csv").size() == 1);
  CHECK(reopened.read_file("labels-19990101.csv").empty());
}

TEST_CASE("1000 appends from 4 threads") {
  TempDir dir;
  RecordStore store(dir.path());
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 250; ++i) {
        store.append(rec(fmt::format("t{}-cam{:03}", t, i), kT0 + std::chrono::seconds(i)));
      }
    });
  }
  for (auto& t : threads) t.join();
  const auto file = dir / "labels-20260115.csv";
  CHECK(count_lines(file) == 1001);
  const auto rows = read_record_file(file);
  CHECK(rows.size() == 1000);
  std::set<std::string> ids;
  for (const auto& r : rows) ids.insert(r.camera_id);
  CHECK(ids.size() == 1000);
}

TEST_CASE("disk full leaves nothing behind") {
  TempDir dir;
  RecordStore store(dir.path());
  store.append(rec("first", kT0));
  int calls = 0;
  store.set_fault_injector([&] { return ++calls == 1 ? ENOSPC : 0; });
  CHECK_THROWS_AS(store.append(records(5)), DiskFullError);
  CHECK(store.read_all().size() == 1);
  store.append(records(5));
  CHECK(store.read_all().size() == 6);
  store.set_fault_injector([] { return EIO; });
  CHECK_THROWS_AS(store.append(rec("x", kT0)), Error);
  CHECK(store.read_all().size() == 6);
}

TEST_CASE("bounded queue") {
  BoundedQueue<int> q(2);
  CHECK(q.push(1));
  CHECK(q.push(2));
  std::thread producer([&] { q.push(3); });
  std::this_thread::sleep_for(20ms);
  CHECK(q.size() == 2);
  CHECK(q.pop() == 1);
  producer.join();
  CHECK(q.pop_until(std::chrono::steady_clock::now() + 10ms) == 2);
  CHECK(q.pop() == 3);
  CHECK_FALSE(q.pop_until(std::chrono::steady_clock::now() + 10ms));
  q.close();
  CHECK_FALSE(q.push(4));
  CHECK_FALSE(q.pop());
  CHECK(q.closed_and_empty());
}

TEST_CASE("backoff policy") {
  const BackoffPolicy p;
  CHECK(p.delay_after(1) == 1000ms);
  CHECK(p.delay_after(2) == 2000ms);
  CHECK(p.delay_after(6) == 32000ms);
  CHECK(p.delay_after(7) == 60000ms);
  CHECK(p.delay_after(30) == 60000ms);
  CHECK(p.max_attempts == 8);
  CHECK_THROWS_AS((BackoffPolicy{0ms, 10ms, 8}.validate()), Error);
  CHECK_THROWS_AS((BackoffPolicy{10ms, 10ms, 0}.validate()), Error);
}

TEST_CASE("submit_records retries then acknowledges") {
  ScriptedSink sink(2);
  SubmissionBatch batch{"f", 0, records(3)};
  const auto policy = fast_backoff();
  int rounds = 0;
  SubmitOutcome outcome;
  do {
    outcome = submit_records(sink, batch, policy);
    ++rounds;
  } while (outcome.status == SubmitStatus::RetryScheduled);
  CHECK(outcome.status == SubmitStatus::Acknowledged);
  CHECK(sink.attempts() == 3);
  CHECK(rounds == 3);
  CHECK(sink.accepted_records() == 3);
}

TEST_CASE("submit_records dead-letters after max attempts") {
  ScriptedSink sink;
  sink.fail_forever();
  SubmissionBatch batch{"f", 0, records(2)};
  const auto policy = fast_backoff();
  SubmitOutcome outcome;
  auto last_retry = batch.next_retry_at;
  do {
    outcome = submit_records(sink, batch, policy);
    if (outcome.status == SubmitStatus::RetryScheduled) {
      CHECK(batch.next_retry_at > last_retry);
      last_retry = batch.next_retry_at;
    }
  } while (outcome.status == SubmitStatus::RetryScheduled);
  CHECK(outcome.status == SubmitStatus::DeadLettered);
  CHECK(sink.attempts() == 8);
  CHECK_FALSE(outcome.error.empty());
}

TEST_CASE("submitter watermark and restart") {
  TempDir dir;
  RecordStore store(dir.path());
  store.append(records(40));
  auto sink = std::make_shared<ScriptedSink>();
  SubmitterOptions opts;
  opts.backoff = fast_backoff();
  {
    Submitter submitter(store, sink, opts);
    CHECK(submitter.pending_records() == 40);
    submitter.drain();
    CHECK(submitter.watermark().total() == 40);
    CHECK(submitter.watermark().submitted == 40);
    CHECK(submitter.pending_records() == 0);
    CHECK(submitter.stats().batches_acknowledged == 3);
  }
  CHECK(sink->accepted_records() == 40);
  store.append(records(5, kT0 + 1h));
  Submitter again(store, sink, opts);
  CHECK(again.pending_records() == 5);
  again.drain();
  CHECK(sink->accepted_records() == 45);
  CHECK(load_watermark(dir / "submission-watermark.json").total() == 45);
}

TEST_CASE("submitter dead letters and replay") {
  TempDir dir;
  RecordStore store(dir.path());
  store.append(records(10));
  auto failing = std::make_shared<ScriptedSink>();
  failing->fail_forever();
  SubmitterOptions opts;
  opts.backoff = fast_backoff();
  opts.batch_size = 4;
  Submitter submitter(store, failing, opts);
  submitter.drain();
  CHECK(submitter.stats().batches_dead_lettered == 3);
  CHECK(submitter.watermark().dead_lettered == 10);
  CHECK(submitter.pending_records() == 0);
  CHECK(failing->attempts() == 24);
  const auto dead = dir / "dead-letter.jsonl";
  CHECK(count_lines(dead) == 3);

  ScriptedSink good;
  const auto result = replay_dead_letters(dead, good);
  CHECK(result.replayed_batches == 3);
  CHECK(result.replayed_records == 10);
  CHECK(result.remaining_batches == 0);
  CHECK(good.accepted_records() == 10);
}

TEST_CASE("background submitter follows notify") {
  TempDir dir;
  RecordStore store(dir.path());
  auto sink = std::make_shared<ScriptedSink>(1);
  SubmitterOptions opts;
  opts.backoff = fast_backoff();
  opts.poll_interval = 5000ms;
  Submitter submitter(store, sink, opts);
  submitter.start();
  store.append(records(7));
  submitter.notify();
  for (int i = 0; i < 200 && sink->accepted_records() < 7; ++i) std::this_thread::sleep_for(10ms);
  submitter.stop();
  CHECK(sink->accepted_records() == 7);
  CHECK(sink->attempts() == 2);
}

TEST_CASE("sqlite sink upserts") {
  TempDir dir;
  SqliteSink sink(dir / "labels.db");
  auto batch = records(5);
  sink.submit(batch);
  sink.submit(batch);
  CHECK(sink.row_count() == 5);
  batch[0].label = RoadCondition::Snow;
  sink.submit(std::span(batch).first(1));
  CHECK(sink.row_count() == 5);
  const auto rows = sink.rows();
  CHECK(rows[0].label == RoadCondition::Snow);
  CHECK(rows[1] == batch[1]);
}

TEST_CASE("sink urls") {
  TempDir dir;
  CHECK(open_sink("sqlite:" + (dir / "a.db").string()) != nullptr);
  CHECK(open_sink("sqlite://" + (dir / "b.db").string()) != nullptr);
  CHECK(open_sink((dir / "c.sqlite3").string()) != nullptr);
  try {
    open_sink("postgres://user@localhost/roads");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("sqlite") != std::string::npos);
  }
  CHECK_THROWS_AS(open_sink("mysql://x"), Error);
}

TEST_CASE("classification overlaps acquisition") {
  MockCameraServer server;
  add_scene_cameras(server, 6);
  server.set_camera(MockCamera{"c5", 800ms, 200, testing::scene_jpeg(RoadCondition::Dry, 64, 48, 5), "image/jpeg", false});
  TempDir dir;
  auto backend = std::make_shared<SlowConstantBackend>(RoadCondition::Wet, classifier::InputDims{16, 16}, 20ms);
  auto cfg = base_config(server, dir, backend);
  cfg.workers = 6;
  Pipeline pipeline(cfg);
  pipeline.wait();

  CHECK(pipeline.store().read_all().size() == 6);
  std::optional<std::chrono::steady_clock::time_point> first_classify, last_c5_fetch;
  for (const auto& e : pipeline.events()) {
    if (e.kind == EventKind::ClassifyStart && !first_classify) first_classify = e.at;
    if (e.kind == EventKind::AcquireEnd && e.subject == "c5") last_c5_fetch = e.at;
  }
  REQUIRE(first_classify);
  REQUIRE(last_c5_fetch);
  CHECK(*first_classify < *last_c5_fetch);
  CHECK(backend->max_concurrent() == 1);
  CHECK(std::filesystem::exists(pipeline.images_dir()));
}

TEST_CASE("one corrupt snapshot is counted and dropped") {
  MockCameraServer server;
  add_scene_cameras(server, 5);
  server.set_camera(MockCamera{"c3", 0ms, 200, {'j', 'u', 'n', 'k'}, "image/jpeg", false});
  TempDir dir;
  Pipeline pipeline(base_config(server, dir, std::make_shared<SlowConstantBackend>(RoadCondition::Dry,
                                                                                   classifier::InputDims{16, 16}, 0ms)));
  pipeline.wait();
  const auto c = pipeline.counters();
  CHECK(c.corrupt == 1);
  CHECK(c.decoded == 4);
  CHECK(pipeline.store().read_all().size() == 4);
}

TEST_CASE("fetch failures never stop the pipeline") {
  MockCameraServer server;
  add_scene_cameras(server, 4);
  server.set_camera(MockCamera{"c1", 0ms, 503, {}, "text/plain", false});
  TempDir dir;
  auto cfg = base_config(server, dir, std::make_shared<SlowConstantBackend>(RoadCondition::Dry,
                                                                            classifier::InputDims{16, 16}, 0ms));
  cfg.max_cycles = 2;
  Pipeline pipeline(cfg);
  pipeline.wait();
  CHECK(pipeline.counters().fetch_failures == 2);
  CHECK(pipeline.store().read_all().size() == 6);
}

TEST_CASE("stop mid-cycle loses no classified record") {
  MockCameraServer server;
  add_scene_cameras(server, 20, 60ms);
  TempDir dir;
  auto cfg = base_config(server, dir, std::make_shared<SlowConstantBackend>(RoadCondition::Dry,
                                                                            classifier::InputDims{16, 16}, 30ms));
  cfg.max_cycles.reset();
  cfg.workers = 2;
  Pipeline pipeline(cfg);
  std::this_thread::sleep_for(300ms);
  pipeline.stop();
  const auto c = pipeline.counters();
  CHECK(c.classified > 0);
  CHECK(c.classified < 20);
  CHECK(pipeline.store().read_all().size() == c.classified);
  CHECK(c.appended == c.classified);
  CHECK(c.decoded == c.fetched);
}

TEST_CASE("stalled sink does not block acquisition, then catches up") {
  MockCameraServer server;
  add_scene_cameras(server, 12);
  TempDir dir;
  auto sink = std::make_shared<ScriptedSink>(0, true);
  auto cfg = base_config(server, dir, std::make_shared<SlowConstantBackend>(RoadCondition::Snow,
                                                                            classifier::InputDims{16, 16}, 0ms));
  cfg.sink = sink;
  Pipeline pipeline(cfg);
  pipeline.wait();
  CHECK(pipeline.store().read_all().size() == 12);
  CHECK(sink->accepted_records() == 0);
  sink->release();
  for (int i = 0; i < 300 && sink->accepted_records() < 12; ++i) std::this_thread::sleep_for(10ms);
  pipeline.stop();
  const auto c = pipeline.counters();
  CHECK(sink->accepted_records() == 12);
  const auto wm = pipeline.submitter()->watermark();
  CHECK(c.classified == 12);
  CHECK(c.classified == wm.submitted + pipeline.submitter()->pending_records() + wm.dead_lettered);
}

TEST_CASE("pipeline configuration errors") {
  TempDir dir;
  PipelineConfig cfg;
  cfg.output_dir = dir.path();
  cfg.backend_spec = (dir / "missing.rwb1").string();
  cfg.cameras = {{"a", "http://127.0.0.1:1/x", 0, 0, {}}};
  CHECK_THROWS_AS(Pipeline{cfg}, Error);
  cfg.backend = std::make_shared<SlowConstantBackend>(RoadCondition::Dry, classifier::InputDims{8, 8}, 0ms);
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.batch_size = 4;
  cfg.workers = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
