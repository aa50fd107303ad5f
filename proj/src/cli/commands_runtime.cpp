// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <csignal>
#include <memory>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "commands.hpp"
#include "roadcond/cli/app.hpp"
#include "roadcond/core/error.hpp"
#include "roadcond/imaging/codec.hpp"
#include "roadcond/ingest/poller.hpp"
#include "roadcond/pipeline/pipeline.hpp"
#include "roadcond/pipeline/service.hpp"

namespace roadcond::cli {

namespace {

volatile std::sig_atomic_t g_interrupted = 0;

extern "C" void on_signal(int) { g_interrupted = 1; }

class SignalScope {
 public:
  SignalScope() {
    g_interrupted = 0;
    prev_int_ = std::signal(SIGINT, on_signal);
    prev_term_ = std::signal(SIGTERM, on_signal);
  }
  ~SignalScope() {
    std::signal(SIGINT, prev_int_);
    std::signal(SIGTERM, prev_term_);
  }
  bool interrupted() const { return g_interrupted != 0; }

 private:
  void (*prev_int_)(int) = SIG_DFL;
  void (*prev_term_)(int) = SIG_DFL;
};

std::chrono::milliseconds seconds_to_ms(double s) {
  return std::chrono::milliseconds(static_cast<std::int64_t>(s * 1000.0));
}

nlohmann::ordered_json counters_json(const pipeline::StageCounters& c) {
  return {{"fetched", c.fetched},       {"fetch_failures", c.fetch_failures},
          {"corrupt", c.corrupt},       {"decoded", c.decoded},
          {"batches", c.batches},       {"classified", c.classified},
          {"classify_failures", c.classify_failures},
          {"appended", c.appended},     {"disk_full_retries", c.disk_full_retries},
          {"submitted", c.submitted},   {"dead_lettered", c.dead_lettered}};
}

void add_run(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string catalogue, model, output_dir = "out", db_url, scheme = "five", host = "127.0.0.1";
    double interval = 60, linger = 2, timeout = 10;
    std::size_t workers = 4, batch = 16;
    std::optional<std::size_t> cycles;
    std::optional<int> port;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("run", "Poll cameras, classify snapshots and record labels continuously");
  sub->add_option("--catalogue", o->catalogue, "Camera catalogue CSV")->required()->check(CLI::ExistingFile);
  sub->add_option("--model", o->model, "RWB1 model file")->required()->check(CLI::ExistingFile);
  sub->add_option("--scheme", o->scheme, "Class scheme")->check(scheme_validator())->capture_default_str();
  sub->add_option("--output-dir", o->output_dir, "Record and snapshot directory")->capture_default_str();
  sub->add_option("--interval", o->interval, "Seconds between polling cycles")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--workers", o->workers, "Concurrent fetches")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--batch", o->batch, "Classification batch size")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--linger", o->linger, "Seconds a partial batch waits")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--timeout", o->timeout, "Per-fetch timeout in seconds")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--db-url", o->db_url, "Record sink, e.g. sqlite:labels.db")->envname("RW_DB_URL");
  sub->add_option("--cycles", o->cycles, "Stop after this many polling cycles");
  sub->add_option("--port", o->port, "Also serve the HTTP API on this port")->check(CLI::Range(0, 65535));
  sub->add_option("--host", o->host, "API bind address")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      pipeline::PipelineConfig cfg;
      cfg.catalogue_path = o->catalogue;
      cfg.backend_spec = o->model;
      cfg.scheme = to_scheme(o->scheme);
      cfg.output_dir = o->output_dir;
      cfg.poll_interval = seconds_to_ms(o->interval);
      cfg.workers = o->workers;
      cfg.batch_size = o->batch;
      cfg.linger = seconds_to_ms(o->linger);
      cfg.fetch.timeout = seconds_to_ms(o->timeout);
      cfg.max_cycles = o->cycles;
      if (!o->db_url.empty()) cfg.db_url = o->db_url;

      SignalScope signals;
      pipeline::Pipeline pipe(std::move(cfg));
      std::unique_ptr<pipeline::Service> service;
      if (o->port) {
        pipeline::ServiceConfig scfg;
        scfg.records_dir = o->output_dir;
        scfg.images_dir = pipe.images_dir();
        scfg.scheme = pipe.config().scheme;
        service = std::make_unique<pipeline::Service>(scfg, &pipe);
        const int port = service->start(o->host, *o->port);
        ctx.err << fmt::format("API on http://{}:{}\n", o->host, port);
      }

      std::atomic<bool> done{false};
      std::thread waiter([&] {
        pipe.wait();
        done = true;
      });
      while (!done && !signals.interrupted()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      pipe.stop();
      waiter.join();
      if (service) service->stop();

      const auto c = pipe.counters();
      if (ctx.json) {
        ctx.out << counters_json(c).dump(2) << '\n';
      } else {
        ctx.out << fmt::format("fetched {} (failed {}), corrupt {}, classified {}, appended {}, submitted {}\n",
                               c.fetched, c.fetch_failures, c.corrupt, c.classified, c.appended, c.submitted);
      }
      return kExitOk;
    };
  });
}

void add_fetch(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string catalogue, out;
    std::vector<std::string> cameras;
    double timeout = 10;
    std::size_t workers = 4;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("fetch", "Fetch one snapshot per camera into a directory");
  sub->add_option("--catalogue", o->catalogue, "Camera catalogue CSV")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o->out, "Output directory")->required();
  sub->add_option("--camera", o->cameras, "Only these camera ids");
  sub->add_option("--timeout", o->timeout, "Per-fetch timeout in seconds")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--workers", o->workers, "Concurrent fetches")->check(CLI::PositiveNumber)->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      auto cameras = ingest::load_catalogue(o->catalogue);
      if (!o->cameras.empty()) {
        std::erase_if(cameras, [&](const ingest::CameraRecord& c) {
          return std::find(o->cameras.begin(), o->cameras.end(), c.camera_id) == o->cameras.end();
        });
        if (cameras.empty()) throw Error("no catalogue camera matches --camera");
      }
      std::filesystem::create_directories(o->out);

      std::mutex mu;
      std::vector<nlohmann::ordered_json> rows;
      std::size_t ok = 0;
      ingest::PollerOptions popts;
      popts.workers = o->workers;
      popts.max_cycles = 1;
      popts.fetch.timeout = seconds_to_ms(o->timeout);
      auto poller = ingest::run_poller(cameras, popts, [&](ingest::FetchResult r) {
        nlohmann::ordered_json row{{"camera_id", ingest::camera_id_of(r)}};
        if (auto* snap = std::get_if<ingest::Snapshot>(&r)) {
          const auto format = imaging::sniff_format(snap->body);
          const auto name = fmt::format("{}_{}{}", snap->camera_id, format_compact(snap->fetched_at),
                                        format == imaging::ImageFormat::Unknown ? ".bin" : imaging::file_extension(format));
          const auto path = std::filesystem::path(o->out) / name;
          write_text(path, std::string(snap->body.begin(), snap->body.end()));
          row["status"] = "ok";
          row["bytes"] = snap->body.size();
          row["path"] = path.string();
        } else {
          const auto& f = std::get<ingest::FetchFailure>(r);
          row["status"] = std::string(ingest::to_string(f.kind));
          row["detail"] = f.detail;
        }
        std::lock_guard lock(mu);
        if (row["status"] == "ok") ++ok;
        rows.push_back(std::move(row));
        return true;
      });
      poller->wait();
      std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a["camera_id"] < b["camera_id"]; });
      if (ctx.json) {
        ctx.out << nlohmann::ordered_json(rows).dump(2) << '\n';
      } else {
        for (const auto& r : rows) {
          ctx.out << fmt::format("{}\t{}\t{}\n", r["camera_id"].get<std::string>(), r["status"].get<std::string>(),
                                 r.contains("path") ? r["path"].get<std::string>() : r["detail"].get<std::string>());
        }
      }
      return ok > 0 ? kExitOk : kExitDomainError;
    };
  });
}

void add_serve(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string host = "127.0.0.1", output_dir = "out", images, manifest = "manifest.jsonl", run,
                exclusions = "exclusions.jsonl", scheme = "five", phase = "review";
    int port = 8080;
    double stale_minutes = 60;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("serve", "Serve the review and map HTTP API");
  sub->add_option("--port", o->port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535))->capture_default_str();
  sub->add_option("--host", o->host, "Bind address")->capture_default_str();
  sub->add_option("--output-dir", o->output_dir, "Record directory")->capture_default_str();
  sub->add_option("--images", o->images, "Snapshot directory; defaults to OUTPUT_DIR/images");
  sub->add_option("--manifest", o->manifest, "Dataset manifest updated by verdicts")->capture_default_str();
  sub->add_option("--run", o->run, "Pending pseudo-label run behind the review queue");
  sub->add_option("--exclusions", o->exclusions, "Exclusion log")->capture_default_str();
  sub->add_option("--scheme", o->scheme, "Class scheme")->check(scheme_validator())->capture_default_str();
  sub->add_option("--phase", o->phase, "Phase tag for accepted samples")->capture_default_str();
  sub->add_option("--stale-after", o->stale_minutes, "Map staleness cutoff in minutes")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      pipeline::ServiceConfig cfg;
      cfg.records_dir = o->output_dir;
      cfg.images_dir = o->images.empty() ? std::filesystem::path(o->output_dir) / "images" : std::filesystem::path(o->images);
      cfg.manifest_path = o->manifest;
      cfg.run_path = o->run;
      cfg.exclusions_path = o->exclusions;
      cfg.scheme = to_scheme(o->scheme);
      cfg.phase = o->phase;
      cfg.map.stale_after = std::chrono::seconds(static_cast<std::int64_t>(o->stale_minutes * 60));
      SignalScope signals;
      pipeline::Service service(cfg);
      const int port = service.start(o->host, o->port);
      ctx.err << fmt::format("serving on http://{}:{}\n", o->host, port);
      while (!signals.interrupted()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      service.stop();
      return kExitOk;
    };
  });
}

}  // namespace

void add_runtime_commands(CLI::App& app, Context& ctx) {
  add_run(app, ctx);
  add_fetch(app, ctx);
  add_serve(app, ctx);
}

}  // namespace roadcond::cli
