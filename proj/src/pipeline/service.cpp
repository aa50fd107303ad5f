// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/pipeline/service.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <mutex>
#include <sstream>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "roadcond/core/csv.hpp"
#include "roadcond/dataset/review.hpp"
#include "roadcond/imaging/codec.hpp"
#include "roadcond/mapgen/emit.hpp"

namespace roadcond::pipeline {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJson);
}

void fail(httplib::Response& res, int status, std::string message) {
  reply(res, status, json{{"error", std::move(message)}});
}

/// Thrown by parameter parsing; becomes a 400.
struct BadRequest : Error {
  using Error::Error;
};

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

std::size_t positive_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  const auto text = param(req, name);
  if (!text) return fallback;
  std::size_t value = 0;
  const auto [p, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc{} || p != text->data() + text->size() || value == 0) {
    throw BadRequest(fmt::format("{} must be a positive integer", name));
  }
  return value;
}

std::uint64_t seed_param(const httplib::Request& req) {
  const auto text = param(req, "seed");
  if (!text) return 0;
  std::uint64_t value = 0;
  const auto [p, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc{} || p != text->data() + text->size()) throw BadRequest("seed must be an unsigned integer");
  return value;
}

double double_param(const httplib::Request& req, const char* name, double fallback) {
  const auto text = param(req, name);
  if (!text) return fallback;
  const auto value = csv::parse_double(*text);
  if (!value) throw BadRequest(fmt::format("{} must be a number", name));
  return *value;
}

std::set<RoadCondition> class_list_param(const httplib::Request& req, const char* name) {
  std::set<RoadCondition> out;
  const auto text = param(req, name);
  if (!text || text->empty()) return out;
  const auto parts = csv::split_line(*text);
  for (const auto& part : parts.value_or(std::vector<std::string>{})) {
    const auto c = parse_road_condition(csv::trim(part));
    if (!c) throw BadRequest(fmt::format("{}: unknown class '{}'", name, part));
    out.insert(*c);
  }
  return out;
}

json record_json(const LabelRecord& r) {
  return {{"image_name", image_name(r)},
          {"camera_id", r.camera_id},
          {"latitude", r.latitude},
          {"longitude", r.longitude},
          {"class", std::string(to_string(r.label))},
          {"confidence", r.confidence},
          {"timestamp", format_iso8601(r.timestamp)}};
}

json counts_json(const std::map<RoadCondition, std::size_t>& counts) {
  json out = json::object();
  for (const auto& [c, n] : counts) out[std::string(to_string(c))] = n;
  return out;
}

std::string url_encode(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == '/') {
      out.push_back(static_cast<char>(c));
    } else {
      out += fmt::format("%{:02X}", c);
    }
  }
  return out;
}

/// Resolves an /images/ id inside `root`; empty when it would escape it.
std::optional<std::filesystem::path> resolve_image(const std::filesystem::path& root, const std::string& id) {
  const std::filesystem::path rel(id);
  if (id.empty() || rel.is_absolute()) return std::nullopt;
  for (const auto& part : rel) {
    if (part == "..") return std::nullopt;
  }
  const auto path = root / rel;
  if (std::filesystem::is_regular_file(path)) return path;
  if (!rel.has_extension()) {
    for (const char* ext : {".jpg", ".png", ".jpeg"}) {
      auto candidate = path;
      candidate += ext;
      if (std::filesystem::is_regular_file(candidate)) return candidate;
    }
  }
  return std::nullopt;
}

}  // namespace

Service::Service(ServiceConfig config, const Pipeline* pipeline)
    : config_(std::move(config)), pipeline_(pipeline), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

Service::~Service() { stop(); }

std::vector<LabelRecord> Service::records() const {
  if (pipeline_) return pipeline_->store().read_all();
  return load_records(config_.records_dir);
}

void Service::install_routes() {
  auto& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const BadRequest& e) {
      fail(res, 400, e.what());
    } catch (const std::exception& e) {
      spdlog::error("request failed: {}", e.what());
      fail(res, 500, e.what());
    }
  });
  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.body.empty()) fail(res, res.status, fmt::format("{} {}: {}", req.method, req.path, httplib::status_message(res.status)));
  });

  s.Get("/api/records", [this](const httplib::Request& req, httplib::Response& res) {
    const std::size_t limit = positive_param(req, "limit", config_.default_limit);
    auto all = records();
    std::stable_sort(all.begin(), all.end(),
                     [](const LabelRecord& a, const LabelRecord& b) { return a.timestamp > b.timestamp; });
    // stable_sort keeps file order within a timestamp; newest-appended first.
    json out = json::array();
    for (std::size_t i = 0; i < std::min(limit, all.size()); ++i) out.push_back(record_json(all[i]));
    reply(res, 200, out);
  });

  s.Get("/api/map.geojson", [this](const httplib::Request& req, httplib::Response& res) {
    mapgen::LayerOptions opts = config_.map;
    if (const auto region = param(req, "region")) {
      try {
        opts.region = mapgen::parse_bbox(*region);
      } catch (const Error& e) {
        throw BadRequest(e.what());
      }
    }
    if (param(req, "stale_after")) opts.stale_after = std::chrono::seconds(positive_param(req, "stale_after", 1));
    if (param(req, "hide")) opts.hidden = class_list_param(req, "hide");
    const auto all = records();
    const auto layer = mapgen::build_layer(all, opts, now_utc());
    res.set_content(mapgen::emit_geojson(layer), "application/geo+json");
  });

  s.Get("/api/queue", [this](const httplib::Request& req, httplib::Response& res) {
    std::shared_lock lock(state_mu_);
    if (config_.run_path.empty() || !std::filesystem::exists(config_.run_path)) {
      fail(res, 404, "no pending pseudo-label run");
      return;
    }
    const auto run = dataset::load_run(config_.run_path);
    dataset::QueueFilter filter;
    filter.classes = class_list_param(req, "class");
    filter.min_confidence = double_param(req, "min_confidence", 0.0);
    filter.max_confidence = double_param(req, "max_confidence", 1.0);
    if (param(req, "sample")) {
      if (!param(req, "seed")) throw BadRequest("sample needs a seed");
      filter.sample_size = positive_param(req, "sample", 1);
    }
    filter.seed = seed_param(req);
    filter.exclude = dataset::load_exclusions(config_.exclusions_path);
    if (std::filesystem::exists(config_.manifest_path)) {
      for (const auto& sample : dataset::load_manifest(config_.manifest_path, config_.scheme).samples) {
        filter.exclude.insert(sample.image_ref);
      }
    }
    std::vector<dataset::PseudoLabel> queue;
    try {
      queue = dataset::build_review_queue(run, filter);
    } catch (const Error& e) {
      throw BadRequest(e.what());
    }
    const std::size_t limit = positive_param(req, "limit", queue.size() ? queue.size() : 1);
    json items = json::array();
    for (std::size_t i = 0; i < std::min(limit, queue.size()); ++i) {
      const auto& q = queue[i];
      items.push_back({{"image_ref", q.image_ref},
                       {"image_url", "/images/" + url_encode(q.image_ref)},
                       {"pseudo_label", std::string(to_string(q.label))},
                       {"confidence", q.confidence},
                       {"phase", config_.phase}});
    }
    reply(res, 200, json{{"backend", run.backend}, {"total", queue.size()}, {"items", std::move(items)}});
  });

  s.Post("/api/verdicts", [this](const httplib::Request& req, httplib::Response& res) {
    std::vector<dataset::ReviewVerdict> verdicts;
    try {
      verdicts = dataset::parse_verdicts(req.body);
    } catch (const dataset::VerdictFormatError& e) {
      reply(res, 400, json{{"error", "invalid verdict batch"}, {"diagnostics", e.diagnostics()}});
      return;
    }
    std::unique_lock lock(state_mu_);
    if (config_.run_path.empty() || !std::filesystem::exists(config_.run_path)) {
      fail(res, 404, "no pending pseudo-label run");
      return;
    }
    const auto run = dataset::load_run(config_.run_path);
    dataset::DatasetManifest manifest{config_.scheme, {}};
    if (std::filesystem::exists(config_.manifest_path)) {
      manifest = dataset::load_manifest(config_.manifest_path, config_.scheme);
    }
    dataset::VerdictOutcome outcome;
    try {
      outcome = dataset::apply_verdicts(std::move(manifest), run, verdicts, config_.phase);
    } catch (const Error& e) {
      fail(res, 422, e.what());
      return;
    }
    dataset::save_manifest(outcome.manifest, config_.manifest_path);
    dataset::append_exclusions(config_.exclusions_path, outcome.excluded);
    reply(res, 200,
          json{{"accepted", verdicts.size()},
               {"added", outcome.added},
               {"updated", outcome.updated},
               {"removed", outcome.removed},
               {"excluded", outcome.excluded.size()},
               {"counts", counts_json(outcome.manifest.class_counts())}});
  });

  s.Post("/api/judgment", [this](const httplib::Request& req, httplib::Response& res) {
    std::vector<dataset::ReviewVerdict> verdicts;
    try {
      verdicts = dataset::parse_verdicts(req.body);
    } catch (const dataset::VerdictFormatError& e) {
      reply(res, 400, json{{"error", "invalid verdict batch"}, {"diagnostics", e.diagnostics()}});
      return;
    }
    std::shared_lock lock(state_mu_);
    if (config_.run_path.empty() || !std::filesystem::exists(config_.run_path)) {
      fail(res, 404, "no pending pseudo-label run");
      return;
    }
    const auto run = dataset::load_run(config_.run_path);
    try {
      res.set_content(dataset::judgment_json(dataset::judgment_summary(run, verdicts)), kJson);
    } catch (const Error& e) {
      fail(res, 422, e.what());
    }
  });

  s.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
    json out;
    {
      std::shared_lock lock(state_mu_);
      dataset::DatasetManifest manifest{config_.scheme, {}};
      if (std::filesystem::exists(config_.manifest_path)) {
        manifest = dataset::load_manifest(config_.manifest_path, config_.scheme);
      }
      out["manifest"] = counts_json(manifest.class_counts());
    }
    std::map<RoadCondition, std::size_t> by_class;
    const auto all = records();
    for (const auto& r : all) ++by_class[r.label];
    out["records"] = counts_json(by_class);
    out["record_total"] = all.size();
    if (pipeline_) {
      const auto c = pipeline_->counters();
      out["stages"] = {{"fetched", c.fetched},       {"fetch_failures", c.fetch_failures},
                       {"corrupt", c.corrupt},       {"decoded", c.decoded},
                       {"batches", c.batches},       {"classified", c.classified},
                       {"classify_failures", c.classify_failures},
                       {"appended", c.appended},     {"disk_full_retries", c.disk_full_retries},
                       {"submitted", c.submitted},   {"dead_lettered", c.dead_lettered}};
    } else {
      out["stages"] = nullptr;
    }
    reply(res, 200, out);
  });

  s.Get(R"(/images/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto path = resolve_image(config_.images_dir, req.matches[1].str());
    if (!path) {
      fail(res, 404, fmt::format("no image '{}'", req.matches[1].str()));
      return;
    }
    std::ifstream in(*path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto format = imaging::sniff_format(
        std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
    const auto type = format == imaging::ImageFormat::Unknown ? std::string_view("application/octet-stream")
                                                              : imaging::content_type(format);
    res.set_content(std::move(bytes), std::string(type));
  });
}

int Service::start(const std::string& host, int port) {
  port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (port_ <= 0) throw Error(fmt::format("cannot bind {}:{}", host, port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void Service::serve(const std::string& host, int port) {
  port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (port_ <= 0) throw Error(fmt::format("cannot bind {}:{}", host, port));
  spdlog::info("serving on http://{}:{}", host, port_);
  server_->listen_after_bind();
}

void Service::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace roadcond::pipeline
