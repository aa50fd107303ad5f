// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/pipeline/sinks.hpp"

#include <sqlite3.h>

#include <fmt/format.h>

#include "roadcond/core/error.hpp"

namespace roadcond::pipeline {

CallbackSink::CallbackSink(Callback callback, std::string name)
    : callback_(std::move(callback)), name_(std::move(name)) {
  if (!callback_) throw Error("callback sink needs a callback");
}

namespace {

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw Error(fmt::format("sqlite prepare failed: {}", sqlite3_errmsg(db)));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  sqlite3_stmt* get() const { return stmt_; }
  void check(int rc) const {
    if (rc != SQLITE_OK && rc != SQLITE_DONE && rc != SQLITE_ROW) {
      throw Error(fmt::format("sqlite: {}", sqlite3_errmsg(db_)));
    }
  }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

}  // namespace

SqliteSink::SqliteSink(const std::filesystem::path& path) : path_(path) {
  if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                      nullptr) != SQLITE_OK) {
    const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw Error(fmt::format("cannot open sqlite database '{}': {}", path.string(), msg));
  }
  sqlite3_busy_timeout(db_, 5000);
  exec(
      "CREATE TABLE IF NOT EXISTS label_records ("
      " camera_id TEXT NOT NULL,"
      " ts TEXT NOT NULL,"
      " class TEXT NOT NULL,"
      " confidence REAL NOT NULL,"
      " lat REAL NOT NULL,"
      " lon REAL NOT NULL,"
      " PRIMARY KEY (camera_id, ts))");
}

SqliteSink::~SqliteSink() { sqlite3_close(db_); }

std::string SqliteSink::name() const { return fmt::format("sqlite:{}", path_.string()); }

void SqliteSink::exec(const char* sql) const {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    const std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw Error(fmt::format("sqlite: {}", msg));
  }
}

void SqliteSink::submit(std::span<const LabelRecord> records) {
  std::lock_guard lock(mu_);
  exec("BEGIN IMMEDIATE");
  try {
    Statement stmt(db_,
                   "INSERT INTO label_records (camera_id, ts, class, confidence, lat, lon)"
                   " VALUES (?1, ?2, ?3, ?4, ?5, ?6)"
                   " ON CONFLICT (camera_id, ts) DO UPDATE SET"
                   " class = excluded.class, confidence = excluded.confidence,"
                   " lat = excluded.lat, lon = excluded.lon");
    for (const auto& r : records) {
      const std::string ts = format_iso8601(r.timestamp);
      const std::string_view cls = to_string(r.label);
      sqlite3_reset(stmt.get());
      sqlite3_bind_text(stmt.get(), 1, r.camera_id.c_str(), static_cast<int>(r.camera_id.size()), SQLITE_TRANSIENT);
      sqlite3_bind_text(stmt.get(), 2, ts.c_str(), static_cast<int>(ts.size()), SQLITE_TRANSIENT);
      sqlite3_bind_text(stmt.get(), 3, cls.data(), static_cast<int>(cls.size()), SQLITE_TRANSIENT);
      sqlite3_bind_double(stmt.get(), 4, r.confidence);
      sqlite3_bind_double(stmt.get(), 5, r.latitude);
      sqlite3_bind_double(stmt.get(), 6, r.longitude);
      stmt.check(sqlite3_step(stmt.get()));
    }
  } catch (...) {
    sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
    throw;
  }
  exec("COMMIT");
}

std::size_t SqliteSink::row_count() const {
  std::lock_guard lock(mu_);
  Statement stmt(db_, "SELECT COUNT(*) FROM label_records");
  stmt.check(sqlite3_step(stmt.get()));
  return static_cast<std::size_t>(sqlite3_column_int64(stmt.get(), 0));
}

std::vector<LabelRecord> SqliteSink::rows() const {
  std::lock_guard lock(mu_);
  Statement stmt(db_, "SELECT camera_id, ts, class, confidence, lat, lon FROM label_records ORDER BY camera_id, ts");
  std::vector<LabelRecord> out;
  for (;;) {
    const int rc = sqlite3_step(stmt.get());
    if (rc == SQLITE_DONE) break;
    stmt.check(rc);
    const auto text = [&](int col) {
      return std::string(reinterpret_cast<const char*>(sqlite3_column_text(stmt.get(), col)));
    };
    LabelRecord r;
    r.camera_id = text(0);
    r.timestamp = parse_iso8601(text(1));
    const auto label = parse_road_condition(text(2));
    if (!label) throw Error(fmt::format("label_records holds unknown class '{}'", text(2)));
    r.label = *label;
    r.confidence = sqlite3_column_double(stmt.get(), 3);
    r.latitude = sqlite3_column_double(stmt.get(), 4);
    r.longitude = sqlite3_column_double(stmt.get(), 5);
    out.push_back(std::move(r));
  }
  return out;
}

std::unique_ptr<RecordSink> open_sink(std::string_view url) {
  if (url.starts_with("postgresql://") || url.starts_with("postgres://")) {
    throw Error("PostgreSQL sinks are not supported by this build; use a sqlite: URL");
  }
  if (url.starts_with("sqlite://")) return std::make_unique<SqliteSink>(std::string(url.substr(9)));
  if (url.starts_with("sqlite:")) return std::make_unique<SqliteSink>(std::string(url.substr(7)));
  if (url.ends_with(".db") || url.ends_with(".sqlite") || url.ends_with(".sqlite3")) {
    return std::make_unique<SqliteSink>(std::string(url));
  }
  throw Error(fmt::format("unrecognised database URL '{}'", url));
}

}  // namespace roadcond::pipeline
