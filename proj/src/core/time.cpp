// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/core/time.hpp"

#include <charconv>

#include <fmt/format.h>

#include "roadcond/core/error.hpp"

namespace roadcond {
namespace {

using namespace std::chrono;

struct Civil {
  int year;
  unsigned month, day;
  long hour, minute, second;
};

Civil to_civil(Timestamp t) {
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss<seconds> tod{t - day};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
          static_cast<unsigned>(ymd.day()), tod.hours().count(),
          tod.minutes().count(), static_cast<long>(tod.seconds().count())};
}

Timestamp from_civil(const Civil& c, std::string_view original) {
  const year_month_day ymd{year{c.year}, month{c.month}, day{c.day}};
  if (!ymd.ok() || c.hour > 23 || c.minute > 59 || c.second > 60) {
    throw Error(fmt::format("invalid timestamp '{}'", original));
  }
  return sys_days{ymd} + hours{c.hour} + minutes{c.minute} + seconds{c.second};
}

template <typename T>
bool read_fixed(std::string_view text, std::size_t pos, std::size_t width, T& out) {
  if (pos + width > text.size()) return false;
  const char* first = text.data() + pos;
  const char* last = first + width;
  for (const char* p = first; p != last; ++p) {
    if (*p < '0' || *p > '9') return false;
  }
  return std::from_chars(first, last, out).ec == std::errc{};
}

}  // namespace

Timestamp now_utc() { return floor<seconds>(system_clock::now()); }

std::string format_iso8601(Timestamp t) {
  const Civil c = to_civil(t);
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", c.year, c.month, c.day,
                     c.hour, c.minute, c.second);
}

std::string format_compact(Timestamp t) {
  const Civil c = to_civil(t);
  return fmt::format("{:04d}{:02d}{:02d}T{:02d}{:02d}{:02d}Z", c.year, c.month, c.day, c.hour,
                     c.minute, c.second);
}

std::string format_day(Timestamp t) {
  const Civil c = to_civil(t);
  return fmt::format("{:04d}{:02d}{:02d}", c.year, c.month, c.day);
}

Timestamp parse_iso8601(std::string_view text) {
  Civil c{};
  const bool ok = read_fixed(text, 0, 4, c.year) && text.size() >= 19 && text[4] == '-' &&
                  read_fixed(text, 5, 2, c.month) && text[7] == '-' &&
                  read_fixed(text, 8, 2, c.day) && (text[10] == 'T' || text[10] == ' ') &&
                  read_fixed(text, 11, 2, c.hour) && text[13] == ':' &&
                  read_fixed(text, 14, 2, c.minute) && text[16] == ':' &&
                  read_fixed(text, 17, 2, c.second);
  if (!ok) throw Error(fmt::format("invalid timestamp '{}'", text));
  const std::string_view rest = text.substr(19);
  if (!(rest.empty() || rest == "Z" || rest == "+00:00" || rest == "+0000")) {
    throw Error(fmt::format("timestamp '{}' is not UTC", text));
  }
  return from_civil(c, text);
}

Timestamp parse_compact(std::string_view text) {
  Civil c{};
  const bool ok = text.size() == 16 && read_fixed(text, 0, 4, c.year) &&
                  read_fixed(text, 4, 2, c.month) && read_fixed(text, 6, 2, c.day) &&
                  text[8] == 'T' && read_fixed(text, 9, 2, c.hour) &&
                  read_fixed(text, 11, 2, c.minute) && read_fixed(text, 13, 2, c.second) &&
                  text[15] == 'Z';
  if (!ok) throw Error(fmt::format("invalid compact timestamp '{}'", text));
  return from_civil(c, text);
}

}  // namespace roadcond
