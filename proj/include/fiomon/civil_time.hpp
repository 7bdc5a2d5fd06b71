#pragma once

// UTC instants and calendar dates in the two textual forms the tool accepts:
//   instant  YYYY-MM-DDTHH:MM:SSZ
//   date     YYYY-MM-DD

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace fiomon {

using Instant = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

namespace detail {

inline bool parse_digits(std::string_view s, std::size_t pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    const char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

inline std::optional<Date> parse_date_prefix(std::string_view s) {
  int y = 0, m = 0, d = 0;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!parse_digits(s, 0, 4, y) || !parse_digits(s, 5, 2, m) || !parse_digits(s, 8, 2, d)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

}  // namespace detail

inline std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10) return std::nullopt;
  return detail::parse_date_prefix(s);
}

// Only the exact 20-character form is accepted; no offsets, no fractional seconds.
inline std::optional<Instant> parse_instant(std::string_view s) {
  if (s.size() != 20 || s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z') {
    return std::nullopt;
  }
  const auto date = detail::parse_date_prefix(s.substr(0, 10));
  if (!date) return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (!detail::parse_digits(s, 11, 2, hh) || !detail::parse_digits(s, 14, 2, mm) ||
      !detail::parse_digits(s, 17, 2, ss)) {
    return std::nullopt;
  }
  if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
  return Instant{*date} + std::chrono::hours{hh} + std::chrono::minutes{mm} +
         std::chrono::seconds{ss};
}

inline std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

inline std::string format_instant(Instant t) {
  const Date d = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::hh_mm_ss hms{t - d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()));
  return format_date(d) + buf;
}

inline Date date_of(Instant t) { return std::chrono::floor<std::chrono::days>(t); }

inline Instant start_of(Date d) { return Instant{d}; }

}  // namespace fiomon
