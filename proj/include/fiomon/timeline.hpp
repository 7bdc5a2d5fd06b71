#pragma once

// Announcement timelines and the period / daily reports aligned to them.
//
// Period boundaries are the dates of announcement events (initial, updates and final) at
// 00:00:00 UTC. Period k covers [boundary_k, boundary_{k+1}); instants before the first
// boundary form the pre-period and the last period is open-ended unless a report window
// caps it. Recalls and the illness onset annotate the timeline but never split a period.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fiomon/civil_time.hpp"
#include "fiomon/corpus.hpp"
#include "fiomon/error.hpp"

namespace fiomon {

enum class EventKind { kIllnessOnset, kAnnouncement, kRecall, kFinalAnnouncement };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kIllnessOnset: return "illness_onset";
    case EventKind::kAnnouncement: return "announcement";
    case EventKind::kRecall: return "recall";
    case EventKind::kFinalAnnouncement: return "final_announcement";
  }
  return "unknown";
}

inline std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (const auto k : {EventKind::kIllnessOnset, EventKind::kAnnouncement, EventKind::kRecall,
                       EventKind::kFinalAnnouncement}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

inline bool is_boundary(EventKind k) {
  return k == EventKind::kAnnouncement || k == EventKind::kFinalAnnouncement;
}

struct EventRecord {
  Date date;
  EventKind kind;
  std::optional<long long> new_ill;
  std::optional<long long> cumulative_ill;
  std::optional<long long> states;
  std::string note;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

class EventTimeline {
 public:
  EventTimeline() = default;
  explicit EventTimeline(std::vector<EventRecord> events) : events_(std::move(events)) {
    for (std::size_t i = 0; i < events_.size(); ++i) {
      if (is_boundary(events_[i].kind)) boundary_events_.push_back(i);
    }
  }

  const std::vector<EventRecord>& events() const noexcept { return events_; }
  /// Indices into events() of the announcement events that start periods.
  const std::vector<std::size_t>& boundary_events() const noexcept { return boundary_events_; }
  std::size_t period_count() const noexcept { return boundary_events_.size(); }
  Date boundary_date(std::size_t period) const { return events_[boundary_events_.at(period)].date; }

  friend bool operator==(const EventTimeline& a, const EventTimeline& b) { return a.events_ == b.events_; }

 private:
  std::vector<EventRecord> events_;
  std::vector<std::size_t> boundary_events_;
};

namespace detail {

inline Date ymd(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

}  // namespace detail

/// The 2015 cucumber-linked Salmonella Poona outbreak: onset, ten announcements with
/// cumulative illness counts, and the two recalls.
inline EventTimeline builtin_cdc_timeline() {
  using detail::ymd;
  using K = EventKind;
  return EventTimeline({
      {ymd(2015, 7, 3), K::kIllnessOnset, {}, {}, {}, "illness onset (reported later)"},
      {ymd(2015, 9, 4), K::kAnnouncement, {}, 285, 27, "initial announcement"},
      {ymd(2015, 9, 4), K::kRecall, {}, {}, {}, "Andrew & Williamson Fresh Produce recall (Limited Edition brand)"},
      {ymd(2015, 9, 9), K::kAnnouncement, 56, 341, 30, "update"},
      {ymd(2015, 9, 11), K::kRecall, {}, {}, {}, "Custom Produce Sales recall (Fat Boy brand)"},
      {ymd(2015, 9, 15), K::kAnnouncement, 77, 418, 31, "update"},
      {ymd(2015, 9, 22), K::kAnnouncement, 140, 558, 33, "update"},
      {ymd(2015, 9, 29), K::kAnnouncement, 113, 671, 34, "update"},
      {ymd(2015, 10, 6), K::kAnnouncement, 61, 732, 35, "update"},
      {ymd(2015, 10, 14), K::kAnnouncement, 35, 767, 36, "update"},
      {ymd(2015, 11, 19), K::kAnnouncement, 71, 838, 38, "update"},
      {ymd(2016, 1, 26), K::kAnnouncement, 50, 888, 39, "update"},
      {ymd(2016, 3, 18), K::kFinalAnnouncement, 19, 907, 40, "final announcement"},
  });
}

struct TimelineViolation {
  std::size_t event_index;
  std::string message;
};

/// Collects every violation rather than stopping at the first:
///   - dates must be non-decreasing, and no two announcements may share a date
///   - at least one announcement; a final announcement must be the last one
///   - cumulative counts must not decrease
///   - new_ill must equal the difference of consecutive cumulative counts
///   - counts must be non-negative
inline std::vector<TimelineViolation> validate_timeline(const EventTimeline& timeline) {
  std::vector<TimelineViolation> out;
  const auto& ev = timeline.events();
  auto add = [&](std::size_t i, std::string msg) {
    out.push_back({i, "event " + std::to_string(i) + " (" + format_date(ev[i].date) + "): " + std::move(msg)});
  };

  if (timeline.boundary_events().empty()) {
    out.push_back({0, "timeline has no announcement event"});
  }

  std::optional<std::size_t> prev_boundary;
  std::optional<std::size_t> prev_cumulative;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const auto& e = ev[i];
    if (i > 0 && e.date < ev[i - 1].date) add(i, "date is earlier than the previous event");

    if (is_boundary(e.kind)) {
      if (prev_boundary && ev[*prev_boundary].date >= e.date) {
        add(i, "announcement date does not follow the previous announcement");
      }
      if (prev_boundary && ev[*prev_boundary].kind == EventKind::kFinalAnnouncement) {
        add(i, "announcement after the final announcement");
      }
      prev_boundary = i;
    }

    for (const auto& [value, name] : {std::pair{e.new_ill, "new_ill"}, std::pair{e.cumulative_ill, "cumulative_ill"},
                                      std::pair{e.states, "states"}}) {
      if (value && *value < 0) add(i, std::string(name) + " is negative");
    }

    if (e.cumulative_ill) {
      if (prev_cumulative) {
        const auto before = *ev[*prev_cumulative].cumulative_ill;
        if (*e.cumulative_ill < before) {
          add(i, "cumulative_ill " + std::to_string(*e.cumulative_ill) + " drops below previous " +
                     std::to_string(before));
        }
        if (e.new_ill && *e.new_ill != *e.cumulative_ill - before) {
          add(i, "new_ill " + std::to_string(*e.new_ill) + " but cumulative rises " + std::to_string(before) +
                     " -> " + std::to_string(*e.cumulative_ill) + " (" +
                     std::to_string(*e.cumulative_ill - before) + ")");
        }
      }
      prev_cumulative = i;
    }
  }
  return out;
}

/// Row 0 of a period report is the pre-period; row k + 1 is the period opened by the
/// k-th announcement.
using PeriodId = std::size_t;
inline constexpr PeriodId kPrePeriod = 0;

inline PeriodId assign_period(const EventTimeline& timeline, Instant instant) {
  const auto& bounds = timeline.boundary_events();
  const auto& ev = timeline.events();
  // Number of boundaries at or before the instant.
  const auto it = std::upper_bound(bounds.begin(), bounds.end(), instant,
                                   [&](Instant t, std::size_t idx) { return t < start_of(ev[idx].date); });
  return static_cast<PeriodId>(it - bounds.begin());
}

/// Inclusive calendar-day limits on which tweets a report covers. Unset sides are open.
struct ReportWindow {
  std::optional<Date> first_day;
  std::optional<Date> last_day;

  bool contains(Instant t) const {
    const Date d = date_of(t);
    return (!first_day || d >= *first_day) && (!last_day || d <= *last_day);
  }
};

struct PeriodRow {
  std::optional<Date> start;  // unset: open
  std::optional<Date> end;    // exclusive; unset: open
  std::size_t tweet_count = 0;

  friend bool operator==(const PeriodRow&, const PeriodRow&) = default;
};

struct PeriodReport {
  std::vector<PeriodRow> rows;
  std::size_t outside_window = 0;

  std::size_t total() const {
    std::size_t s = 0;
    for (const auto& r : rows) s += r.tweet_count;
    return s;
  }
};

inline PeriodReport empty_report(const EventTimeline& timeline, const ReportWindow& window = {}) {
  PeriodReport report;
  const std::size_t n = timeline.period_count();
  report.rows.resize(n + 1);
  report.rows[0].start = window.first_day;
  for (std::size_t k = 0; k < n; ++k) {
    report.rows[k].end = timeline.boundary_date(k);
    report.rows[k + 1].start = timeline.boundary_date(k);
  }
  if (window.last_day) report.rows[n].end = *window.last_day + std::chrono::days{1};
  return report;
}

inline PeriodReport bucket_counts(const EventTimeline& timeline, std::span<const TweetRecord> tweets,
                                  const ReportWindow& window = {}) {
  auto report = empty_report(timeline, window);
  for (const auto& t : tweets) {
    if (!window.contains(t.timestamp)) {
      ++report.outside_window;
      continue;
    }
    ++report.rows[assign_period(timeline, t.timestamp)].tweet_count;
  }
  return report;
}

struct DailyCount {
  Date date;
  std::size_t count;

  friend bool operator==(const DailyCount&, const DailyCount&) = default;
};

/// One row per day of [first_day, last_day], zero days included.
/// Throws std::invalid_argument when last_day precedes first_day.
inline std::vector<DailyCount> daily_frequency(std::span<const TweetRecord> tweets, Date first_day,
                                               Date last_day) {
  if (last_day < first_day) {
    throw std::invalid_argument("daily range is inverted: " + format_date(first_day) + " .. " +
                                format_date(last_day));
  }
  const auto span_days = static_cast<std::size_t>((last_day - first_day).count()) + 1;
  std::vector<DailyCount> series(span_days);
  for (std::size_t i = 0; i < span_days; ++i) series[i] = {first_day + std::chrono::days{i}, 0};
  for (const auto& t : tweets) {
    const Date d = date_of(t.timestamp);
    if (d < first_day || d > last_day) continue;
    ++series[static_cast<std::size_t>((d - first_day).count())].count;
  }
  return series;
}

// ---- text forms ----------------------------------------------------------------------

inline std::string format_period_csv(const PeriodReport& report) {
  std::string out = "period_start,period_end,tweet_count\n";
  for (const auto& r : report.rows) {
    out += (r.start ? format_date(*r.start) : "open") + "," + (r.end ? format_date(*r.end) : "open") + "," +
           std::to_string(r.tweet_count) + "\n";
  }
  return out;
}

inline std::string format_daily_csv(std::span<const DailyCount> series) {
  std::string out = "date,count\n";
  for (const auto& d : series) out += format_date(d.date) + "," + std::to_string(d.count) + "\n";
  return out;
}

namespace detail {

inline std::string format_optional_count(const std::optional<long long>& v) {
  return v ? std::to_string(*v) : "-";
}

inline std::optional<long long> parse_optional_count(const std::string& s, std::size_t line_no,
                                                     const char* field) {
  if (s == "-") return std::nullopt;
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw TimelineError("timeline line " + std::to_string(line_no) + ": bad " + field + " '" + s + "'");
  }
  return v;
}

}  // namespace detail

/// Timeline table: one event per line,
///   <YYYY-MM-DD> <kind> <new_ill|-> <cumulative_ill|-> <states|-> [note...]
/// separated by spaces or tabs. '#' lines and blank lines are ignored.
inline EventTimeline load_timeline(std::istream& in) {
  std::vector<EventRecord> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream ss(line);
    std::string date, kind, new_ill, cumulative, states;
    if (!(ss >> date >> kind >> new_ill >> cumulative >> states)) {
      throw TimelineError("timeline line " + std::to_string(line_no) +
                          ": expected date, kind, new_ill, cumulative_ill, states");
    }
    EventRecord e;
    const auto d = parse_date(date);
    if (!d) throw TimelineError("timeline line " + std::to_string(line_no) + ": bad date '" + date + "'");
    e.date = *d;
    const auto k = parse_event_kind(kind);
    if (!k) throw TimelineError("timeline line " + std::to_string(line_no) + ": unknown kind '" + kind + "'");
    e.kind = *k;
    e.new_ill = detail::parse_optional_count(new_ill, line_no, "new_ill");
    e.cumulative_ill = detail::parse_optional_count(cumulative, line_no, "cumulative_ill");
    e.states = detail::parse_optional_count(states, line_no, "states");
    std::getline(ss, e.note);
    const auto note_start = e.note.find_first_not_of(" \t");
    e.note = note_start == std::string::npos ? "" : e.note.substr(note_start);
    events.push_back(std::move(e));
  }
  return EventTimeline(std::move(events));
}

inline std::string format_timeline(const EventTimeline& timeline) {
  std::string out = "# date kind new_ill cumulative_ill states note\n";
  for (const auto& e : timeline.events()) {
    out += format_date(e.date) + " " + std::string(to_string(e.kind)) + " " +
           detail::format_optional_count(e.new_ill) + " " + detail::format_optional_count(e.cumulative_ill) +
           " " + detail::format_optional_count(e.states);
    if (!e.note.empty()) out += " " + e.note;
    out += "\n";
  }
  return out;
}

}  // namespace fiomon
