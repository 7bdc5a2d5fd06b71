#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <vector>

#include "fiomon/synthetic.hpp"
#include "fiomon/timeline.hpp"

namespace fiomon {
namespace {

Instant at(const char* s) { return *parse_instant(s); }
Date day(const char* s) { return *parse_date(s); }

TweetRecord tweet(std::size_t i, Instant t) { return {"t" + std::to_string(i), t, "x"}; }

TEST(BuiltinTimeline, Fixture) {
  const auto tl = builtin_cdc_timeline();
  ASSERT_EQ(tl.events().size(), 13u);
  EXPECT_EQ(tl.period_count(), 10u);
  std::size_t recalls = 0, onsets = 0;
  for (const auto& e : tl.events()) {
    recalls += e.kind == EventKind::kRecall;
    onsets += e.kind == EventKind::kIllnessOnset;
  }
  EXPECT_EQ(recalls, 2u);
  EXPECT_EQ(onsets, 1u);
  EXPECT_EQ(tl.events().front().date, day("2015-07-03"));

  const auto& sep9 = tl.events()[tl.boundary_events()[1]];
  EXPECT_EQ(sep9.date, day("2015-09-09"));
  EXPECT_EQ(*sep9.cumulative_ill, 341);
  EXPECT_EQ(*sep9.new_ill, 56);
  EXPECT_EQ(285 + *sep9.new_ill, *sep9.cumulative_ill);

  const auto& last = tl.events().back();
  EXPECT_EQ(last.kind, EventKind::kFinalAnnouncement);
  EXPECT_EQ(*last.cumulative_ill, 907);
  EXPECT_EQ(*last.states, 40);
}

TEST(ValidateTimeline, BuiltinIsValid) { EXPECT_TRUE(validate_timeline(builtin_cdc_timeline()).empty()); }

TEST(ValidateTimeline, MonotonicityViolation) {
  const EventTimeline tl({{day("2015-09-04"), EventKind::kAnnouncement, {}, 341, {}, ""},
                          {day("2015-09-09"), EventKind::kAnnouncement, {}, 300, {}, ""}});
  const auto v = validate_timeline(tl);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("drops"), std::string::npos);
}

TEST(ValidateTimeline, ArithmeticViolation) {
  const EventTimeline tl({{day("2015-09-04"), EventKind::kAnnouncement, {}, 285, {}, ""},
                          {day("2015-09-09"), EventKind::kAnnouncement, 50, 341, {}, ""}});
  const auto v = validate_timeline(tl);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("(56)"), std::string::npos);
}

TEST(ValidateTimeline, ReportsEveryViolation) {
  const EventTimeline tl({{day("2015-09-09"), EventKind::kRecall, {}, {}, {}, ""},
                          {day("2015-09-04"), EventKind::kRecall, -1, {}, {}, ""}});
  // out of order, negative, no announcement
  EXPECT_EQ(validate_timeline(tl).size(), 3u);

  const EventTimeline same_day({{day("2015-09-04"), EventKind::kAnnouncement, {}, {}, {}, ""},
                                {day("2015-09-04"), EventKind::kAnnouncement, {}, {}, {}, ""}});
  EXPECT_EQ(validate_timeline(same_day).size(), 1u);

  const EventTimeline after_final({{day("2015-09-04"), EventKind::kFinalAnnouncement, {}, {}, {}, ""},
                                   {day("2015-09-05"), EventKind::kAnnouncement, {}, {}, {}, ""}});
  EXPECT_EQ(validate_timeline(after_final).size(), 1u);
}

TEST(ValidateTimeline, AnySingleCumulativePerturbationIsCaught) {
  const auto base = builtin_cdc_timeline();
  for (std::size_t i = 0; i < base.events().size(); ++i) {
    if (!base.events()[i].cumulative_ill) continue;
    for (const int delta : {-1, 1}) {
      auto events = base.events();
      *events[i].cumulative_ill += delta;
      EXPECT_FALSE(validate_timeline(EventTimeline(events)).empty()) << i << " " << delta;
    }
  }
}

TEST(AssignPeriod, Boundaries) {
  const auto tl = builtin_cdc_timeline();
  EXPECT_EQ(assign_period(tl, at("2015-09-04T00:00:00Z")), 1u);
  EXPECT_EQ(assign_period(tl, at("2015-09-03T23:59:59Z")), kPrePeriod);
  EXPECT_EQ(assign_period(tl, at("2015-08-15T10:00:00Z")), kPrePeriod);
  EXPECT_EQ(assign_period(tl, at("2015-09-08T23:59:59Z")), 1u);
  EXPECT_EQ(assign_period(tl, at("2015-09-09T00:00:00Z")), 2u);
  // recall on 09-11 is not a boundary
  EXPECT_EQ(assign_period(tl, at("2015-09-11T12:00:00Z")), 2u);
  EXPECT_EQ(assign_period(tl, at("2016-03-18T00:00:00Z")), 10u);
  EXPECT_EQ(assign_period(tl, at("2020-01-01T00:00:00Z")), 10u);
}

TEST(AssignPeriod, Monotone) {
  const auto tl = builtin_cdc_timeline();
  std::mt19937_64 rng(4);
  const auto lo = at("2015-06-01T00:00:00Z");
  std::vector<Instant> ts;
  for (int i = 0; i < 2000; ++i) ts.push_back(lo + std::chrono::seconds{static_cast<long long>(rng() % 40000000)});
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 1; i < ts.size(); ++i) EXPECT_LE(assign_period(tl, ts[i - 1]), assign_period(tl, ts[i]));
}

TEST(BucketCounts, EmptyInput) {
  const auto r = bucket_counts(builtin_cdc_timeline(), {});
  ASSERT_EQ(r.rows.size(), 11u);
  for (const auto& row : r.rows) EXPECT_EQ(row.tweet_count, 0u);
  EXPECT_FALSE(r.rows.front().start.has_value());
  EXPECT_FALSE(r.rows.back().end.has_value());
  EXPECT_EQ(r.rows[1].start, day("2015-09-04"));
  EXPECT_EQ(r.rows[1].end, day("2015-09-09"));
}

TEST(BucketCounts, WindowCapsAndExcludes) {
  const auto tl = builtin_cdc_timeline();
  std::vector<TweetRecord> tweets = {tweet(0, at("2016-03-31T23:59:59Z")), tweet(1, at("2016-04-01T00:00:00Z")),
                                     tweet(2, at("2015-06-30T12:00:00Z")), tweet(3, at("2015-07-01T00:00:00Z"))};
  const ReportWindow w{day("2015-07-01"), day("2016-03-31")};
  const auto r = bucket_counts(tl, tweets, w);
  EXPECT_EQ(r.outside_window, 2u);
  EXPECT_EQ(r.rows.front().tweet_count, 1u);
  EXPECT_EQ(r.rows.back().tweet_count, 1u);
  EXPECT_EQ(r.rows.front().start, day("2015-07-01"));
  EXPECT_EQ(r.rows.back().end, day("2016-04-01"));
}

TEST(BucketCounts, ReplaysReportedCounts) {
  const auto tl = builtin_cdc_timeline();
  const auto tweets = synthetic::replay_period_counts(tl, synthetic::kReportedPeriodCounts,
                                                      day("2015-07-01"), day("2016-03-31"));
  const auto r = bucket_counts(tl, tweets, {day("2015-07-01"), day("2016-03-31")});
  ASSERT_EQ(r.rows.size(), synthetic::kReportedPeriodCounts.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) EXPECT_EQ(r.rows[i].tweet_count, synthetic::kReportedPeriodCounts[i]);
  EXPECT_EQ(r.rows[1].tweet_count, 18006u);
  EXPECT_EQ(r.rows[2].tweet_count, 9425u);
}

TEST(DailyFrequency, ZeroFill) {
  const std::vector<TweetRecord> tweets = {tweet(0, at("2015-09-04T00:00:00Z")), tweet(1, at("2015-09-04T12:00:00Z")),
                                           tweet(2, at("2015-09-04T23:59:59Z"))};
  const auto s = daily_frequency(tweets, day("2015-09-03"), day("2015-09-05"));
  const std::vector<DailyCount> expected = {{day("2015-09-03"), 0}, {day("2015-09-04"), 3}, {day("2015-09-05"), 0}};
  EXPECT_EQ(s, expected);
  EXPECT_EQ(daily_frequency({}, day("2015-09-01"), day("2015-10-20")).size(), 50u);
  EXPECT_THROW(daily_frequency({}, day("2015-09-05"), day("2015-09-04")), std::invalid_argument);
}

TEST(DailyFrequency, MatchesBruteForceScan) {
  std::mt19937_64 rng(8);
  const auto lo = at("2015-08-25T00:00:00Z");
  std::vector<TweetRecord> tweets;
  for (std::size_t i = 0; i < 10000; ++i) {
    tweets.push_back(tweet(i, lo + std::chrono::seconds{static_cast<long long>(rng() % (70 * 86400))}));
  }
  const auto first = day("2015-09-01"), last = day("2015-10-20");
  const auto s = daily_frequency(tweets, first, last);
  std::size_t total = 0;
  for (const auto& row : s) {
    std::size_t n = 0;
    for (const auto& t : tweets) {
      const auto text = format_instant(t.timestamp).substr(0, 10);
      n += text == format_date(row.date);
    }
    EXPECT_EQ(row.count, n);
    total += row.count;
  }
  std::size_t inside = 0;
  for (const auto& t : tweets) inside += date_of(t.timestamp) >= first && date_of(t.timestamp) <= last;
  EXPECT_EQ(total, inside);
}

TEST(TimelineFile, BuiltinRoundTrips) {
  std::istringstream in(format_timeline(builtin_cdc_timeline()));
  EXPECT_EQ(load_timeline(in), builtin_cdc_timeline());
}

TEST(TimelineFile, ParsesCustomCalendar) {
  std::istringstream in(
      "# custom\n"
      "2020-01-10\tannouncement\t-\t10\t2\tfirst\n"
      "2020-01-20 final_announcement 5 15 3\n");
  const auto tl = load_timeline(in);
  ASSERT_EQ(tl.events().size(), 2u);
  EXPECT_EQ(tl.events()[0].note, "first");
  EXPECT_TRUE(validate_timeline(tl).empty());
}

TEST(TimelineFile, Errors) {
  for (const char* bad : {"2020-01-10 announcement - 10\n", "2020-13-10 announcement - - -\n",
                          "2020-01-10 press - - -\n", "2020-01-10 announcement x - -\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(load_timeline(in), TimelineError) << bad;
  }
}

TEST(ReportCsv, Layout) {
  const EventTimeline tl({{day("2020-01-10"), EventKind::kAnnouncement, {}, {}, {}, ""}});
  const std::vector<TweetRecord> tweets = {tweet(0, at("2020-01-09T00:00:00Z")), tweet(1, at("2020-01-10T00:00:00Z"))};
  EXPECT_EQ(format_period_csv(bucket_counts(tl, tweets)),
            "period_start,period_end,tweet_count\nopen,2020-01-10,1\n2020-01-10,open,1\n");
  EXPECT_EQ(format_daily_csv(daily_frequency(tweets, day("2020-01-09"), day("2020-01-10"))),
            "date,count\n2020-01-09,1\n2020-01-10,1\n");
}

}  // namespace
}  // namespace fiomon
