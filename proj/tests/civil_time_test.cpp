#include <gtest/gtest.h>

#include "fiomon/civil_time.hpp"

namespace fiomon {
namespace {

TEST(CivilTime, ParsesAndFormatsInstant) {
  const auto t = parse_instant("2015-09-04T12:34:56Z");
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(format_instant(*t), "2015-09-04T12:34:56Z");
  EXPECT_EQ(format_date(date_of(*t)), "2015-09-04");
}

TEST(CivilTime, RejectsNonCanonicalForms) {
  for (const char* bad : {"09/04/2015", "2015-09-04", "2015-09-04T12:00:00", "2015-09-04T12:00:00+00:00",
                          "2015-09-04 12:00:00Z", "2015-02-30T00:00:00Z", "2015-09-04T24:00:00Z",
                          "2015-09-04T12:00:60Z", "2015-9-04T12:00:00Z", ""}) {
    EXPECT_FALSE(parse_instant(bad).has_value()) << bad;
  }
}

TEST(CivilTime, LeapDay) {
  EXPECT_TRUE(parse_date("2016-02-29").has_value());
  EXPECT_FALSE(parse_date("2015-02-29").has_value());
}

TEST(CivilTime, DayFloorBeforeEpoch) {
  const auto t = parse_instant("1969-12-31T23:59:59Z");
  ASSERT_TRUE(t);
  EXPECT_EQ(format_date(date_of(*t)), "1969-12-31");
}

}  // namespace
}  // namespace fiomon
