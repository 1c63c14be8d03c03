#include <gtest/gtest.h>

#include <limits>

#include "evsheaf/timebase.hpp"

using namespace evsheaf;

TEST(Timebase, HomValidExamples) {
  EXPECT_TRUE(hom_valid(Translation(0), Duration(5), Duration(5)));
  EXPECT_TRUE(hom_valid(Translation(3), Duration(2), Duration(5)));
  EXPECT_FALSE(hom_valid(Translation(4), Duration(2), Duration(5)));
  EXPECT_FALSE(hom_valid(Translation(0), Duration(5), Duration(4)));
}

TEST(Timebase, ComposeExamples) {
  EXPECT_EQ(ph_compose(Translation(2), Translation(3)), Translation(5));
  EXPECT_EQ(ph_compose(Translation(0), Translation(7)), Translation(7));
  EXPECT_EQ(ph_compose(Translation(1), ph_compose(Translation(2), Translation(3))), Translation(6));
  EXPECT_EQ(ph_compose(ph_compose(Translation(1), Translation(2)), Translation(3)), Translation(6));
}

TEST(Timebase, NegativeValuesRejected) {
  EXPECT_THROW(Duration(-1), Error);
  EXPECT_THROW(Translation(-1), Error);
  EXPECT_THROW(ClosedInterval(3, 2), Error);
  EXPECT_THROW(ClosedInterval(-1, 2), Error);
  try {
    ClosedInterval(5, 1);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowOutOfRange);
  }
}

TEST(Timebase, OverflowIsAnError) {
  const Tick max = std::numeric_limits<Tick>::max();
  EXPECT_THROW(checked_add(max, 1), Error);
  EXPECT_THROW(ph_compose(Translation(max), Translation(1)), Error);
  EXPECT_FALSE(hom_valid(Translation(max), Duration(1), Duration(max)));
  try {
    checked_add(max, 1);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Overflow);
    EXPECT_STREQ(e.name(), "Overflow");
  }
}

TEST(Timebase, TickScale) {
  TickScale s;
  EXPECT_EQ(s.seconds_per_tick, 1e-6);
  EXPECT_EQ(s.ticks(0.25), 250000);
  TickScale ms(1e-3);
  EXPECT_EQ(ms.seconds(1000), 1.0);
  EXPECT_THROW(TickScale(0.0), Error);
  EXPECT_THROW(TickScale(-1.0), Error);
}

TEST(Timebase, IntervalHelpers) {
  ClosedInterval w(2, 7);
  EXPECT_EQ(w.length(), 5);
  EXPECT_TRUE(w.contains(2));
  EXPECT_TRUE(w.contains(7));
  EXPECT_FALSE(w.contains(8));
  EXPECT_TRUE(w.within(7));
  EXPECT_FALSE(w.within(6));
}
