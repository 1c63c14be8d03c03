#include <gtest/gtest.h>

#include <random>

#include "evsheaf/laws.hpp"
#include "evsheaf/sheaf.hpp"

using namespace evsheaf;

namespace {
IntEvents ev(Tick len, std::vector<std::pair<Tick, std::int64_t>> es) {
  IntEvents e(len);
  for (auto [t, v] : es) e.push_back(t, v);
  return e;
}
}  // namespace

TEST(Sheaf, CompatibilityExamples) {
  EXPECT_TRUE(sections_compatible(ev(3, {}), ev(4, {})));
  EXPECT_TRUE(sections_compatible(ev(3, {{3, 7}}), ev(4, {{0, 7}})));
  EXPECT_FALSE(sections_compatible(ev(3, {{3, 7}}), ev(4, {})));
  EXPECT_FALSE(sections_compatible(ev(3, {{3, 7}}), ev(4, {{0, 8}})));
}

TEST(Sheaf, GlueExamples) {
  EXPECT_EQ(glue_sections(ev(3, {}), ev(4, {})), ev(7, {}));
  EXPECT_EQ(glue_sections(ev(2, {{1, 1}}), ev(2, {{1, 2}})), ev(4, {{1, 1}, {3, 2}}));
  EXPECT_EQ(glue_sections(ev(2, {{2, 1}}), ev(2, {{0, 1}})), ev(4, {{2, 1}}));
}

TEST(Sheaf, ClockGenerate) {
  auto c = clock_generate(10, 5, 20);
  EXPECT_EQ(c.ticks(), (std::vector<Tick>{5, 15}));
  EXPECT_EQ(clock_generate(10, 0, 20).ticks(), (std::vector<Tick>{0, 10, 20}));
  EXPECT_THROW(clock_generate(10, 10, 20), Error);
  EXPECT_THROW(clock_generate(10, -1, 20), Error);
  try {
    clock_generate(10, 12, 20);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidPhase);
  }
}

TEST(Sheaf, ClockRestrict) {
  auto c = clock_generate(10, 5, 20);
  EXPECT_EQ(clock_restrict(c, ClosedInterval(0, 20)), c);
  EXPECT_EQ(clock_restrict(c, ClosedInterval(10, 20)).ticks(), (std::vector<Tick>{5}));
  auto empty = clock_restrict(c, ClosedInterval(6, 14));
  EXPECT_TRUE(empty.ticks().empty());
  EXPECT_EQ(empty.length(), 8);
}

TEST(Sheaf, ClockRejectsBadSpacing) {
  EXPECT_THROW(ClockSection(20, 10, {5, 14}), Error);
  EXPECT_THROW(ClockSection(20, 10, {12}), Error);
  EXPECT_NO_THROW(ClockSection(20, 10, {5, 15}));
}

TEST(Sheaf, ClockRestrictKeepsSpacing) {
  for (Tick phase = 0; phase < 7; ++phase) {
    auto c = clock_generate(7, phase, 50);
    for (Tick lo = 0; lo <= 50; lo += 3)
      for (Tick hi = lo; hi <= 50; hi += 5) {
        auto r = clock_restrict(c, ClosedInterval(lo, hi));
        for (std::size_t i = 1; i < r.ticks().size(); ++i) EXPECT_EQ(r.ticks()[i] - r.ticks()[i - 1], 7);
        EXPECT_TRUE(restrict_identity(r));
      }
  }
}

TEST(Sheaf, ClockGlue) {
  auto c = clock_generate(10, 5, 40);
  auto a = c.restrict(ClosedInterval(0, 17));
  auto b = c.restrict(ClosedInterval(17, 40));
  EXPECT_TRUE(glue_round_trip(a, b));
  EXPECT_EQ(glue_sections(a, b), c);
}

TEST(Sheaf, ZeroLengthSections) {
  auto e = ev(0, {{0, 3}});
  EXPECT_EQ(e.length(), 0);
  EXPECT_TRUE(restrict_identity(e));
  EXPECT_EQ(ev(5, {{5, 3}}).restrict(ClosedInterval(5, 5)), e);
}

TEST(Sheaf, HarnessOverAllSectionKinds) {
  std::mt19937_64 rng(7);
  for (const auto& r : gluing_laws(rng, 500)) EXPECT_TRUE(r.passed) << r.name << ": " << r.counterexample;
  for (const auto& r : restriction_laws(rng, 500)) EXPECT_TRUE(r.passed) << r.name << ": " << r.counterexample;
}

TEST(Sheaf, GluingUniquenessSmall) {
  auto r = gluing_uniqueness(4, 2);
  EXPECT_TRUE(r.passed) << r.counterexample;
  EXPECT_GT(r.cases, 0u);
}
