#include <gtest/gtest.h>

#include <sstream>

#include "evsheaf/csv.hpp"
#include "evsheaf/value.hpp"

using namespace evsheaf;

TEST(Value, TextForms) {
  EXPECT_EQ(to_string(Value(3)), "3");
  EXPECT_EQ(to_string(Value(0.5)), "0.5");
  EXPECT_EQ(to_string(Value(RealVector{1.0, 2.5})), "1;2.5");
  Joint j;
  j.parts.push_back({3, Value(1)});
  j.parts.push_back({7, Value(-1)});
  EXPECT_EQ(to_string(Value(j)), "3:+1;7:-1");
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(1e-6), "1e-06");
}

TEST(ValueType, Admits) {
  EXPECT_FALSE(ValueType::empty().admits(Value()));
  EXPECT_TRUE(ValueType::unit().admits(Value()));
  EXPECT_TRUE(ValueType::integer().admits(Value(2)));
  EXPECT_FALSE(ValueType::integer().admits(Value(2.0)));
  EXPECT_TRUE(ValueType::real().admits(Value(2.0)));
  EXPECT_TRUE(ValueType::vector(2).admits(Value(RealVector{1, 2})));
  EXPECT_FALSE(ValueType::vector(3).admits(Value(RealVector{1, 2})));
  Joint j;
  j.parts.push_back({1, Value(4)});
  auto jt = ValueType::joint({ValueType::real(), ValueType::integer()});
  EXPECT_TRUE(jt.admits(Value(j)));
  j.parts[0].channel = 0;
  EXPECT_FALSE(jt.admits(Value(j)));
}

TEST(Section, ConformsAndZero) {
  auto k = Kind::linear(3);
  Section z = zero_section(k, 10);
  EXPECT_TRUE(z.conforms(k));
  EXPECT_FALSE(z.conforms(Kind::linear(2)));
  EXPECT_EQ(z.linear().evaluate(7), (RealVector{0, 0, 0}));
  Section e = zero_section(Kind::events(ValueType::real()), 4);
  EXPECT_TRUE(e.events().empty());
  Section s = zero_section(Kind::step(2), 4);
  EXPECT_EQ(s.step().initial(), (RealVector{0, 0}));
  Section p = zero_section(Kind::product({Kind::linear(1), Kind::step(1)}), 4);
  EXPECT_EQ(p.product().parts.size(), 2u);
  EXPECT_THROW(require_kind(z, Kind::step(3), "test"), Error);
}

TEST(Section, GlueAcrossKinds) {
  Events a(3);
  a.push_back(3, Value(1.0));
  Events b(2);
  b.push_back(0, Value(1.0));
  b.push_back(2, Value(2.0));
  Section g = glue(Section(a), Section(b));
  EXPECT_EQ(g.events().size(), 2u);
  EXPECT_EQ(g.length(), 5);
  EXPECT_FALSE(check_compatible(Section(a), Section(Events(2))));
  EXPECT_THROW(glue(Section(a), Section(LinearTrajectory::constant({0.0}, 2))), Error);
  EXPECT_EQ(g.restrict(ClosedInterval(3, 5)), Section(b));
}

TEST(Csv, EventsRoundTrip) {
  Events e(100);
  e.push_back(0, Value(0.25));
  e.push_back(17, Value(-1.5e-9));
  e.push_back(100, Value(3.0));
  std::stringstream ss;
  write_csv(ss, e, TickScale(1e-3));
  auto back = read_csv(ss);
  EXPECT_EQ(back.section, Section(e));
  EXPECT_EQ(back.scale.seconds_per_tick, 1e-3);
}

TEST(Csv, Layout) {
  Events e(10);
  e.push_back(5, Value(2.0));
  std::stringstream ss;
  write_csv(ss, e, TickScale(1e-3));
  EXPECT_EQ(ss.str(),
            "# kind: events\n# length_ticks: 10\n# seconds_per_tick: 0.001\n# value: real\nt_tick,t_seconds,value\n5,0.005,2\n");
}

TEST(Csv, TrajectoryRoundTrip) {
  LinearTrajectory tr(2, {0, 3, 9}, {0.0, 1.0, 0.1, 0.2, 0.3, -0.7});
  std::stringstream ss;
  write_csv(ss, tr, TickScale());
  auto back = read_csv(ss);
  ASSERT_TRUE(back.section.is_linear());
  for (Tick t = 0; t <= 9; ++t) EXPECT_EQ(back.section.linear().evaluate(t), tr.evaluate(t));
  EXPECT_EQ(csv_row_count(tr), 3u);

  StepTrajectory st({1.0}, 10, {{4, {2.0}}, {7, {0.5}}});
  std::stringstream s2;
  write_csv(s2, st, TickScale());
  EXPECT_EQ(read_csv(s2).section, Section(st));
  EXPECT_EQ(csv_row_count(st), 3u);
}

TEST(Csv, ParseErrors) {
  std::stringstream bad("# kind: events\n# length_ticks: 5\nt_tick,t_seconds,value\n1,0.1\n");
  EXPECT_THROW(read_csv(bad), Error);
  std::stringstream unknown("# kind: wave\nt_tick\n");
  EXPECT_THROW(read_csv(unknown), Error);
  std::stringstream junk("# kind: events\n# length_ticks: 5\nt_tick,t_seconds,value\n1,0.1,abc\n");
  EXPECT_THROW(read_csv(junk), Error);
}
