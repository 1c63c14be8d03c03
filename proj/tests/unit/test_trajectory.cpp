#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "evsheaf/laws.hpp"
#include "evsheaf/sheaf.hpp"
#include "evsheaf/trajectory.hpp"

using namespace evsheaf;

namespace {
LinearTrajectory ramp(Tick len, double a, double b) { return LinearTrajectory(1, {0, len}, {a, b}); }
}  // namespace

TEST(LinearTrajectory, Evaluate) {
  auto r = ramp(10, 0.0, 1.0);
  EXPECT_EQ(r.evaluate(5, 0), 0.5);
  EXPECT_EQ(r.evaluate(0, 0), 0.0);
  EXPECT_EQ(r.evaluate(10, 0), 1.0);
  LinearTrajectory k(1, {0, 3, 7}, {0.1, 0.7, -0.3});
  EXPECT_EQ(k.evaluate(3, 0), 0.7);
  EXPECT_EQ(k.evaluate(7, 0), -0.3);
  EXPECT_THROW(r.evaluate(11, 0), Error);
}

TEST(LinearTrajectory, RejectsNonFinite) {
  EXPECT_THROW(LinearTrajectory(1, {0, 5}, {0.0, std::nan("")}), Error);
  EXPECT_THROW(LinearTrajectory(1, {0, 5, 5}, {0.0, 1.0, 2.0}), Error);
  EXPECT_THROW(LinearTrajectory(2, {0, 5}, {0.0, 1.0, 2.0}), Error);
}

TEST(LinearTrajectory, GlueExamples) {
  auto zero = glue_sections(LinearTrajectory::constant({0.0}, 4), LinearTrajectory::constant({0.0}, 6));
  EXPECT_EQ(zero.length(), 10);
  for (Tick t = 0; t <= 10; ++t) EXPECT_EQ(zero.evaluate(t, 0), 0.0);
  auto tent = glue_sections(ramp(10, 0.0, 1.0), ramp(10, 1.0, 0.0));
  EXPECT_EQ(tent.length(), 20);
  EXPECT_EQ(tent.evaluate(10, 0), 1.0);
  EXPECT_EQ(tent.evaluate(15, 0), 0.5);
  EXPECT_EQ(tent.evaluate(20, 0), 0.0);
  auto a = ramp(10, 0.0, 1.0);
  EXPECT_THROW(a.append(ramp(10, 0.5, 0.0)), Error);
}

TEST(LinearTrajectory, RestrictIsBitExact) {
  LinearTrajectory k(1, {0, 7, 19}, {0.1, 0.7, -0.3});
  auto r = k.restrict(ClosedInterval(3, 15));
  for (Tick t = 0; t <= 12; ++t) EXPECT_EQ(r.evaluate(t, 0), k.evaluate(t + 3, 0));
  EXPECT_EQ(glue_sections(k.restrict(ClosedInterval(0, 11)), k.restrict(ClosedInterval(11, 19))), k);
}

TEST(LinearTrajectory, ContinuousAcrossBreakpoints) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    auto tr = random_linear(rng, 100, 2, 8);
    auto bps = tr.breakpoints();
    for (std::size_t j = 1; j + 1 < bps.size(); ++j) {
      auto left = tr.restrict(ClosedInterval(bps[j - 1], bps[j]));
      auto right = tr.restrict(ClosedInterval(bps[j], bps[j + 1]));
      EXPECT_EQ(left.evaluate(left.length()), right.evaluate(0));
    }
  }
}

TEST(StepTrajectory, RightContinuous) {
  StepTrajectory s({1.0}, 10, {{5, {2.0}}});
  EXPECT_EQ(s.evaluate(5)[0], 2.0);
  EXPECT_EQ(s.evaluate(4)[0], 1.0);
  EXPECT_EQ(s.evaluate_left(5)[0], 1.0);
  EXPECT_EQ(s.evaluate_left(6)[0], 2.0);
}

TEST(StepTrajectory, CanonicalSteps) {
  StepTrajectory s({1.0}, 10);
  s.push_step(3, {1.0});
  EXPECT_TRUE(s.steps().empty());
  s.push_step(4, {2.0});
  EXPECT_EQ(s.steps().size(), 1u);
  EXPECT_THROW(s.push_step(2, {3.0}), Error);
}

TEST(StepTrajectory, GlueAndRestrict) {
  StepTrajectory s({1.0}, 10, {{5, {2.0}}, {8, {0.5}}});
  auto a = s.restrict(ClosedInterval(0, 5));
  auto b = s.restrict(ClosedInterval(5, 10));
  EXPECT_EQ(a.evaluate(5)[0], 2.0);
  EXPECT_EQ(b.initial()[0], 2.0);
  EXPECT_TRUE(glue_round_trip(a, b));
  EXPECT_EQ(glue_sections(a, b), s);
  StepTrajectory c({9.0}, 3);
  EXPECT_THROW(a.append(c), Error);
}

TEST(Lipschitz, Examples) {
  TickScale ms(1e-3);
  EXPECT_EQ(lipschitz_estimate(LinearTrajectory::constant({3.0}, 100), ms), 0.0);
  EXPECT_DOUBLE_EQ(lipschitz_estimate(ramp(1000, 0.0, 1.0), ms), 1.0);
  auto tent = glue_sections(ramp(1000, 0.0, 1.0), ramp(1000, 1.0, 0.0));
  EXPECT_DOUBLE_EQ(lipschitz_estimate(tent, ms), 1.0);
  EXPECT_THROW(lipschitz_estimate(LinearTrajectory::constant({1.0}, 0), ms), Error);
}

TEST(Lipschitz, GlueTakesMax) {
  std::mt19937_64 rng(2);
  TickScale s(1e-3);
  for (int i = 0; i < 200; ++i) {
    auto a = random_linear(rng, 50, 1, 4);
    auto b0 = random_linear(rng, 50, 1, 4);
    // Shift b so it starts where a ends.
    double shift = a.evaluate(50, 0) - b0.evaluate(0, 0);
    auto b = map_pointwise(b0, [&](const RealVector& x) { return RealVector{x[0] + shift}; }, 1000);
    b = b.restrict(ClosedInterval(0, 50));
    if (b.evaluate(0, 0) != a.evaluate(50, 0)) continue;
    auto g = glue_sections(a, b);
    EXPECT_EQ(lipschitz_estimate(g, s), std::max(lipschitz_estimate(a, s), lipschitz_estimate(b, s)));
  }
}

TEST(MapPointwise, Examples) {
  auto r = ramp(20, 0.0, 2.0);
  auto id = map_pointwise(r, [](const RealVector& x) { return x; }, 3);
  for (Tick t = 0; t <= 20; ++t) EXPECT_DOUBLE_EQ(id.evaluate(t, 0), r.evaluate(t, 0));
  auto e = LinearTrajectory::constant({std::exp(1.0)}, 10);
  auto l = map_pointwise(e, [](const RealVector& x) { return RealVector{std::log(x[0])}; }, 1);
  for (Tick t = 0; t <= 10; ++t) EXPECT_EQ(l.evaluate(t, 0), 1.0);
  EXPECT_THROW(map_pointwise(r, [](const RealVector&) { return RealVector{std::nan("")}; }, 1), Error);
}

TEST(MapPointwise, SquareWithinInterpolationBound) {
  // t -> t^2 on [0, 2] seconds, 1 ms ticks, resampled every 10 ticks.
  TickScale ms(1e-3);
  auto r = ramp(2000, 0.0, 2.0);
  auto sq = map_pointwise(r, [](const RealVector& x) { return RealVector{x[0] * x[0]}; }, 10);
  double k = 4.0;  // max |d/dt t^2| on [0, 2]
  double bound = k * ms.seconds(10);
  for (Tick t = 0; t <= 2000; ++t) {
    double x = ms.seconds(t);
    EXPECT_LE(std::fabs(sq.evaluate(t, 0) - x * x), bound);
  }
}

TEST(MapPointwise, LipschitzComposition) {
  std::mt19937_64 rng(4);
  TickScale s(1e-3);
  for (int i = 0; i < 200; ++i) {
    auto tr = random_linear(rng, 300, 1, 10);
    double k = lipschitz_estimate(tr, s);
    // sin is 1-Lipschitz; chords of a C-Lipschitz map of a K-Lipschitz path have slope <= C*K.
    auto m = map_pointwise(tr, [](const RealVector& x) { return RealVector{std::sin(x[0])}; }, 7);
    EXPECT_LE(lipschitz_estimate(m, s), k * (1 + 1e-6));
    auto d = map_pointwise(tr, [](const RealVector& x) { return RealVector{3 * x[0]}; }, 7);
    EXPECT_LE(lipschitz_estimate(d, s), 3 * k * (1 + 1e-6));
  }
}

TEST(LinearTrajectory, ConcatAligned) {
  auto a = LinearTrajectory(1, {0, 4, 10}, {0.1, 0.3, 0.7});
  auto b = LinearTrajectory(1, {0, 4, 10}, {1.0, 3.0, 2.0});
  auto c = LinearTrajectory::concat({a, b});
  EXPECT_EQ(c.dim(), 2u);
  for (Tick t = 0; t <= 10; ++t) {
    EXPECT_EQ(c.evaluate(t, 0), a.evaluate(t, 0));
    EXPECT_EQ(c.evaluate(t, 1), b.evaluate(t, 0));
  }
  EXPECT_EQ(c.components(1, 1), b);
}

TEST(LinearTrajectory, ConcatUnalignedResamples) {
  auto a = ramp(10, 0.0, 1.0);
  auto b = LinearTrajectory(1, {0, 4, 10}, {1.0, 3.0, 2.0});
  auto c = LinearTrajectory::concat({a, b});
  EXPECT_EQ(c.breakpoints(), (std::vector<Tick>{0, 4, 10}));
  for (Tick t = 0; t <= 10; ++t) {
    EXPECT_DOUBLE_EQ(c.evaluate(t, 0), a.evaluate(t, 0));
    EXPECT_DOUBLE_EQ(c.evaluate(t, 1), b.evaluate(t, 0));
  }
}
