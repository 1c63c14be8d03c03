#include <gtest/gtest.h>

#include <random>

#include "evsheaf/blocks.hpp"
#include "evsheaf/laws.hpp"
#include "evsheaf/machine.hpp"

using namespace evsheaf;

namespace {

const Kind kInt = Kind::events(ValueType::integer());
const Kind kReal = Kind::events(ValueType::real());

Events ints(Tick len, std::vector<std::pair<Tick, int>> es) {
  Events e(len);
  for (auto [t, v] : es) e.push_back(t, Value(v));
  return e;
}

Events random_ints(std::mt19937_64& rng, Tick len) {
  Events e(len);
  std::bernoulli_distribution hit(0.3);
  std::uniform_int_distribution<int> v(0, 9);
  for (Tick t = 0; t <= len; ++t)
    if (hit(rng)) e.push_back(t, Value(v(rng)));
  return e;
}

Machine counter() {
  DdsSpec s;
  s.input = ValueType::integer();
  s.output = ValueType::integer();
  s.initial = std::int64_t{0};
  s.update = [](const Value&, const State& st) -> State { return std::any_cast<std::int64_t>(st) + 1; };
  s.readout = [](const State& st) { return Value(std::any_cast<std::int64_t>(st)); };
  return make_dds(s);
}

// Sums the values present at a tick of a two-channel joint stream.
Machine joint_sum() {
  return map_events_machine("sum", Kind::events(ValueType::joint({ValueType::integer(), ValueType::integer()})), kInt,
                            [](const Value& v) {
                              std::int64_t s = 0;
                              for (const auto& p : v.as_joint().parts) s += p.value.as_integer();
                              return Value(s);
                            });
}

Machine duplicate() {
  return map_events_machine("dup", kInt, Kind::events(ValueType::joint({ValueType::integer(), ValueType::integer()})),
                            [](const Value& v) {
                              Joint j;
                              j.parts.push_back({0, v});
                              j.parts.push_back({1, v});
                              return Value(j);
                            });
}

// Loop body whose feedback is genuinely non-trivial: C(t) = A(t - eps) + C(t - eps).
Machine echo_loop(Tick eps) {
  Machine delays = tensor(delay_machine(kInt, eps, Events(eps)), delay_machine(kInt, eps, ints(eps, {{0, 1}})));
  return series(series(joint_sum(), duplicate(), "sum"), delays, "dup");
}

}  // namespace

TEST(Machine, IdentityPassesInput) {
  std::mt19937_64 rng(1);
  auto e = random_ints(rng, 50);
  auto tr = run(identity_machine(kInt), e, 7);
  EXPECT_EQ(tr.output, Section(e));
  auto l = random_linear(rng, 50, 2, 5);
  EXPECT_EQ(run(identity_machine(Kind::linear(2)), l, 50).output, Section(l));
}

TEST(Machine, RunRejectsWrongKind) {
  EXPECT_THROW(run(identity_machine(kInt), LinearTrajectory::constant({1.0}, 5), 1), Error);
  EXPECT_THROW(run(identity_machine(kInt), ints(5, {}), 0), Error);
}

TEST(Machine, RunStepCoherenceOnDds) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    auto e = random_ints(rng, 60);
    auto whole = run(counter(), e, 60);
    for (Tick step : {1, 3, 10, 59}) EXPECT_EQ(run(counter(), e, step), whole);
  }
}

TEST(Machine, DelayShiftsEvents) {
  Events e(10);
  e.push_back(2, Value(1.5));
  auto out = run(delay_machine(kReal, 3, Events(3)), e, 10).output;
  Events want(10);
  want.push_back(5, Value(1.5));
  EXPECT_EQ(out, Section(want));
  for (Tick step : {1, 2, 3, 4}) EXPECT_EQ(run(delay_machine(kReal, 3, Events(3)), e, step).output, out);
}

TEST(Machine, DelaySeedChecks) {
  EXPECT_THROW(delay_machine(kReal, 3, Events(2)), Error);
  try {
    delay_machine(kReal, 3, Events(4));
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::SeedLengthMismatch);
  }
  EXPECT_THROW(delay_machine(kReal, 0, Events(0)), Error);
}

TEST(Machine, DelayOnTrajectory) {
  // Ramp starting at the seed's constant value.
  LinearTrajectory r(1, {0, 20}, {2.0, 4.0});
  auto d = delay_machine(Kind::linear(1), 5, LinearTrajectory::constant({2.0}, 5));
  for (Tick step : {1, 4, 20}) {
    auto out = run(d, r, step).output.linear();
    for (Tick t = 0; t <= 20; ++t) EXPECT_EQ(out.evaluate(t, 0), t < 5 ? 2.0 : r.evaluate(t - 5, 0));
  }
}

TEST(Machine, DelayOnStep) {
  StepTrajectory s({1.0}, 20, {{6, {3.0}}});
  auto d = delay_machine(Kind::step(1), 4, StepTrajectory({0.0}, 4));
  auto out = run(d, s, 3).output.step();
  EXPECT_EQ(out, StepTrajectory({0.0}, 20, {{4, {1.0}}, {10, {3.0}}}));
}

TEST(Machine, DelayComposesAdditively) {
  std::mt19937_64 rng(3);
  Events s1 = ints(2, {{1, 7}});
  Events s2 = ints(3, {{0, 8}, {2, 9}});
  auto two = series(delay_machine(kInt, 2, s1), delay_machine(kInt, 3, s2));
  auto one = delay_machine(kInt, 5, splice(s2, s1).events());
  for (int i = 0; i < 50; ++i) {
    auto e = random_ints(rng, 40);
    EXPECT_EQ(run(two, e, 4).output, run(one, e, 40).output);
  }
}

TEST(Machine, SeriesIdentity) {
  std::mt19937_64 rng(4);
  auto e = random_ints(rng, 30);
  auto id = identity_machine(kInt);
  EXPECT_EQ(run(series(id, id), e, 5).output, Section(e));
  EXPECT_EQ(run(series(id, counter()), e, 5).output, run(counter(), e, 5).output);
}

TEST(Machine, SeriesKindMismatch) {
  try {
    series(identity_machine(kInt), identity_machine(kReal));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KindMismatch);
  }
}

TEST(Machine, SeriesRecordsWire) {
  auto e = ints(10, {{3, 1}});
  auto tr = run(series(counter(), identity_machine(kInt), "mid"), e, 2);
  ASSERT_NE(tr.wire("mid"), nullptr);
  EXPECT_EQ(*tr.wire("mid"), tr.output);
  EXPECT_EQ(tr.wire("nope"), nullptr);
}

TEST(Machine, SampleThenHoldReproducesAlignedSteps) {
  StepTrajectory s({1.0}, 40, {{10, {2.0}}, {20, {-1.0}}, {30, {0.5}}});
  auto m = series(make_sampler(SamplerConfig{10, 0, true}, 1), make_zoh({0.0}));
  for (Tick step : {1, 7, 40}) EXPECT_EQ(run(m, s, step).output, Section(s));
}

TEST(Machine, TensorOfIdentities) {
  std::mt19937_64 rng(5);
  auto t = tensor(identity_machine(Kind::linear(1)), identity_machine(Kind::step(1)));
  EXPECT_EQ(t.input_kind, Kind::product({Kind::linear(1), Kind::step(1)}));
  Section in = ProductSection{{random_linear(rng, 20, 1, 3), random_step(rng, 20, 1, 3)}};
  EXPECT_EQ(run(t, in, 3).output, in);
}

TEST(Machine, TensorOfDelays) {
  auto t = tensor(delay_machine(kInt, 2, Events(2)), delay_machine(kInt, 2, Events(2)));
  std::mt19937_64 rng(6);
  auto a = random_ints(rng, 30), b = random_ints(rng, 30);
  auto in = join_tensor({a, b}, {kInt, kInt}, 30);
  auto out = split_tensor(run(t, in, 4).output, {kInt, kInt});
  auto da = run(delay_machine(kInt, 2, Events(2)), a, 30).output;
  auto db = run(delay_machine(kInt, 2, Events(2)), b, 30).output;
  EXPECT_EQ(out[0], da);
  EXPECT_EQ(out[1], db);
  for (const auto& ev : out[0].events().events()) EXPECT_EQ(*a.at(ev.t - 2), ev.value);
}

TEST(Machine, TensorDecomposes) {
  std::mt19937_64 rng(7);
  auto t = tensor(counter(), delay_machine(kInt, 3, Events(3)));
  EXPECT_EQ(t.lead, 0);
  for (int i = 0; i < 30; ++i) {
    auto a = random_ints(rng, 40), b = random_ints(rng, 40);
    auto out = split_tensor(run(t, join_tensor({a, b}, {kInt, kInt}, 40), 6).output, {kInt, kInt});
    EXPECT_EQ(out[0], run(counter(), a, 40).output);
    EXPECT_EQ(out[1], run(delay_machine(kInt, 3, Events(3)), b, 40).output);
  }
}

TEST(Machine, TraceWithEmptyLoop) {
  auto inner = tensor(delay_machine(kInt, 4, Events(4)), delay_machine(kInt, 4, Events(4)));
  auto loop = trace(inner, 4, "c");
  std::mt19937_64 rng(8);
  auto a = random_ints(rng, 50);
  auto tr = run(loop, a, 50);
  EXPECT_EQ(tr.output, run(delay_machine(kInt, 4, Events(4)), a, 50).output);
  ASSERT_NE(tr.wire("c"), nullptr);
  EXPECT_TRUE(tr.wire("c")->events().empty());
  EXPECT_EQ(tr.wires.front().name, "c");
}

TEST(Machine, TraceIndependentOfStep) {
  const Tick eps = 6;
  std::mt19937_64 rng(9);
  auto a = random_ints(rng, 80);
  auto reference = run(trace(echo_loop(eps), eps), a, 80);
  // Loop echo fires every eps ticks starting at eps.
  const Section* c = reference.wire("loop");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->events().empty());
  for (Tick step : {Tick(1), eps / 2, eps})
    for (Tick block : {Tick(1), Tick(5), Tick(80)}) EXPECT_EQ(run(trace(echo_loop(eps), step), a, block), reference);
}

TEST(Machine, TraceRequiresLead) {
  try {
    trace(echo_loop(4), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientLead);
  }
}

TEST(Machine, TraceDetectsLyingLead) {
  // Claims lead 5 but feeds C back instantly: C_out = C_in + 1 or 0 when C_in is silent.
  Machine liar;
  liar.name = "liar";
  liar.input_kind = Kind::events(ValueType::joint({ValueType::integer(), ValueType::integer()}));
  liar.output_kind = liar.input_kind;
  liar.lead = 5;
  liar.initial = std::monostate{};
  liar.advance = [](const State& st, Tick, const Section& in) {
    auto parts = split_tensor(in, {kInt, kInt});
    Events c(in.length());
    for (Tick t = 0; t <= in.length(); ++t) {
      const Value* v = parts[1].events().at(t);
      c.push_back(t, Value(v ? v->as_integer() + 1 : std::int64_t{0}));
    }
    return StepResult{st, join_tensor({Events(in.length()), c}, {kInt, kInt}, in.length()), {}};
  };
  try {
    run(trace(liar, 5), Events(10), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FixedPointViolation);
  }
}

TEST(Machine, SeriesAssociativeOnTables) {
  std::mt19937_64 rng(10);
  for (const auto& r : series_category_laws(rng, 40)) EXPECT_TRUE(r.passed) << r.name << ": " << r.counterexample;
}

TEST(Machine, SpliceEvents) {
  auto s = splice(ints(3, {{0, 1}, {3, 2}}), ints(4, {{0, 3}, {4, 4}}));
  EXPECT_EQ(s, Section(ints(7, {{0, 1}, {3, 3}, {7, 4}})));
  EXPECT_THROW(splice(ints(3, {}), LinearTrajectory::constant({0.0}, 3)), Error);
}
