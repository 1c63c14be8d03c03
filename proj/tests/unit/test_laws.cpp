#include <gtest/gtest.h>

#include "evsheaf/laws.hpp"

using namespace evsheaf;

namespace {

void expect_all_pass(const std::vector<LawResult>& results, std::size_t cases) {
  ASSERT_FALSE(results.empty());
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed) << r.name << ": " << r.counterexample;
    EXPECT_GE(r.cases, cases) << r.name;
  }
}

}  // namespace

TEST(Laws, Generators) {
  std::mt19937_64 rng(1);
  auto e = random_int_events(rng, 50, 0.3, 3);
  EXPECT_EQ(e.length(), 50);
  for (const auto& ev : e.events()) {
    EXPECT_GE(ev.value, 0);
    EXPECT_LT(ev.value, 3);
  }
  auto lin = random_linear(rng, 40, 2, 5);
  EXPECT_EQ(lin.length(), 40);
  EXPECT_EQ(lin.dim(), 2u);
  auto st = random_step(rng, 40, 1, 4);
  EXPECT_EQ(st.length(), 40);
  std::mt19937_64 a(9), b(9);
  EXPECT_EQ(random_value_events(a, 30, 0.5), random_value_events(b, 30, 0.5));
}

TEST(Laws, TranslationCategory) {
  std::mt19937_64 rng(2);
  expect_all_pass(ph_category_laws(rng, 200), 200);
}

TEST(Laws, Gluing) {
  std::mt19937_64 rng(3);
  expect_all_pass(gluing_laws(rng, 200), 200);
  auto u = gluing_uniqueness(4, 2);
  EXPECT_TRUE(u.passed) << u.counterexample;
  EXPECT_GT(u.cases, 0u);
}

TEST(Laws, Restriction) {
  std::mt19937_64 rng(4);
  expect_all_pass(restriction_laws(rng, 200), 200);
}

TEST(Laws, Monoidal) {
  std::mt19937_64 rng(5);
  expect_all_pass(monoidal_laws(rng, 200), 200);
}

TEST(Laws, SeriesCategory) {
  std::mt19937_64 rng(6);
  expect_all_pass(series_category_laws(rng, 20), 20);
}

TEST(Laws, Pullback) {
  std::mt19937_64 rng(7);
  auto r = pullback_law(rng, 5, 2);
  EXPECT_TRUE(r.passed) << r.counterexample;
  EXPECT_EQ(r.cases, 5u);
}

TEST(Laws, Fixtures) {
  auto r = fixture_classification(3, 100000);
  EXPECT_TRUE(r.passed) << r.counterexample;
  EXPECT_EQ(describe(check_total_deterministic(table_fixture("good"), 3)), "total:true deterministic:true");
  EXPECT_NE(describe(check_total_deterministic(table_fixture("nondet"), 3)).find("deterministic:false"),
            std::string::npos);
  EXPECT_NE(describe(check_total_deterministic(table_fixture("partial"), 3)).find("total:false"),
            std::string::npos);
}
