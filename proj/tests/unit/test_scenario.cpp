#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "evsheaf/csv.hpp"
#include "evsheaf/scenario.hpp"

using namespace evsheaf;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::string& yaml) {
  try {
    parse_config(yaml);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;  // sentinel: nothing thrown
}

bool rejected(const std::string& yaml) { return code_of(yaml) == ErrorCode::ConfigError; }

ScenarioConfig small_cosine() {
  ScenarioConfig c;
  c.horizon = 0.2;
  c.pixel_count = 16;
  return c;
}

}  // namespace

TEST(Config, DefaultsFromMinimalDocument) {
  auto c = parse_config("version: 1\n");
  EXPECT_EQ(c, ScenarioConfig{});
  EXPECT_EQ(c.horizon_ticks(), 30000);
}

TEST(Config, ShippedScenariosParse) {
  auto c = load_config(std::string(EVSHEAF_SCENARIOS) + "/cosine.yaml");
  EXPECT_EQ(c.scene.preset, "cosine");
  EXPECT_EQ(c.pixel_count, 64u);
  auto u = load_config(std::string(EVSHEAF_SCENARIOS) + "/uniform.yaml");
  EXPECT_EQ(u.scene.preset, "uniform");
}

TEST(Config, NestedKeys) {
  auto c = parse_config(
      "version: 1\npixels: {count: 8, field_of_view: 3.0}\ncamera: {contrast: [0.1, 0.2, 0.1, 0.2, 0.1, 0.2, 0.1, "
      "0.2], i0: 1.0}\nregulator: {a: 2, kappa: 0.5, grouping: decay-per-pixel}\nbody: {b: 1.5, theta0: -0.25}\n"
      "record: [heading]\n");
  EXPECT_EQ(c.pixel_count, 8u);
  EXPECT_EQ(c.field_of_view, 3.0);
  EXPECT_EQ(c.contrast.size(), 8u);
  EXPECT_EQ(c.a, 2.0);
  EXPECT_EQ(c.grouping, "decay-per-pixel");
  EXPECT_EQ(c.theta0, -0.25);
  EXPECT_EQ(c.record, std::vector<std::string>{"heading"});
  auto p = closed_loop_params(c);
  EXPECT_TRUE(p.regulator.decay_per_pixel);
  EXPECT_EQ(p.i0, std::vector<double>(8, 1.0));
}

TEST(Config, Rejections) {
  EXPECT_TRUE(rejected("version: 2\n"));
  EXPECT_TRUE(rejected("horizon: 1.0\n"));  // version missing
  EXPECT_TRUE(rejected("version: 1\nhorizon: -1\n"));
  EXPECT_TRUE(rejected("version: 1\nbogus: 3\n"));
  EXPECT_TRUE(rejected("version: 1\ncamera: {contrst: 0.1}\n"));
  EXPECT_TRUE(rejected("version: 1\ncamera: {contrast: [0.1, 0.2]}\n"));  // neither 1 nor pixel count
  EXPECT_TRUE(rejected("version: 1\nregulator: {estimator: magic}\n"));
  EXPECT_TRUE(rejected("version: 1\nregulator: {kappa: -1}\n"));
  EXPECT_TRUE(rejected("version: 1\nrecord: [nonsense]\n"));
  EXPECT_TRUE(rejected("version: 1\ndelay: 0\n"));
  EXPECT_TRUE(rejected("version: 1\nhorizon: abc\n"));
  EXPECT_TRUE(rejected("version: [1\n"));
  EXPECT_TRUE(rejected("version: 1\nscene: {preset: breakpoints}\n"));
  EXPECT_THROW(load_config("/nonexistent/path.yaml"), Error);
}

TEST(Config, EmitParseRoundTrip) {
  ScenarioConfig c;
  c.horizon = 0.3;
  c.contrast = {0.1};
  c.i0 = {0.7};
  c.scene.preset = "breakpoints";
  c.scene.breakpoints = {{-kPi, 1.0}, {0.1, 2.0}, {kPi, 1.0}};
  c.seconds_per_tick = 1e-6;
  c.kappa = 0.1 + 0.2;
  c.estimator = "quadrature";
  EXPECT_EQ(parse_config(emit_config(c)), c);
  ScenarioConfig d;
  EXPECT_EQ(parse_config(emit_config(d)), d);
}

TEST(Config, Scenes) {
  SceneConfig s;
  s.preset = "uniform";
  s.amplitude = 2.0;
  EXPECT_EQ(make_scene(s)(1.0), 2.0);
  s.preset = "two-bar";
  s.amplitude = 0.5;
  EXPECT_NO_THROW(make_scene(s));
}

TEST(Run, SummaryMatchesWires) {
  auto cfg = small_cosine();
  auto r = run_scenario(cfg);
  const auto& s = r.summary;
  EXPECT_EQ(s.goal, 0.0);
  EXPECT_EQ(s.abs_error_initial, 0.5);
  EXPECT_EQ(s.final_heading, r.trace.wire("heading")->linear().evaluate(cfg.horizon_ticks(), 0));
  EXPECT_EQ(s.event_count_total, r.trace.wire("camera")->events().size());
  EXPECT_EQ(s.statistic_event_count, r.trace.wire("statistic")->events().size());
  ASSERT_EQ(s.wires.size(), wire_names().size());
  for (const auto& w : s.wires) EXPECT_EQ(w.rows, csv_row_count(*r.trace.wire(w.name)));
}

TEST(Run, WritesFiles) {
  auto cfg = small_cosine();
  cfg.record = {"heading", "camera"};
  auto r = run_scenario(cfg);
  fs::path dir = fs::temp_directory_path() / "evsheaf_scenario_test";
  fs::remove_all(dir);
  write_run(dir.string(), cfg, r);
  for (const char* f : {"heading.csv", "camera.csv", "summary.csv", "effective_config.yaml"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_FALSE(fs::exists(dir / "statistic.csv"));
  EXPECT_EQ(load_config((dir / "effective_config.yaml").string()), cfg);
  auto heading = read_csv_file((dir / "heading.csv").string());
  EXPECT_EQ(heading.section, *r.trace.wire("heading"));
  auto camera = read_csv_file((dir / "camera.csv").string());
  EXPECT_EQ(camera.section, *r.trace.wire("camera"));
  std::ifstream in(dir / "camera.csv");
  std::size_t lines = 0, data = 0;
  for (std::string line; std::getline(in, line); ++lines)
    if (!line.empty() && line[0] != '#') ++data;
  EXPECT_EQ(data, r.summary.event_count_total + 1);  // plus header
  fs::remove_all(dir);
}
