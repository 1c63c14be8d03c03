#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "evsheaf/optomotor.hpp"

namespace evsheaf {

struct SceneConfig {
  std::string preset = "cosine";  // uniform | cosine | two-bar | breakpoints
  double amplitude = 0.5;         // cosine amplitude, two-bar depth, uniform value
  std::size_t samples = 256;
  double width = 0.5;
  double ramp = 0.1;
  std::vector<std::pair<double, double>> breakpoints;

  friend bool operator==(const SceneConfig&, const SceneConfig&) = default;
};

struct ScenarioConfig {
  int version = 1;
  double seconds_per_tick = 1e-4;
  double horizon = 3.0;  // seconds
  Tick integrator_step = 1;
  Tick delay = 10;
  std::size_t pixel_count = 64;
  double field_of_view = 2 * kPi;
  std::vector<double> contrast{0.05};  // one value or one per pixel
  std::vector<double> i0{0.5};
  double i_min = 1e-6;
  SceneConfig scene;
  double a = 5.0;
  double kappa = 1.0;
  std::string estimator = "proportional";  // proportional | quadrature
  double prior_width = 1.0;
  std::string grouping = "decay-once";  // decay-once | decay-per-pixel
  double b = 0.5;
  double theta0 = 0.5;
  double theta_goal = 0.0;
  std::vector<std::string> record{"heading", "camera", "statistic", "control"};
  std::uint64_t seed = 0;

  Tick horizon_ticks() const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Both throw Error(ConfigError) with a message naming the offending key.
ScenarioConfig parse_config(const std::string& yaml_text);
ScenarioConfig load_config(const std::string& path);
void validate(const ScenarioConfig& c);
std::string emit_config(const ScenarioConfig& c);

Scene make_scene(const SceneConfig& s);
ClosedLoopParams closed_loop_params(const ScenarioConfig& c);

// Wire names the closed loop records.
const std::vector<std::string>& wire_names();

struct WireCount {
  std::string name;
  std::size_t rows = 0;
};

struct RunSummary {
  double final_heading = 0;
  double goal = 0;
  double abs_error_initial = 0;
  double abs_error_final = 0;
  std::size_t event_count_total = 0;
  std::size_t statistic_event_count = 0;
  std::vector<WireCount> wires;
  double wall_seconds = 0;
};

struct ScenarioRun {
  BehaviorTrace trace;
  RunSummary summary;
};

ScenarioRun run_scenario(const ScenarioConfig& c);

// Writes <wire>.csv for every recorded wire, summary.csv and effective_config.yaml.
void write_run(const std::string& dir, const ScenarioConfig& c, const ScenarioRun& r);

}  // namespace evsheaf
