#include "evsheaf/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "evsheaf/csv.hpp"

namespace evsheaf {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

template <class T>
T scalar(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    config_error("bad value for '" + key + "'");
  }
}

template <class T>
void read(const YAML::Node& parent, const char* key, T& out, const std::string& prefix) {
  YAML::Node n = parent[key];
  if (n) out = scalar<T>(n, prefix + key);
}

std::vector<double> real_list(const YAML::Node& n, const std::string& key) {
  std::vector<double> out;
  if (n.IsScalar()) {
    out.push_back(scalar<double>(n, key));
  } else if (n.IsSequence()) {
    for (const auto& x : n) out.push_back(scalar<double>(x, key));
  } else {
    config_error("'" + key + "' must be a number or a list of numbers");
  }
  return out;
}

void reject_unknown(const YAML::Node& n, const std::set<std::string>& known, const std::string& where) {
  if (!n.IsMap()) config_error("'" + where + "' must be a mapping");
  for (const auto& kv : n) {
    auto k = kv.first.as<std::string>();
    if (!known.count(k)) config_error("unknown key '" + (where.empty() ? k : where + "." + k) + "'");
  }
}

}  // namespace

Tick ScenarioConfig::horizon_ticks() const { return static_cast<Tick>(std::llround(horizon / seconds_per_tick)); }

ScenarioConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    config_error(std::string("yaml: ") + e.what());
  }
  if (!root || !root.IsMap()) config_error("config must be a mapping");
  reject_unknown(root,
                 {"version", "seconds_per_tick", "horizon", "integrator_step", "delay", "pixels", "camera", "scene",
                  "regulator", "body", "record", "seed"},
                 "");
  ScenarioConfig c;
  if (!root["version"]) config_error("missing 'version'");
  c.version = scalar<int>(root["version"], "version");
  if (c.version != 1) config_error("unsupported config version " + std::to_string(c.version));
  read(root, "seconds_per_tick", c.seconds_per_tick, "");
  read(root, "horizon", c.horizon, "");
  read(root, "integrator_step", c.integrator_step, "");
  read(root, "delay", c.delay, "");
  read(root, "seed", c.seed, "");
  if (auto px = root["pixels"]) {
    reject_unknown(px, {"count", "field_of_view"}, "pixels");
    read(px, "count", c.pixel_count, "pixels.");
    read(px, "field_of_view", c.field_of_view, "pixels.");
  }
  if (auto cam = root["camera"]) {
    reject_unknown(cam, {"contrast", "i0", "i_min"}, "camera");
    if (cam["contrast"]) c.contrast = real_list(cam["contrast"], "camera.contrast");
    if (cam["i0"]) c.i0 = real_list(cam["i0"], "camera.i0");
    read(cam, "i_min", c.i_min, "camera.");
  }
  if (auto sc = root["scene"]) {
    reject_unknown(sc, {"preset", "amplitude", "samples", "width", "ramp", "breakpoints"}, "scene");
    read(sc, "preset", c.scene.preset, "scene.");
    read(sc, "amplitude", c.scene.amplitude, "scene.");
    read(sc, "samples", c.scene.samples, "scene.");
    read(sc, "width", c.scene.width, "scene.");
    read(sc, "ramp", c.scene.ramp, "scene.");
    if (auto bp = sc["breakpoints"]) {
      if (!bp.IsSequence()) config_error("'scene.breakpoints' must be a list of [angle, value] pairs");
      for (const auto& p : bp) {
        if (!p.IsSequence() || p.size() != 2) config_error("'scene.breakpoints' entries must be [angle, value]");
        c.scene.breakpoints.emplace_back(scalar<double>(p[0], "scene.breakpoints"),
                                         scalar<double>(p[1], "scene.breakpoints"));
      }
    }
  }
  if (auto rg = root["regulator"]) {
    reject_unknown(rg, {"a", "kappa", "estimator", "prior_width", "grouping"}, "regulator");
    read(rg, "a", c.a, "regulator.");
    read(rg, "kappa", c.kappa, "regulator.");
    read(rg, "estimator", c.estimator, "regulator.");
    read(rg, "prior_width", c.prior_width, "regulator.");
    read(rg, "grouping", c.grouping, "regulator.");
  }
  if (auto bd = root["body"]) {
    reject_unknown(bd, {"b", "theta0", "theta_goal"}, "body");
    read(bd, "b", c.b, "body.");
    read(bd, "theta0", c.theta0, "body.");
    read(bd, "theta_goal", c.theta_goal, "body.");
  }
  if (auto rec = root["record"]) {
    if (!rec.IsSequence()) config_error("'record' must be a list of wire names");
    c.record.clear();
    for (const auto& w : rec) c.record.push_back(scalar<std::string>(w, "record"));
  }
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) config_error("cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

void validate(const ScenarioConfig& c) {
  auto positive = [](double v, const char* key) {
    if (!(v > 0) || !std::isfinite(v)) config_error(std::string("'") + key + "' must be positive");
  };
  positive(c.seconds_per_tick, "seconds_per_tick");
  positive(c.horizon, "horizon");
  if (c.horizon_ticks() < 1) config_error("'horizon' must cover at least one tick");
  if (c.integrator_step < 1) config_error("'integrator_step' must be at least one tick");
  if (c.delay < 1) config_error("'delay' must be at least one tick");
  if (c.pixel_count < 1) config_error("'pixels.count' must be positive");
  positive(c.field_of_view, "pixels.field_of_view");
  if (c.field_of_view > 2 * kPi + 1e-12) config_error("'pixels.field_of_view' must not exceed 2*pi");
  auto per_pixel = [&](const std::vector<double>& v, const char* key) {
    if (v.size() != 1 && v.size() != c.pixel_count)
      config_error(std::string("'") + key + "' needs one value or one per pixel");
    for (double x : v) positive(x, key);
  };
  per_pixel(c.contrast, "camera.contrast");
  per_pixel(c.i0, "camera.i0");
  positive(c.i_min, "camera.i_min");
  positive(c.a, "regulator.a");
  if (!(c.kappa >= 0) || !std::isfinite(c.kappa)) config_error("'regulator.kappa' must be finite and >= 0");
  if (c.estimator != "proportional" && c.estimator != "quadrature")
    config_error("'regulator.estimator' must be proportional or quadrature");
  positive(c.prior_width, "regulator.prior_width");
  if (c.grouping != "decay-once" && c.grouping != "decay-per-pixel")
    config_error("'regulator.grouping' must be decay-once or decay-per-pixel");
  positive(c.b, "body.b");
  if (!std::isfinite(c.theta0) || !std::isfinite(c.theta_goal)) config_error("'body' angles must be finite");
  const auto& known = wire_names();
  for (const auto& w : c.record)
    if (std::find(known.begin(), known.end(), w) == known.end()) config_error("unknown wire '" + w + "' in record");
  try {
    make_scene(c.scene);
  } catch (const Error& e) {
    config_error(std::string("scene: ") + e.what());
  }
}

namespace {

YAML::Node real_node(double x) {
  YAML::Node n;
  n = format_real(x);
  return n;
}

YAML::Node real_list_node(const std::vector<double>& v) {
  if (v.size() == 1) return real_node(v[0]);
  YAML::Node n(YAML::NodeType::Sequence);
  for (double x : v) n.push_back(real_node(x));
  n.SetStyle(YAML::EmitterStyle::Flow);
  return n;
}

}  // namespace

std::string emit_config(const ScenarioConfig& c) {
  YAML::Node root;
  root["version"] = c.version;
  root["seconds_per_tick"] = real_node(c.seconds_per_tick);
  root["horizon"] = real_node(c.horizon);
  root["integrator_step"] = c.integrator_step;
  root["delay"] = c.delay;
  root["pixels"]["count"] = c.pixel_count;
  root["pixels"]["field_of_view"] = real_node(c.field_of_view);
  root["camera"]["contrast"] = real_list_node(c.contrast);
  root["camera"]["i0"] = real_list_node(c.i0);
  root["camera"]["i_min"] = real_node(c.i_min);
  YAML::Node sc;
  sc["preset"] = c.scene.preset;
  sc["amplitude"] = real_node(c.scene.amplitude);
  sc["samples"] = c.scene.samples;
  sc["width"] = real_node(c.scene.width);
  sc["ramp"] = real_node(c.scene.ramp);
  if (!c.scene.breakpoints.empty()) {
    YAML::Node bp(YAML::NodeType::Sequence);
    for (const auto& [ang, val] : c.scene.breakpoints) {
      YAML::Node p(YAML::NodeType::Sequence);
      p.push_back(real_node(ang));
      p.push_back(real_node(val));
      p.SetStyle(YAML::EmitterStyle::Flow);
      bp.push_back(p);
    }
    sc["breakpoints"] = bp;
  }
  root["scene"] = sc;
  root["regulator"]["a"] = real_node(c.a);
  root["regulator"]["kappa"] = real_node(c.kappa);
  root["regulator"]["estimator"] = c.estimator;
  root["regulator"]["prior_width"] = real_node(c.prior_width);
  root["regulator"]["grouping"] = c.grouping;
  root["body"]["b"] = real_node(c.b);
  root["body"]["theta0"] = real_node(c.theta0);
  root["body"]["theta_goal"] = real_node(c.theta_goal);
  YAML::Node rec(YAML::NodeType::Sequence);
  for (const auto& w : c.record) rec.push_back(w);
  rec.SetStyle(YAML::EmitterStyle::Flow);
  root["record"] = rec;
  root["seed"] = c.seed;
  YAML::Emitter out;
  out << root;
  return std::string(out.c_str()) + "\n";
}

Scene make_scene(const SceneConfig& s) {
  if (s.preset == "uniform") return Scene::uniform(s.amplitude);
  if (s.preset == "cosine") return Scene::cosine(s.amplitude, s.samples);
  if (s.preset == "two-bar") return Scene::two_bar(s.amplitude, s.width, s.ramp);
  if (s.preset == "breakpoints") {
    std::vector<double> a, v;
    for (const auto& [ang, val] : s.breakpoints) {
      a.push_back(ang);
      v.push_back(val);
    }
    return Scene(std::move(a), std::move(v));
  }
  throw Error(ErrorCode::ConfigError, "unknown scene preset '" + s.preset + "'");
}

ClosedLoopParams closed_loop_params(const ScenarioConfig& c) {
  ClosedLoopParams p;
  p.seconds_per_tick = c.seconds_per_tick;
  p.integrator_step = c.integrator_step;
  p.delay = c.delay;
  p.geometry = PixelGeometry{c.pixel_count, c.field_of_view};
  auto expand = [&](const std::vector<double>& v) {
    return v.size() == 1 ? std::vector<double>(c.pixel_count, v[0]) : v;
  };
  p.contrast = expand(c.contrast);
  p.i0 = expand(c.i0);
  p.i_min = c.i_min;
  p.scene = make_scene(c.scene);
  p.regulator.a = c.a;
  p.regulator.kappa = c.kappa;
  p.regulator.seconds_per_tick = c.seconds_per_tick;
  p.regulator.decay_per_pixel = c.grouping == "decay-per-pixel";
  p.regulator.f = c.estimator == "proportional"
                      ? proportional_estimator(p.geometry, c.theta_goal)
                      : estimator_from_scene(p.geometry, p.scene, c.prior_width, c.theta_goal);
  p.body = BodyParams{c.b, c.theta0, c.theta_goal};
  return p;
}

const std::vector<std::string>& wire_names() {
  static const std::vector<std::string> names{"control", "heading", "intensity", "camera", "statistic"};
  return names;
}

ScenarioRun run_scenario(const ScenarioConfig& c) {
  auto t0 = std::chrono::steady_clock::now();
  ClosedLoopParams p = closed_loop_params(c);
  Machine loop = build_closed_loop(p);
  Tick horizon = c.horizon_ticks();
  ScenarioRun r;
  r.trace = run(loop, Events(horizon), horizon);
  const Section* heading = r.trace.wire("heading");
  const Section* camera = r.trace.wire("camera");
  const Section* statistic = r.trace.wire("statistic");
  if (!heading || !camera || !statistic) throw Error(ErrorCode::InvalidArgument, "closed loop is missing a wire");
  RunSummary& s = r.summary;
  s.goal = c.theta_goal;
  s.final_heading = heading->linear().evaluate(horizon, 0);
  s.abs_error_initial = std::fabs(wrap_angle(c.theta0 - c.theta_goal));
  s.abs_error_final = std::fabs(wrap_angle(s.final_heading - c.theta_goal));
  s.event_count_total = csv_row_count(*camera);
  s.statistic_event_count = csv_row_count(*statistic);
  for (const auto& w : wire_names()) s.wires.push_back({w, csv_row_count(*r.trace.wire(w))});
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void write_run(const std::string& dir, const ScenarioConfig& c, const ScenarioRun& r) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  TickScale scale(c.seconds_per_tick);
  for (const auto& w : c.record) write_csv_file((fs::path(dir) / (w + ".csv")).string(), *r.trace.wire(w), scale);
  {
    std::ofstream os(fs::path(dir) / "summary.csv", std::ios::binary);
    const RunSummary& s = r.summary;
    os << "final_heading,goal,abs_error_initial,abs_error_final,event_count_total,statistic_event_count\n";
    os << format_real(s.final_heading) << ',' << format_real(s.goal) << ',' << format_real(s.abs_error_initial) << ','
       << format_real(s.abs_error_final) << ',' << s.event_count_total << ',' << s.statistic_event_count << '\n';
    if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write summary.csv");
  }
  std::ofstream os(fs::path(dir) / "effective_config.yaml", std::ios::binary);
  os << emit_config(c);
  if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write effective_config.yaml");
}

}  // namespace evsheaf
