#include "evsheaf/optomotor.hpp"

#include <algorithm>
#include <cmath>

namespace evsheaf {

double wrap_angle(double x) {
  if (x >= -kPi && x < kPi) return x;
  double r = std::fmod(x + kPi, 2 * kPi);
  if (r < 0) r += 2 * kPi;
  r -= kPi;
  return r >= kPi ? -kPi : r;
}

double PixelGeometry::dir(std::size_t i) const {
  return -field_of_view / 2 + (static_cast<double>(i) + 0.5) * field_of_view / static_cast<double>(count);
}

void PixelGeometry::validate() const {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "pixel count must be positive");
  if (!(field_of_view > 0) || field_of_view > 2 * kPi)
    throw Error(ErrorCode::InvalidArgument, "field of view must lie in (0, 2pi]");
}

Scene::Scene(std::vector<double> angles, std::vector<double> values)
    : angles_(std::move(angles)), values_(std::move(values)) {
  if (angles_.size() < 2 || angles_.size() != values_.size())
    throw Error(ErrorCode::InvalidArgument, "scene needs matching angle and value lists of length >= 2");
  if (angles_.front() != -kPi || angles_.back() != kPi)
    throw Error(ErrorCode::InvalidArgument, "scene breakpoints must run from -pi to pi");
  for (std::size_t i = 1; i < angles_.size(); ++i)
    if (!(angles_[i] > angles_[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "scene angles must be strictly increasing");
  for (double v : values_)
    if (!(v >= 0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "reflectance must be finite and >= 0");
  if (values_.front() != values_.back())
    throw Error(ErrorCode::InvalidArgument, "scene must close up: value at -pi differs from value at pi");
}

Scene Scene::uniform(double value) { return Scene({-kPi, kPi}, {value, value}); }

Scene Scene::cosine(double amplitude, std::size_t samples) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "cosine scene needs at least 2 samples");
  std::vector<double> a, v;
  for (std::size_t i = 0; i <= samples; ++i) {
    double phi = i == samples ? kPi : -kPi + 2 * kPi * static_cast<double>(i) / static_cast<double>(samples);
    a.push_back(phi);
    v.push_back(i == samples ? v.front() : 1.0 + amplitude * std::cos(phi));
  }
  return Scene(std::move(a), std::move(v));
}

Scene Scene::two_bar(double depth, double width, double ramp) {
  double lo = 1.0 - depth;
  std::vector<double> a{-kPi}, v{1.0};
  for (double c : {-kPi / 2, kPi / 2}) {
    for (auto [x, y] : {std::pair{c - width / 2 - ramp, 1.0}, std::pair{c - width / 2, lo},
                        std::pair{c + width / 2, lo}, std::pair{c + width / 2 + ramp, 1.0}}) {
      a.push_back(x);
      v.push_back(y);
    }
  }
  a.push_back(kPi);
  v.push_back(1.0);
  return Scene(std::move(a), std::move(v));
}

std::size_t Scene::segment(double phi) const {
  auto it = std::upper_bound(angles_.begin(), angles_.end(), phi);
  std::size_t i = static_cast<std::size_t>(it - angles_.begin());
  return std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, angles_.size() - 2);
}

double Scene::operator()(double phi) const {
  double w = wrap_angle(phi);
  std::size_t i = segment(w);
  double x = (w - angles_[i]) / (angles_[i + 1] - angles_[i]);
  return std::lerp(values_[i], values_[i + 1], x);
}

double Scene::gradient(double phi) const {
  std::size_t i = segment(wrap_angle(phi));
  return (values_[i + 1] - values_[i]) / (angles_[i + 1] - angles_[i]);
}

double sat(double u, double b) {
  if (u > b) return b;
  if (u < -b) return -b;
  return u;
}

namespace {

struct PixelDds {
  double r;
  std::int64_t q;
};

}  // namespace

Machine make_pixel(double contrast, double i0, double i_min) {
  if (!(contrast > 0)) throw Error(ErrorCode::InvalidArgument, "contrast sensitivity must be positive");
  if (!(i0 > 0)) throw Error(ErrorCode::InvalidArgument, "initial intensity must be positive");
  if (!(i_min > 0)) throw Error(ErrorCode::InvalidArgument, "intensity floor must be positive");
  Machine p1 = map_linear_machine("log", 1, 1, [i_min](const double* in, double* out) {
    if (in[0] < 0) throw Error(ErrorCode::NonPositiveIntensity, "negative intensity " + format_real(in[0]));
    out[0] = std::log(std::max(in[0], i_min));
  });
  double a0 = std::log(i0);
  Machine p2 = make_level_crossing(contrast, {a0});
  DdsSpec spec;
  spec.input = ValueType::real();
  spec.output = ValueType::integer();
  spec.initial = PixelDds{a0, 1};
  spec.update = [contrast](const Value& in, const State& st) -> State {
    const auto& s = std::any_cast<const PixelDds&>(st);
    double r2 = in.as_real();
    double d = r2 - s.r;
    // The ladder step is C up to rounding in the level arithmetic.
    double scale = std::max({std::fabs(s.r), std::fabs(r2), contrast});
    double tol = 4 * (std::nextafter(scale, INFINITY) - scale);
    if (d >= contrast - tol) return PixelDds{r2, 1};
    if (d <= -contrast + tol) return PixelDds{r2, -1};
    throw Error(ErrorCode::ThresholdViolation, "pixel level step " + format_real(d) + " is not +-C");
  };
  spec.readout = [](const State& st) { return Value(std::any_cast<const PixelDds&>(st).q); };
  Machine m = series(series(p1, p2), make_dds(std::move(spec)));
  m.name = "pixel";
  return m;
}

Machine make_camera(const PixelGeometry& geom, const std::vector<double>& contrast, const std::vector<double>& i0,
                    double i_min) {
  geom.validate();
  if (contrast.size() != geom.count || i0.size() != geom.count)
    throw Error(ErrorCode::LengthMismatch, "need one contrast and one initial intensity per pixel");
  std::vector<Machine> pixels;
  pixels.reserve(geom.count);
  for (std::size_t i = 0; i < geom.count; ++i) pixels.push_back(make_pixel(contrast[i], i0[i], i_min));
  Machine m = tensor_all(pixels);
  m.name = "camera";
  return m;
}

RegulatorState regulator_update(const RegulatorParams& p, const Joint& firing, Tick t, const RegulatorState& x) {
  if (t < x.t)
    throw Error(ErrorCode::NonMonotoneTime, "regulator event at " + std::to_string(t) + " precedes " +
                                                std::to_string(x.t));
  double sum = 0.0;
  for (const auto& part : firing.parts) {
    if (part.channel >= p.f.size()) throw Error(ErrorCode::InvalidArgument, "firing pixel outside the estimator");
    sum += p.f[part.channel];
  }
  double decayed = std::exp(-p.a * static_cast<double>(t - x.t) * p.seconds_per_tick) * x.statistic;
  double s;
  if (p.decay_per_pixel) {
    s = static_cast<double>(firing.parts.size()) * decayed - (p.kappa / p.a) * sum;
  } else {
    s = decayed - (p.kappa / p.a) * sum;
  }
  if (!std::isfinite(s)) throw Error(ErrorCode::NonFiniteState, "regulator statistic is not finite");
  return {t, s};
}

namespace {

struct RegulatorMachineState {
  RegulatorState x;
  Tick last = -1;
  double last_out = 0.0;
};

}  // namespace

Machine make_regulator(const RegulatorParams& p) {
  if (!(p.a > 0)) throw Error(ErrorCode::InvalidArgument, "regulator decay rate must be positive");
  if (!(p.kappa >= 0) || !std::isfinite(p.kappa)) throw Error(ErrorCode::InvalidArgument, "regulator gain must be >= 0");
  Machine m;
  m.name = "regulator";
  m.input_kind = Kind::events(ValueType::joint(std::vector<ValueType>(p.f.size(), ValueType::integer())));
  m.output_kind = Kind::events(ValueType::real());
  m.lead = 0;
  m.initial = RegulatorMachineState{};
  m.advance = [p](const State& st, Tick t0, const Section& in) {
    RegulatorMachineState s = std::any_cast<const RegulatorMachineState&>(st);
    const Events& e = in.events();
    Events out(e.length());
    for (const auto& ev : e.events()) {
      Tick abs = t0 + ev.t;
      if (abs <= s.last) {
        out.push_back(ev.t, Value(s.last_out));
        continue;
      }
      s.x = regulator_update(p, ev.value.as_joint(), abs, s.x);
      s.last = abs;
      s.last_out = s.x.statistic;
      out.push_back(ev.t, Value(s.last_out));
    }
    return StepResult{std::move(s), std::move(out), {}};
  };
  return m;
}

Machine make_body(const BodyParams& p, Tick h, double seconds_per_tick) {
  if (!(p.b > 0)) throw Error(ErrorCode::InvalidArgument, "saturation bound must be positive");
  CdsSpec spec;
  spec.state_dim = 1;
  spec.input_dim = 1;
  spec.output_dim = 1;
  spec.step_input = true;
  spec.dynamics = [b = p.b](const double* u, const double*, double* d) { d[0] = sat(u[0], b); };
  spec.s0 = {p.theta0};
  spec.h = h;
  spec.seconds_per_tick = seconds_per_tick;
  Machine m = series(make_zoh({0.0}), make_cds(std::move(spec)));
  m.name = "body";
  return m;
}

Machine make_scene_observer(const PixelGeometry& geom, const Scene& scene) {
  geom.validate();
  std::vector<double> dirs;
  for (std::size_t i = 0; i < geom.count; ++i) dirs.push_back(geom.dir(i));
  Machine m = map_linear_machine("observer", 1, geom.count, [dirs, scene](const double* in, double* out) {
    for (std::size_t i = 0; i < dirs.size(); ++i) out[i] = scene(in[0] + dirs[i]);
  });
  return m;
}

std::vector<double> proportional_estimator(const PixelGeometry& geom, double theta_goal) {
  geom.validate();
  std::vector<double> f;
  for (std::size_t i = 0; i < geom.count; ++i) f.push_back(wrap_angle(-geom.dir(i) - theta_goal));
  return f;
}

double expected_estimate(const PixelGeometry& geom, const Scene& scene, const std::vector<double>& f,
                         double theta) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < geom.count; ++i) {
    double phi = theta + geom.dir(i);
    double m = scene(phi);
    if (m <= 0) continue;
    double w = std::fabs(scene.gradient(phi)) / m;
    num += f[i] * w;
    den += w;
  }
  return den > 0 ? num / den : 0.0;
}

std::vector<double> estimator_from_scene(const PixelGeometry& geom, const Scene& scene, double prior_width,
                                         double theta_goal, std::size_t grid) {
  geom.validate();
  if (!(prior_width > 0)) throw Error(ErrorCode::InvalidArgument, "prior width must be positive");
  if (grid < 3) throw Error(ErrorCode::InvalidArgument, "quadrature grid needs at least 3 points");
  std::vector<double> f(geom.count, 0.0);
  bool any = false;
  double step = 2 * prior_width / static_cast<double>(grid - 1);
  for (std::size_t i = 0; i < geom.count; ++i) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < grid; ++k) {
      double off = -prior_width + step * static_cast<double>(k);
      double w = (k == 0 || k + 1 == grid) ? 0.5 : 1.0;
      double g = std::fabs(scene.gradient(theta_goal + off + geom.dir(i)));
      num += w * off * g;
      den += w * g;
    }
    if (den > 0) {
      f[i] = num / den;
      any = true;
    }
  }
  if (!any) throw Error(ErrorCode::DegenerateScene, "scene has no contrast inside the prior window");
  double eta = prior_width / 8;
  double slope = (expected_estimate(geom, scene, f, theta_goal + eta) -
                  expected_estimate(geom, scene, f, theta_goal - eta)) /
                 (2 * eta);
  if (!(slope > 1e-12)) throw Error(ErrorCode::DegenerateScene, "estimator does not respond to heading offsets");
  for (double& x : f) x /= slope;
  return f;
}

Machine build_closed_loop(const ClosedLoopParams& p) {
  if (p.delay < 1) throw Error(ErrorCode::InvalidArgument, "loop delay must be at least one tick");
  Machine body = make_body(p.body, p.integrator_step, p.seconds_per_tick);
  Machine observer = make_scene_observer(p.geometry, p.scene);
  Machine camera = make_camera(p.geometry, p.contrast, p.i0, p.i_min);
  RegulatorParams rp = p.regulator;
  rp.seconds_per_tick = p.seconds_per_tick;
  Machine regulator = make_regulator(rp);
  Kind control = Kind::events(ValueType::real());
  Machine delay = delay_machine(control, p.delay, Events(p.delay));
  Machine chain = series(series(series(series(body, observer, "heading"), camera, "intensity"), regulator, "camera"),
                         delay, "statistic");
  Machine inner = tensor(identity_machine(Kind::events(ValueType::empty())), chain);
  Machine loop = trace(inner, p.delay, "control");
  loop.name = "closed_loop";
  return loop;
}

}  // namespace evsheaf
