#pragma once

#include <string>
#include <vector>

#include "evsheaf/blocks.hpp"

namespace evsheaf {

inline constexpr double kPi = 3.14159265358979323846;

// Wrap to [-pi, pi).
double wrap_angle(double x);

struct PixelGeometry {
  std::size_t count = 64;
  double field_of_view = 2 * kPi;

  // Pixel centers spread evenly over the field of view, centered on 0.
  double dir(std::size_t i) const;
  void validate() const;
};

// Periodic piecewise-linear reflectance on the circle.
class Scene {
 public:
  // Angles strictly increasing from -pi to pi; first and last value equal.
  Scene(std::vector<double> angles, std::vector<double> values);

  static Scene uniform(double value = 1.0);
  static Scene cosine(double amplitude, std::size_t samples = 256);
  static Scene two_bar(double depth, double width = 0.5, double ramp = 0.1);

  double operator()(double phi) const;
  // Slope of the segment holding phi (right derivative).
  double gradient(double phi) const;

  const std::vector<double>& angles() const { return angles_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t segment(double phi) const;

  std::vector<double> angles_;
  std::vector<double> values_;
};

// Clamp to [-b, b].
double sat(double u, double b);

// log, level crossing at C from log(I0), then polarity from the level step.
Machine make_pixel(double contrast, double i0, double i_min = 1e-6);

// Tensor of pixels; each event carries the firing set with polarities.
Machine make_camera(const PixelGeometry& geom, const std::vector<double>& contrast, const std::vector<double>& i0,
                    double i_min = 1e-6);

struct RegulatorParams {
  double a = 1.0;
  double kappa = 1.0;
  std::vector<double> f;  // per pixel
  double seconds_per_tick = 1e-6;
  // Apply the decay term once per firing pixel instead of once per event.
  bool decay_per_pixel = false;
};

struct RegulatorState {
  Tick t = 0;
  double statistic = 0.0;

  friend bool operator==(const RegulatorState&, const RegulatorState&) = default;
};

RegulatorState regulator_update(const RegulatorParams& p, const Joint& firing, Tick t, const RegulatorState& x);

Machine make_regulator(const RegulatorParams& p);

struct BodyParams {
  double b = 1.0;
  double theta0 = 0.0;
  double theta_goal = 0.0;
};

// Zero-order hold of the control (starting at 0), then heading' = sat_b(u).
Machine make_body(const BodyParams& p, Tick h, double seconds_per_tick);

// Heading -> per-pixel intensity m(theta + dir(s)).
Machine make_scene_observer(const PixelGeometry& geom, const Scene& scene);

// f(s) = wrap(-dir(s) - goal): the offset that would put a feature seen at
// dir(s) straight at the goal heading.
std::vector<double> proportional_estimator(const PixelGeometry& geom, double theta_goal);

// Posterior-mean estimate of theta - goal given an event at each pixel, under
// a uniform prior of half-width prior_width around the goal and event
// likelihood |m'(theta + dir)|; rescaled so the event-weighted mean matches
// theta - goal to first order at the goal.
std::vector<double> estimator_from_scene(const PixelGeometry& geom, const Scene& scene, double prior_width,
                                         double theta_goal, std::size_t grid = 257);

// Event-weighted mean of f at heading theta, with event odds |d log m| per pixel.
double expected_estimate(const PixelGeometry& geom, const Scene& scene, const std::vector<double>& f,
                         double theta);

struct ClosedLoopParams {
  double seconds_per_tick = 1e-4;
  Tick integrator_step = 1;
  Tick delay = 10;
  PixelGeometry geometry;
  std::vector<double> contrast;
  std::vector<double> i0;
  double i_min = 1e-6;
  Scene scene = Scene::uniform();
  RegulatorParams regulator;
  BodyParams body;
};

// trace over the control wire of
//   (empty identity) x (body ; observer ; camera ; regulator ; delay)
// Wires: control, heading, intensity, camera, statistic.
Machine build_closed_loop(const ClosedLoopParams& p);

}  // namespace evsheaf
