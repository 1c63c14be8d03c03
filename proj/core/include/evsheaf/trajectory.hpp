#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "evsheaf/timebase.hpp"

namespace evsheaf {

using RealVector = std::vector<double>;

// Piecewise-linear path in R^n over [0, length].
//
// Each piece covers [start, next start] and interpolates between two anchor
// knots that may lie outside that range. Restriction keeps the anchors, so a
// restricted trajectory evaluates bit-for-bit like the original.
class LinearTrajectory {
 public:
  // Constant zero in R^1 over [0, 0].
  LinearTrajectory();
  // Breakpoints 0 = t0 < ... < tk = length, values row-major (dim per breakpoint).
  LinearTrajectory(std::size_t dim, std::vector<Tick> ticks, std::vector<double> values);

  static LinearTrajectory constant(const RealVector& v, Tick length);
  static LinearTrajectory from_points(const std::vector<std::pair<Tick, RealVector>>& pts);

  std::size_t dim() const { return dim_; }
  Tick length() const { return length_; }
  std::size_t piece_count() const { return pieces_.size(); }

  RealVector evaluate(Tick t) const;
  double evaluate(Tick t, std::size_t component) const;
  void evaluate_into(Tick t, double* out) const;
  // Fractional time, used for integrator stages.
  void evaluate_at(double t, double* out) const;

  // Piece starts plus the end tick.
  std::vector<Tick> breakpoints() const;

  LinearTrajectory restrict(ClosedInterval w) const;
  void append(const LinearTrajectory& next);

  // Stack components of several trajectories. Bit-exact when all parts share
  // piece starts and anchor ticks; otherwise resampled at the union of breakpoints.
  static LinearTrajectory concat(const std::vector<LinearTrajectory>& parts);

  // Pick out components [first, first + count).
  LinearTrajectory components(std::size_t first, std::size_t count) const;

  friend bool operator==(const LinearTrajectory& a, const LinearTrajectory& b);

  // Index of the piece whose domain holds t (the later one on a seam).
  std::size_t piece_at(Tick t) const { return piece_index(t); }
  // End tick of piece j's domain.
  Tick piece_end(std::size_t j) const { return j + 1 < pieces_.size() ? pieces_[j + 1].start : length_; }
  Tick piece_start(std::size_t j) const { return pieces_[j].start; }
  // Anchors of piece j; constant pieces report t0 == t1.
  void piece_anchors(std::size_t j, Tick& t0, const double*& v0, Tick& t1, const double*& v1) const {
    const Piece& p = pieces_[j];
    t0 = kt_[p.k0];
    v0 = &kv_[p.k0 * dim_];
    t1 = p.k0 == p.k1 ? t0 : kt_[p.k1];
    v1 = &kv_[p.k1 * dim_];
  }

  // Visit each piece as (start, end, t0, v0, t1, v1); constant pieces have t0 == t1.
  template <class F>
  void for_each_piece(F&& f) const {
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
      const Piece& p = pieces_[j];
      Tick end = j + 1 < pieces_.size() ? pieces_[j + 1].start : length_;
      f(p.start, end, kt_[p.k0], &kv_[p.k0 * dim_], kt_[p.k1], &kv_[p.k1 * dim_]);
    }
  }

 private:
  struct Piece {
    Tick start;
    std::uint32_t k0;
    std::uint32_t k1;
  };

  std::size_t piece_index(Tick t) const;
  std::size_t piece_index(double t) const;
  void eval_piece(const Piece& p, Tick t, double* out) const;
  std::uint32_t push_knot(Tick t, const double* v);
  bool same_anchors(const Piece& a, const LinearTrajectory& other, const Piece& b, Tick shift) const;

  std::size_t dim_ = 1;
  Tick length_ = 0;
  std::vector<Tick> kt_;
  std::vector<double> kv_;
  std::vector<Piece> pieces_;
};

// Right-continuous piecewise-constant path. Steps never repeat the held value.
class StepTrajectory {
 public:
  StepTrajectory();
  StepTrajectory(RealVector initial, Tick length, std::vector<std::pair<Tick, RealVector>> steps = {});

  std::size_t dim() const { return initial_.size(); }
  Tick length() const { return length_; }
  const RealVector& initial() const { return initial_; }
  const std::vector<std::pair<Tick, RealVector>>& steps() const { return steps_; }

  const RealVector& evaluate(Tick t) const;
  // Value held on the open interval just before t (t > 0).
  const RealVector& evaluate_left(Tick t) const;

  StepTrajectory restrict(ClosedInterval w) const;
  void append(const StepTrajectory& next);
  // Add a step at t >= current last step; dropped when the value does not change.
  void push_step(Tick t, RealVector v);

  friend bool operator==(const StepTrajectory&, const StepTrajectory&) = default;

 private:
  RealVector initial_;
  Tick length_ = 0;
  std::vector<std::pair<Tick, RealVector>> steps_;
};

// Largest segment slope in units per second.
double lipschitz_estimate(const LinearTrajectory& tr, const TickScale& scale);

using PointMap = std::function<RealVector(const RealVector&)>;

// Knots at every input breakpoint and every tick t with (t + phase) % step == 0.
LinearTrajectory map_pointwise(const LinearTrajectory& tr, const PointMap& g, Tick step, Tick phase = 0);

}  // namespace evsheaf
