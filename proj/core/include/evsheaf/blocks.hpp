#pragma once

#include <functional>
#include <optional>

#include "evsheaf/machine.hpp"
#include "evsheaf/sheaf.hpp"

namespace evsheaf {

struct SamplerConfig {
  Tick period = 1;
  Tick phase = 0;
  // Sample a step trajectory instead of a linear one.
  bool step_input = false;
};

// Samples the input at every tick of a fixed-phase global clock.
Machine make_sampler(const SamplerConfig& cfg, std::size_t dim);

// Emits the next ladder level a +- L at the first tick the input is at
// distance >= L from the current reference, then rescans from the next tick.
Machine make_level_crossing(double level, RealVector a0);

// First tick in [from, tr.length()] at distance >= level from `ref`.
struct Crossing {
  Tick tick;
  RealVector value;
};
std::optional<Crossing> find_crossing(const LinearTrajectory& tr, Tick from, const RealVector& ref, double level);

Machine make_zoh(RealVector a0);

Machine make_filter(const Kind& kind, std::function<bool(const Value&)> keep);

struct DdsSpec {
  ValueType input;
  ValueType output;
  State initial;
  std::function<State(const Value& input, const State& state)> update;
  std::function<Value(const State& state)> readout;
  // Emit the readout of the state before the update instead of after it.
  bool pre_update_readout = false;
};

Machine make_dds(DdsSpec spec);

struct CdsSpec {
  std::size_t state_dim = 1;
  std::size_t input_dim = 1;
  std::size_t output_dim = 1;
  // Input arrives as a step trajectory instead of a linear one.
  bool step_input = false;
  // ds/dt (per second) from (input, state).
  std::function<void(const double* input, const double* state, double* deriv)> dynamics;
  // Output from state; identity when empty.
  std::function<void(const double* state, double* out)> readout;
  RealVector s0;
  Tick h = 1;
  double seconds_per_tick = 1e-6;
};

// Fixed-step RK4 on the global grid {0, h, 2h, ...}; output knots at every
// tick, off-grid ticks come from a partial step out of the last grid state.
Machine make_cds(CdsSpec spec);

}  // namespace evsheaf
