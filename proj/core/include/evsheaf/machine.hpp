#pragma once

#include <any>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "evsheaf/value.hpp"

namespace evsheaf {

using State = std::any;

// Lead of a machine whose output never depends on its input.
inline constexpr Tick kUnboundedLead = std::numeric_limits<Tick>::max();

struct Wire {
  std::string name;
  Section section;

  friend bool operator==(const Wire&, const Wire&) = default;
};

struct StepResult {
  State state;
  Section output;
  std::vector<Wire> wires;
};

// One block [block_start, block_start + input.length()] in absolute ticks.
// The output must equal the restriction of the whole-run output to that block,
// so events on a seam show up in both neighbouring blocks.
using Advance = std::function<StepResult(const State& state, Tick block_start, const Section& input)>;

struct Machine {
  std::string name;
  Kind input_kind;
  Kind output_kind;
  Tick lead = 0;
  State initial;
  Advance advance;
};

struct BehaviorTrace {
  Section input;
  Section output;
  std::vector<Wire> wires;

  const Section* wire(const std::string& name) const;
  friend bool operator==(const BehaviorTrace&, const BehaviorTrace&) = default;
};

// Fold advance over blocks of `step` ticks (the last one may be shorter).
BehaviorTrace run(const Machine& m, const Section& input, Tick step);

Machine identity_machine(const Kind& k);

// m1 then m2; the shared wire is recorded under `wire_label` when it is non-empty.
Machine series(const Machine& m1, const Machine& m2, const std::string& wire_label = "");

// Parallel composition. Event ports merge into joint streams, trajectory
// ports concatenate components, mixed ports become products.
Machine tensor(const Machine& m1, const Machine& m2);
Machine tensor_all(const std::vector<Machine>& ms);

// Feed the second output channel back into the second input channel.
// Runs in sub-blocks aligned to multiples of `step`; requires step <= m.lead.
Machine trace(const Machine& m, Tick step, const std::string& loop_label = "loop");

// output(t) = seed(t) for t < epsilon, input(t - epsilon) afterwards.
Machine delay_machine(const Kind& k, Tick epsilon, const Section& seed);

// Seed followed by the input, shifted by the seed length.
Section splice(const Section& seed, const Section& input);

using EventMap = std::function<Value(const Value&)>;
Machine map_events_machine(const std::string& name, const Kind& in, const Kind& out, EventMap f);

using SampleMap = std::function<void(const double* in, double* out)>;
// Stateless map applied at every absolute tick of a linear trajectory.
Machine map_linear_machine(const std::string& name, std::size_t in_dim, std::size_t out_dim, SampleMap f);

// Kind plumbing shared with tensor and trace.
Kind tensor_kind(const std::vector<Kind>& kinds);
std::vector<Section> split_tensor(const Section& s, const std::vector<Kind>& kinds);
Section join_tensor(std::vector<Section> parts, const std::vector<Kind>& kinds, Tick length);

// Concatenate trajectory components; exact when the pieces line up.
LinearTrajectory concat_components(const std::vector<LinearTrajectory>& parts);
StepTrajectory concat_components(const std::vector<StepTrajectory>& parts);

}  // namespace evsheaf
