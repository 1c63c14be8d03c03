#pragma once

#include <cstdint>

#include "evsheaf/error.hpp"

namespace evsheaf {

// All time is integer ticks. Seconds only appear at I/O boundaries.
using Tick = std::int64_t;

// Throw Overflow instead of wrapping.
Tick checked_add(Tick a, Tick b);
Tick checked_sub(Tick a, Tick b);

struct Duration {
  Tick ticks = 0;

  Duration() = default;
  explicit Duration(Tick t);

  friend bool operator==(Duration, Duration) = default;
};

// Ph_a: translation by a ticks.
struct Translation {
  Tick a = 0;

  Translation() = default;
  explicit Translation(Tick t);

  friend bool operator==(Translation, Translation) = default;
};

struct ClosedInterval {
  Tick lo = 0;
  Tick hi = 0;

  ClosedInterval() = default;
  ClosedInterval(Tick lo_, Tick hi_);

  Tick length() const { return hi - lo; }
  bool contains(Tick t) const { return lo <= t && t <= hi; }
  bool within(Tick len) const { return hi <= len; }

  friend bool operator==(ClosedInterval, ClosedInterval) = default;
};

struct TickScale {
  double seconds_per_tick = 1e-6;

  TickScale() = default;
  explicit TickScale(double spt);

  double seconds(Tick t) const { return static_cast<double>(t) * seconds_per_tick; }
  // Nearest tick for a duration given in seconds.
  Tick ticks(double seconds) const;
};

// True iff Ph_a is a morphism src -> dst.
bool hom_valid(Translation ph, Duration src, Duration dst);

Translation ph_compose(Translation first, Translation second);

}  // namespace evsheaf
