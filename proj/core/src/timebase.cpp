#include "evsheaf/timebase.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace evsheaf {

Tick checked_add(Tick a, Tick b) {
  Tick r;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(ErrorCode::Overflow, "tick addition overflows: " + std::to_string(a) + " + " + std::to_string(b));
  return r;
}

Tick checked_sub(Tick a, Tick b) {
  Tick r;
  if (__builtin_sub_overflow(a, b, &r))
    throw Error(ErrorCode::Overflow, "tick subtraction overflows: " + std::to_string(a) + " - " + std::to_string(b));
  return r;
}

Duration::Duration(Tick t) : ticks(t) {
  if (t < 0) throw Error(ErrorCode::InvalidArgument, "negative duration " + std::to_string(t));
}

Translation::Translation(Tick t) : a(t) {
  if (t < 0) throw Error(ErrorCode::InvalidArgument, "negative translation " + std::to_string(t));
}

ClosedInterval::ClosedInterval(Tick lo_, Tick hi_) : lo(lo_), hi(hi_) {
  if (lo < 0 || hi < lo)
    throw Error(ErrorCode::WindowOutOfRange,
                "bad interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

TickScale::TickScale(double spt) : seconds_per_tick(spt) {
  if (!(spt > 0) || !std::isfinite(spt))
    throw Error(ErrorCode::InvalidArgument, "seconds_per_tick must be positive and finite");
}

Tick TickScale::ticks(double seconds) const {
  double t = std::nearbyint(seconds / seconds_per_tick);
  if (!std::isfinite(t) || std::fabs(t) > 9.0e18)
    throw Error(ErrorCode::Overflow, "duration does not fit the tick grid");
  return static_cast<Tick>(t);
}

bool hom_valid(Translation ph, Duration src, Duration dst) {
  Tick end;
  if (__builtin_add_overflow(ph.a, src.ticks, &end)) return false;
  return end <= dst.ticks;
}

Translation ph_compose(Translation first, Translation second) {
  return Translation(checked_add(first.a, second.a));
}

}  // namespace evsheaf
