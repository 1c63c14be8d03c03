#include "evsheaf/sheaf.hpp"

#include <algorithm>
#include <string>

namespace evsheaf {

ClockSection::ClockSection(Tick length, Tick period, std::vector<Tick> ticks)
    : length_(length), period_(period), ticks_(std::move(ticks)) {
  if (period <= 0) throw Error(ErrorCode::InvalidArgument, "clock period must be positive");
  if (length < 0) throw Error(ErrorCode::InvalidArgument, "negative clock length");
  if (ticks_.empty()) return;
  if (ticks_.front() < 0 || ticks_.back() > length)
    throw Error(ErrorCode::OutOfDomain, "clock tick outside [0, length]");
  if (ticks_.front() >= period || length - ticks_.back() >= period)
    throw Error(ErrorCode::InvalidArgument, "clock ticks leave a gap of a full period at an end");
  for (std::size_t i = 1; i < ticks_.size(); ++i)
    if (ticks_[i] - ticks_[i - 1] != period)
      throw Error(ErrorCode::InvalidArgument, "clock ticks are not spaced by the period");
}

ClockSection ClockSection::restrict(ClosedInterval w) const {
  if (!w.within(length_))
    throw Error(ErrorCode::WindowOutOfRange, "clock window outside [0, " + std::to_string(length_) + "]");
  std::vector<Tick> out;
  auto it = std::lower_bound(ticks_.begin(), ticks_.end(), w.lo);
  for (; it != ticks_.end() && *it <= w.hi; ++it) out.push_back(*it - w.lo);
  return ClockSection(w.length(), period_, std::move(out));
}

void ClockSection::append(const ClockSection& next) {
  if (next.period_ != period_ || restrict(ClosedInterval(length_, length_)) != next.restrict(ClosedInterval(0, 0)))
    throw Error(ErrorCode::IncompatibleSections, "clock sections disagree at the seam");
  std::vector<Tick> merged = ticks_;
  for (Tick t : next.ticks_) {
    Tick s = checked_add(t, length_);
    if (merged.empty() || merged.back() < s) merged.push_back(s);
  }
  *this = ClockSection(checked_add(length_, next.length_), period_, std::move(merged));
}

ClockSection clock_generate(Tick period, Tick phase, Tick length) {
  if (period <= 0) throw Error(ErrorCode::InvalidArgument, "clock period must be positive");
  if (phase < 0 || phase >= period)
    throw Error(ErrorCode::InvalidPhase, "phase " + std::to_string(phase) + " not in [0, " +
                                             std::to_string(period) + ")");
  std::vector<Tick> ticks;
  for (Tick t = phase; t <= length; t = checked_add(t, period)) ticks.push_back(t);
  return ClockSection(length, period, std::move(ticks));
}

ClockSection clock_restrict(const ClockSection& c, ClosedInterval w) { return c.restrict(w); }

}  // namespace evsheaf
