#pragma once

#include <vector>

#include "evsheaf/timebase.hpp"

namespace evsheaf {

// Anything with length(), restrict(ClosedInterval) and an in-place append().
template <class S>
concept SectionLike = requires(S s, const S& cs, ClosedInterval w) {
  { cs.length() } -> std::convertible_to<Tick>;
  { cs.restrict(w) } -> std::same_as<S>;
  s.append(cs);
};

template <SectionLike S>
bool sections_compatible(const S& a, const S& b) {
  return a.restrict(ClosedInterval(a.length(), a.length())) == b.restrict(ClosedInterval(0, 0));
}

template <SectionLike S>
S glue_sections(S a, const S& b) {
  a.append(b);
  return a;
}

// Law checks shared by every section type.
template <SectionLike S>
bool glue_round_trip(const S& a, const S& b) {
  S g = glue_sections(a, b);
  Tick la = a.length();
  return g.length() == la + b.length() && g.restrict(ClosedInterval(0, la)) == a &&
         g.restrict(ClosedInterval(la, la + b.length())) == b;
}

// s|[lo1,hi1] then |[lo2,hi2] (relative) equals s|[lo1+lo2, lo1+hi2].
template <SectionLike S>
bool restrict_functorial(const S& s, ClosedInterval outer, ClosedInterval inner) {
  ClosedInterval combined(outer.lo + inner.lo, outer.lo + inner.hi);
  return s.restrict(outer).restrict(inner) == s.restrict(combined);
}

template <SectionLike S>
bool restrict_identity(const S& s) {
  return s.restrict(ClosedInterval(0, s.length())) == s;
}

// Clock_d section: ticks spaced d apart, first < d, last within d of the end.
class ClockSection {
 public:
  ClockSection(Tick length, Tick period, std::vector<Tick> ticks);

  Tick length() const { return length_; }
  Tick period() const { return period_; }
  const std::vector<Tick>& ticks() const { return ticks_; }

  ClockSection restrict(ClosedInterval w) const;
  void append(const ClockSection& next);

  friend bool operator==(const ClockSection&, const ClockSection&) = default;

 private:
  Tick length_;
  Tick period_;
  std::vector<Tick> ticks_;
};

ClockSection clock_generate(Tick period, Tick phase, Tick length);
ClockSection clock_restrict(const ClockSection& c, ClosedInterval w);

}  // namespace evsheaf
