#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evsheaf/timebase.hpp"

namespace evsheaf {

template <class V>
struct Event {
  Tick t;
  V value;

  friend bool operator==(const Event&, const Event&) = default;
};

// Finite set of timestamped values over [0, length]. At most one event per tick.
template <class V>
class EventStream {
 public:
  using value_type = V;

  EventStream() = default;
  explicit EventStream(Tick length) : length_(length) {
    if (length < 0) throw Error(ErrorCode::InvalidArgument, "negative stream length");
  }
  EventStream(Tick length, std::vector<Event<V>> events) : EventStream(length) {
    events_.reserve(events.size());
    for (auto& e : events) push_back(e.t, std::move(e.value));
  }

  Tick length() const { return length_; }
  const std::vector<Event<V>>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  void push_back(Tick t, V v) {
    if (t < 0 || t > length_)
      throw Error(ErrorCode::OutOfDomain, "event tick " + std::to_string(t) + " outside [0, " +
                                              std::to_string(length_) + "]");
    if (!events_.empty() && events_.back().t >= t)
      throw Error(ErrorCode::InvalidArgument, "event ticks must be strictly increasing");
    events_.push_back({t, std::move(v)});
  }

  // Value at tick t, if an event sits there.
  const V* at(Tick t) const {
    auto it = lower(t);
    if (it != events_.end() && it->t == t) return &it->value;
    return nullptr;
  }

  EventStream restrict(ClosedInterval w) const {
    if (!w.within(length_))
      throw Error(ErrorCode::WindowOutOfRange, "window [" + std::to_string(w.lo) + ", " +
                                                   std::to_string(w.hi) + "] outside stream of length " +
                                                   std::to_string(length_));
    EventStream r(w.length());
    for (auto it = lower(w.lo); it != events_.end() && it->t <= w.hi; ++it)
      r.events_.push_back({it->t - w.lo, it->value});
    return r;
  }

  // Zero-length restriction at the right end.
  const V* right_boundary() const { return at(length_); }
  const V* left_boundary() const { return at(0); }

  // In-place gluing; `next` starts where this stream ends.
  void append(const EventStream& next) {
    if (!compatible_with(next))
      throw Error(ErrorCode::IncompatibleSections, "event streams disagree at the seam");
    Tick shift = length_;
    length_ = checked_add(length_, next.length_);
    auto it = next.events_.begin();
    if (it != next.events_.end() && it->t == 0) ++it;
    for (; it != next.events_.end(); ++it) events_.push_back({it->t + shift, it->value});
  }

  bool compatible_with(const EventStream& next) const {
    const V* a = right_boundary();
    const V* b = next.left_boundary();
    if (!a || !b) return !a && !b;
    return *a == *b;
  }

  friend bool operator==(const EventStream&, const EventStream&) = default;

 private:
  typename std::vector<Event<V>>::const_iterator lower(Tick t) const {
    return std::lower_bound(events_.begin(), events_.end(), t,
                            [](const Event<V>& e, Tick x) { return e.t < x; });
  }

  Tick length_ = 0;
  std::vector<Event<V>> events_;
};

template <class V>
bool check_compatible(const EventStream<V>& a, const EventStream<V>& b) {
  return a.compatible_with(b);
}

template <class V>
EventStream<V> glue(EventStream<V> a, const EventStream<V>& b) {
  a.append(b);
  return a;
}

template <class A, class F>
auto map_values(const EventStream<A>& e, F&& f) {
  using B = std::decay_t<decltype(f(std::declval<const A&>()))>;
  EventStream<B> r(e.length());
  for (const auto& ev : e.events()) r.push_back(ev.t, f(ev.value));
  return r;
}

template <class A, class P>
EventStream<A> filter_events(const EventStream<A>& e, P&& keep) {
  EventStream<A> r(e.length());
  for (const auto& ev : e.events())
    if (keep(ev.value)) r.push_back(ev.t, ev.value);
  return r;
}

// A + B + A x B.
template <class A, class B>
class SumValue {
 public:
  static SumValue left(A a) { return SumValue(std::move(a), std::nullopt); }
  static SumValue right(B b) { return SumValue(std::nullopt, std::move(b)); }
  static SumValue both(A a, B b) { return SumValue(std::move(a), std::move(b)); }

  bool is_left() const { return a_ && !b_; }
  bool is_right() const { return !a_ && b_; }
  bool is_both() const { return a_ && b_; }
  const std::optional<A>& first() const { return a_; }
  const std::optional<B>& second() const { return b_; }

  friend bool operator==(const SumValue&, const SumValue&) = default;

 private:
  SumValue(std::optional<A> a, std::optional<B> b) : a_(std::move(a)), b_(std::move(b)) {}
  std::optional<A> a_;
  std::optional<B> b_;
};

template <class A, class B, class F, class G>
auto map_sum(const SumValue<A, B>& v, F&& f, G&& g) {
  using A2 = std::decay_t<decltype(f(std::declval<const A&>()))>;
  using B2 = std::decay_t<decltype(g(std::declval<const B&>()))>;
  if (v.is_both()) return SumValue<A2, B2>::both(f(*v.first()), g(*v.second()));
  if (v.is_left()) return SumValue<A2, B2>::left(f(*v.first()));
  return SumValue<A2, B2>::right(g(*v.second()));
}

template <class A, class B>
EventStream<SumValue<A, B>> merge(const EventStream<A>& e, const EventStream<B>& e2) {
  if (e.length() != e2.length())
    throw Error(ErrorCode::LengthMismatch, "merge needs equal lengths: " + std::to_string(e.length()) +
                                               " vs " + std::to_string(e2.length()));
  EventStream<SumValue<A, B>> r(e.length());
  auto i = e.events().begin();
  auto j = e2.events().begin();
  while (i != e.events().end() || j != e2.events().end()) {
    if (j == e2.events().end() || (i != e.events().end() && i->t < j->t)) {
      r.push_back(i->t, SumValue<A, B>::left(i->value));
      ++i;
    } else if (i == e.events().end() || j->t < i->t) {
      r.push_back(j->t, SumValue<A, B>::right(j->value));
      ++j;
    } else {
      r.push_back(i->t, SumValue<A, B>::both(i->value, j->value));
      ++i;
      ++j;
    }
  }
  return r;
}

template <class A, class B>
std::pair<EventStream<A>, EventStream<B>> split(const EventStream<SumValue<A, B>>& m) {
  EventStream<A> a(m.length());
  EventStream<B> b(m.length());
  for (const auto& ev : m.events()) {
    if (ev.value.first()) a.push_back(ev.t, *ev.value.first());
    if (ev.value.second()) b.push_back(ev.t, *ev.value.second());
  }
  return {std::move(a), std::move(b)};
}

}  // namespace evsheaf
