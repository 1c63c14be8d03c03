#include "evsheaf/machine.hpp"

#include <cmath>
#include <optional>
#include <algorithm>

namespace evsheaf {

const Section* BehaviorTrace::wire(const std::string& name) const {
  for (const auto& w : wires)
    if (w.name == name) return &w.section;
  return nullptr;
}

namespace {

void append_wires(std::vector<Wire>& acc, const std::vector<Wire>& next) {
  if (acc.size() != next.size()) throw Error(ErrorCode::IncompatibleSections, "wire count changed between blocks");
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (acc[i].name != next[i].name)
      throw Error(ErrorCode::IncompatibleSections, "wire order changed between blocks");
    acc[i].section.append(next[i].section);
  }
}

bool all_tag(const std::vector<Kind>& kinds, Kind::Tag tag) {
  return std::all_of(kinds.begin(), kinds.end(), [&](const Kind& k) { return k.tag == tag; });
}

Tick min_lead(Tick a, Tick b) { return std::min(a, b); }

}  // namespace

BehaviorTrace run(const Machine& m, const Section& input, Tick step) {
  if (step < 1) throw Error(ErrorCode::InvalidArgument, "run step must be at least one tick");
  require_kind(input, m.input_kind, m.name.c_str());
  Tick len = input.length();
  BehaviorTrace trace{input, Section(), {}};
  State state = m.initial;
  bool first = true;
  Tick s = 0;
  do {
    Tick e = std::min(len, s > len - step ? len : s + step);
    StepResult r = m.advance(state, s, input.restrict(ClosedInterval(s, e)));
    if (r.output.length() != e - s)
      throw Error(ErrorCode::LengthMismatch, m.name + ": block output has the wrong length");
    state = std::move(r.state);
    if (first) {
      trace.output = std::move(r.output);
      trace.wires = std::move(r.wires);
      first = false;
    } else {
      trace.output.append(r.output);
      append_wires(trace.wires, r.wires);
    }
    s = e;
  } while (s < len);
  return trace;
}

Machine identity_machine(const Kind& k) {
  Machine m;
  m.name = "identity";
  m.input_kind = k;
  m.output_kind = k;
  // Over the empty value type there is only one section per length.
  bool trivial = k.tag == Kind::Tag::Events && k.value.tag == ValueType::Tag::Empty;
  m.lead = trivial ? kUnboundedLead : 0;
  m.initial = std::monostate{};
  m.advance = [](const State& st, Tick, const Section& in) { return StepResult{st, in, {}}; };
  return m;
}

namespace {

struct PairState {
  State a;
  State b;
};

}  // namespace

Machine series(const Machine& m1, const Machine& m2, const std::string& wire_label) {
  if (!(m1.output_kind == m2.input_kind))
    throw Error(ErrorCode::KindMismatch, "series: " + m1.name + " emits " + to_string(m1.output_kind) + " but " +
                                             m2.name + " expects " + to_string(m2.input_kind));
  Machine m;
  m.name = m1.name + ";" + m2.name;
  m.input_kind = m1.input_kind;
  m.output_kind = m2.output_kind;
  m.lead = m2.lead;
  m.initial = PairState{m1.initial, m2.initial};
  m.advance = [a1 = m1.advance, a2 = m2.advance, wire_label](const State& st, Tick t, const Section& in) {
    const auto& ps = std::any_cast<const PairState&>(st);
    StepResult r1 = a1(ps.a, t, in);
    StepResult r2 = a2(ps.b, t, r1.output);
    StepResult out;
    out.wires = std::move(r1.wires);
    if (!wire_label.empty()) out.wires.push_back({wire_label, r1.output});
    for (auto& w : r2.wires) out.wires.push_back(std::move(w));
    out.output = std::move(r2.output);
    out.state = PairState{std::move(r1.state), std::move(r2.state)};
    return out;
  };
  return m;
}

Kind tensor_kind(const std::vector<Kind>& kinds) {
  if (kinds.empty()) throw Error(ErrorCode::InvalidArgument, "tensor of nothing");
  if (all_tag(kinds, Kind::Tag::Events)) {
    std::vector<ValueType> vs;
    for (const auto& k : kinds) vs.push_back(k.value);
    return Kind::events(ValueType::joint(std::move(vs)));
  }
  if (all_tag(kinds, Kind::Tag::Linear) || all_tag(kinds, Kind::Tag::Step)) {
    std::size_t n = 0;
    for (const auto& k : kinds) n += k.dim;
    return kinds.front().tag == Kind::Tag::Linear ? Kind::linear(n) : Kind::step(n);
  }
  return Kind::product(kinds);
}

std::vector<Section> split_tensor(const Section& s, const std::vector<Kind>& kinds) {
  std::vector<Section> out;
  Tick len = s.length();
  if (all_tag(kinds, Kind::Tag::Events)) {
    std::vector<Events> parts(kinds.size(), Events(len));
    for (const auto& e : s.events().events())
      for (const auto& p : e.value.as_joint().parts) parts.at(p.channel).push_back(e.t, p.value);
    for (auto& p : parts) out.emplace_back(std::move(p));
    return out;
  }
  if (all_tag(kinds, Kind::Tag::Linear)) {
    std::size_t off = 0;
    for (const auto& k : kinds) {
      out.emplace_back(s.linear().components(off, k.dim));
      off += k.dim;
    }
    return out;
  }
  if (all_tag(kinds, Kind::Tag::Step)) {
    const StepTrajectory& st = s.step();
    std::size_t off = 0;
    for (const auto& k : kinds) {
      auto slice = [&](const RealVector& v) { return RealVector(v.begin() + off, v.begin() + off + k.dim); };
      StepTrajectory part(slice(st.initial()), len);
      for (const auto& [t, v] : st.steps()) part.push_step(t, slice(v));
      out.emplace_back(std::move(part));
      off += k.dim;
    }
    return out;
  }
  return s.product().parts;
}

Section join_tensor(std::vector<Section> parts, const std::vector<Kind>& kinds, Tick length) {
  if (all_tag(kinds, Kind::Tag::Events)) {
    // k-way merge by tick; channels ascend inside each joint value.
    std::vector<std::size_t> pos(parts.size(), 0);
    Events out(length);
    for (;;) {
      Tick next = kUnboundedLead;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& ev = parts[i].events().events();
        if (pos[i] < ev.size()) next = std::min(next, ev[pos[i]].t);
      }
      if (next == kUnboundedLead) break;
      Joint j;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& ev = parts[i].events().events();
        if (pos[i] < ev.size() && ev[pos[i]].t == next) j.parts.push_back({i, ev[pos[i]++].value});
      }
      out.push_back(next, Value(std::move(j)));
    }
    return out;
  }
  if (all_tag(kinds, Kind::Tag::Linear)) {
    std::vector<LinearTrajectory> ls;
    for (auto& p : parts) ls.push_back(std::move(p.linear()));
    return concat_components(ls);
  }
  if (all_tag(kinds, Kind::Tag::Step)) {
    std::vector<StepTrajectory> ss;
    for (auto& p : parts) ss.push_back(std::move(p.step()));
    return concat_components(ss);
  }
  return ProductSection{std::move(parts)};
}

LinearTrajectory concat_components(const std::vector<LinearTrajectory>& parts) {
  return LinearTrajectory::concat(parts);
}

StepTrajectory concat_components(const std::vector<StepTrajectory>& parts) {
  if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to concatenate");
  Tick len = parts.front().length();
  RealVector init;
  std::vector<Tick> ticks;
  for (const auto& p : parts) {
    if (p.length() != len) throw Error(ErrorCode::LengthMismatch, "concatenated trajectories differ in length");
    init.insert(init.end(), p.initial().begin(), p.initial().end());
    for (const auto& s : p.steps()) ticks.push_back(s.first);
  }
  std::sort(ticks.begin(), ticks.end());
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  StepTrajectory out(init, len);
  for (Tick t : ticks) {
    RealVector v;
    for (const auto& p : parts) {
      const auto& x = p.evaluate(t);
      v.insert(v.end(), x.begin(), x.end());
    }
    out.push_step(t, std::move(v));
  }
  return out;
}

Machine tensor(const Machine& m1, const Machine& m2) { return tensor_all({m1, m2}); }

Machine tensor_all(const std::vector<Machine>& ms) {
  if (ms.empty()) throw Error(ErrorCode::InvalidArgument, "tensor of no machines");
  std::vector<Kind> ins, outs;
  std::vector<Advance> advances;
  std::vector<State> states;
  Machine m;
  m.lead = kUnboundedLead;
  for (const auto& x : ms) {
    ins.push_back(x.input_kind);
    outs.push_back(x.output_kind);
    advances.push_back(x.advance);
    states.push_back(x.initial);
    m.lead = min_lead(m.lead, x.lead);
    m.name += (m.name.empty() ? "(" : "|") + x.name;
  }
  m.name += ")";
  m.input_kind = tensor_kind(ins);
  m.output_kind = tensor_kind(outs);
  m.initial = states;
  m.advance = [ins, outs, advances](const State& st, Tick t, const Section& in) {
    const auto& ss = std::any_cast<const std::vector<State>&>(st);
    std::vector<Section> parts = split_tensor(in, ins);
    std::vector<Section> results;
    std::vector<State> next;
    StepResult out;
    results.reserve(parts.size());
    next.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      StepResult r = advances[i](ss[i], t, parts[i]);
      next.push_back(std::move(r.state));
      results.push_back(std::move(r.output));
      for (auto& w : r.wires) out.wires.push_back(std::move(w));
    }
    out.output = join_tensor(std::move(results), outs, in.length());
    out.state = std::move(next);
    return out;
  };
  return m;
}

namespace {

// Split a two-channel port into (first, loop) parts.
std::pair<Section, Section> split_loop(const Section& s, const Kind& k) {
  if (k.tag == Kind::Tag::Product) {
    const auto& p = s.product().parts;
    return {p.at(0), p.at(1)};
  }
  auto parts = split_tensor(s, {Kind::events(k.value.parts.at(0)), Kind::events(k.value.parts.at(1))});
  return {std::move(parts[0]), std::move(parts[1])};
}

Section join_loop(Section first, Section loop, const Kind& k) {
  Tick len = first.length();
  if (k.tag == Kind::Tag::Product) return ProductSection{{std::move(first), std::move(loop)}};
  std::vector<Kind> ks{Kind::events(k.value.parts.at(0)), Kind::events(k.value.parts.at(1))};
  return join_tensor({std::move(first), std::move(loop)}, ks, len);
}

std::pair<Kind, Kind> loop_kinds(const Kind& k, const char* which) {
  if (k.tag == Kind::Tag::Product && k.parts.size() == 2) return {k.parts[0], k.parts[1]};
  if (k.tag == Kind::Tag::Events && k.value.tag == ValueType::Tag::Joint && k.value.parts.size() == 2)
    return {Kind::events(k.value.parts[0]), Kind::events(k.value.parts[1])};
  throw Error(ErrorCode::KindMismatch, std::string("trace: ") + which + " kind " + to_string(k) +
                                           " is not a two-channel product");
}

// Zero-length section p held constant over [0, len].
Section hold(const Section& p, Tick len) {
  if (p.is_events()) {
    Events e(len);
    if (const Value* v = p.events().at(0)) e.push_back(0, *v);
    return e;
  }
  if (p.is_linear()) return LinearTrajectory::constant(p.linear().evaluate(0), len);
  if (p.is_step()) return StepTrajectory(p.step().evaluate(0), len);
  ProductSection out;
  for (const auto& q : p.product().parts) out.parts.push_back(hold(q, len));
  return out;
}

struct TraceState {
  State inner;
  // Loop value at the last processed tick; absent before the first block.
  std::optional<Section> carry;
};

// Passes allowed per sub-block before the loop is declared inconsistent.
constexpr int kMaxLoopPasses = 4;

}  // namespace

Machine trace(const Machine& inner, Tick step, const std::string& loop_label) {
  if (step < 1) throw Error(ErrorCode::InvalidArgument, "trace step must be at least one tick");
  if (inner.lead < step)
    throw Error(ErrorCode::InsufficientLead, "trace: " + inner.name + " has lead " + std::to_string(inner.lead) +
                                                 " < step " + std::to_string(step));
  auto [a_kind, c_in] = loop_kinds(inner.input_kind, "input");
  auto [b_kind, c_out] = loop_kinds(inner.output_kind, "output");
  if (!(c_in == c_out))
    throw Error(ErrorCode::KindMismatch, "trace: loop channel kinds differ: " + to_string(c_in) + " vs " +
                                             to_string(c_out));
  Machine m;
  m.name = "trace(" + inner.name + ")";
  m.input_kind = a_kind;
  m.output_kind = b_kind;
  m.lead = inner.lead;
  m.initial = TraceState{inner.initial, std::nullopt};
  m.advance = [adv = inner.advance, in_kind = inner.input_kind, out_kind = inner.output_kind, c_kind = c_in, step,
               loop_label](const State& st, Tick t, const Section& in) {
    Tick len = in.length();
    const auto& ts = std::any_cast<const TraceState&>(st);
    State state = ts.inner;
    std::optional<Section> carry = ts.carry;
    StepResult out;
    Section loop;
    bool first = true;
    Tick u = 0;
    do {
      Tick abs = checked_add(t, u);
      Tick boundary = (abs / step + 1) * step - t;
      Tick v = std::min(len, boundary);
      Section a = in.restrict(ClosedInterval(u, v));
      // The loop value at u is already known from the previous sub-block;
      // everything after it is found by feeding the loop output back.
      Section c = carry ? hold(*carry, v - u) : zero_section(c_kind, v - u);
      StepResult real;
      bool settled = false;
      for (int pass = 0; pass < kMaxLoopPasses && !settled; ++pass) {
        real = adv(state, abs, join_loop(a, c, in_kind));
        auto [b, c_out] = split_loop(real.output, out_kind);
        settled = c_out == c;
        c = std::move(c_out);
      }
      if (!settled)
        throw Error(ErrorCode::FixedPointViolation, "trace: loop wire changed when fed back at tick " +
                                                        std::to_string(abs));
      Section b = split_loop(real.output, out_kind).first;
      state = std::move(real.state);
      carry = c.restrict(ClosedInterval(c.length(), c.length()));
      if (first) {
        out.output = std::move(b);
        loop = std::move(c);
        out.wires = std::move(real.wires);
        first = false;
      } else {
        out.output.append(b);
        loop.append(c);
        append_wires(out.wires, real.wires);
      }
      u = v;
    } while (u < len);
    out.wires.insert(out.wires.begin(), Wire{loop_label, std::move(loop)});
    out.state = TraceState{std::move(state), std::move(carry)};
    return out;
  };
  return m;
}

Section splice(const Section& seed, const Section& input) {
  if (seed.v.index() != input.v.index()) throw Error(ErrorCode::KindMismatch, "splice: sheaves differ");
  Tick eps = seed.length();
  Tick len = checked_add(eps, input.length());
  if (seed.is_events()) {
    Events out(len);
    for (const auto& e : seed.events().events())
      if (e.t < eps) out.push_back(e.t, e.value);
    for (const auto& e : input.events().events()) out.push_back(e.t + eps, e.value);
    return out;
  }
  if (seed.is_linear()) {
    LinearTrajectory out = seed.linear();
    out.append(input.linear());
    return out;
  }
  if (seed.is_step()) {
    const StepTrajectory& s = seed.step();
    StepTrajectory out(s.initial(), len);
    for (const auto& [t, v] : s.steps())
      if (t < eps) out.push_step(t, v);
    if (eps > 0) out.push_step(eps, input.step().initial());
    for (const auto& [t, v] : input.step().steps()) out.push_step(t + eps, v);
    return out;
  }
  ProductSection p;
  const auto& a = seed.product().parts;
  const auto& b = input.product().parts;
  if (a.size() != b.size()) throw Error(ErrorCode::KindMismatch, "splice: product arity differs");
  for (std::size_t i = 0; i < a.size(); ++i) p.parts.push_back(splice(a[i], b[i]));
  return p;
}

Machine delay_machine(const Kind& k, Tick epsilon, const Section& seed) {
  if (epsilon < 1) throw Error(ErrorCode::InvalidArgument, "delay must be at least one tick");
  if (seed.length() != epsilon)
    throw Error(ErrorCode::SeedLengthMismatch, "delay seed has length " + std::to_string(seed.length()) +
                                                   ", expected " + std::to_string(epsilon));
  require_kind(seed, k, "delay seed");
  Machine m;
  m.name = "delay(" + std::to_string(epsilon) + ")";
  m.input_kind = k;
  m.output_kind = k;
  m.lead = epsilon;
  // State: the output still owed on [now, now + epsilon].
  m.initial = seed;
  m.advance = [epsilon](const State& st, Tick, const Section& in) {
    const auto& tail = std::any_cast<const Section&>(st);
    Section known = splice(tail, in);
    Tick len = in.length();
    StepResult r;
    r.output = known.restrict(ClosedInterval(0, len));
    r.state = known.restrict(ClosedInterval(len, len + epsilon));
    return r;
  };
  return m;
}

Machine map_events_machine(const std::string& name, const Kind& in, const Kind& out, EventMap f) {
  Machine m;
  m.name = name;
  m.input_kind = in;
  m.output_kind = out;
  m.lead = 0;
  m.initial = std::monostate{};
  m.advance = [f = std::move(f)](const State& st, Tick, const Section& input) {
    const Events& e = input.events();
    Events o(e.length());
    for (const auto& ev : e.events()) o.push_back(ev.t, f(ev.value));
    return StepResult{st, std::move(o), {}};
  };
  return m;
}

Machine map_linear_machine(const std::string& name, std::size_t in_dim, std::size_t out_dim, SampleMap f) {
  Machine m;
  m.name = name;
  m.input_kind = Kind::linear(in_dim);
  m.output_kind = Kind::linear(out_dim);
  m.lead = 0;
  m.initial = std::monostate{};
  m.advance = [f = std::move(f), in_dim, out_dim](const State& st, Tick, const Section& input) {
    const LinearTrajectory& tr = input.linear();
    Tick len = tr.length();
    std::vector<Tick> ticks(static_cast<std::size_t>(len) + 1);
    std::vector<double> values(ticks.size() * out_dim);
    RealVector x(in_dim);
    for (Tick t = 0; t <= len; ++t) {
      ticks[t] = t;
      tr.evaluate_into(t, x.data());
      double* y = &values[t * out_dim];
      f(x.data(), y);
      for (std::size_t i = 0; i < out_dim; ++i)
        if (!std::isfinite(y[i])) throw Error(ErrorCode::NonFiniteResult, "map produced a non-finite value");
    }
    return StepResult{st, LinearTrajectory(out_dim, std::move(ticks), std::move(values)), {}};
  };
  return m;
}

}  // namespace evsheaf
