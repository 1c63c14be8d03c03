#include "evsheaf/blocks.hpp"

#include <cmath>

namespace evsheaf {

namespace {

Value vector_value(RealVector v) {
  if (v.size() == 1) return Value(v[0]);
  return Value(std::move(v));
}

double distance(const double* x, const RealVector& a) {
  if (a.size() == 1) return std::fabs(x[0] - a[0]);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (x[i] - a[i]) * (x[i] - a[i]);
  return std::sqrt(s);
}

// Seam event re-emitted at the start of the next block.
struct Carry {
  Tick t = -1;
  Value v;
};

}  // namespace

Machine make_sampler(const SamplerConfig& cfg, std::size_t dim) {
  if (cfg.period < 1) throw Error(ErrorCode::InvalidArgument, "sampler period must be at least one tick");
  if (cfg.phase < 0 || cfg.phase >= cfg.period)
    throw Error(ErrorCode::InvalidPhase, "sampler phase must lie in [0, period)");
  Machine m;
  m.name = "sampler";
  m.input_kind = cfg.step_input ? Kind::step(dim) : Kind::linear(dim);
  m.output_kind = Kind::events(ValueType::real_or_vector(dim));
  m.lead = 0;
  m.initial = std::monostate{};
  m.advance = [cfg](const State& st, Tick t0, const Section& in) {
    Tick len = in.length();
    // First clock tick at or after t0.
    Tick r = ((t0 - cfg.phase) % cfg.period + cfg.period) % cfg.period;
    Tick k = r == 0 ? 0 : cfg.period - r;
    Events out(len);
    for (; k <= len; k += cfg.period)
      out.push_back(k, vector_value(cfg.step_input ? in.step().evaluate(k) : in.linear().evaluate(k)));
    return StepResult{st, std::move(out), {}};
  };
  return m;
}

std::optional<Crossing> find_crossing(const LinearTrajectory& tr, Tick from, const RealVector& ref, double level) {
  std::size_t n = tr.dim();
  if (ref.size() != n) throw Error(ErrorCode::LengthMismatch, "reference dimension differs from the input");
  Tick len = tr.length();
  if (from > len) return std::nullopt;
  RealVector x(n);
  auto far = [&](Tick t) {
    tr.evaluate_into(t, x.data());
    return distance(x.data(), ref) >= level;
  };
  for (std::size_t j = tr.piece_at(from);; ++j) {
    Tick lo = std::max(from, tr.piece_start(j));
    Tick hi = tr.piece_end(j);
    Tick t0, t1;
    const double *v0, *v1;
    tr.piece_anchors(j, t0, v0, t1, v1);
    std::optional<Tick> hit;
    double tau = -1.0;
    if (far(lo)) {
      hit = lo;
    } else if (t1 != t0) {
      // |w + tau d| = L with w = v0 - ref, d = v1 - v0; the later root is the exit.
      double dd = 0.0, wd = 0.0, ww = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double d = v1[i] - v0[i];
        double w = v0[i] - ref[i];
        dd += d * d;
        wd += w * d;
        ww += w * w;
      }
      if (dd > 0.0) {
        double disc = wd * wd - dd * (ww - level * level);
        tau = (-wd + std::sqrt(std::max(disc, 0.0))) / dd;
        double tstar = static_cast<double>(t0) + tau * static_cast<double>(t1 - t0);
        double c = std::ceil(tstar);
        if (c <= static_cast<double>(hi) + 1.0) {
          Tick k = std::clamp(static_cast<Tick>(std::max(c, static_cast<double>(lo))), lo, hi);
          // Rounding can put the closed-form answer one tick off either way.
          while (k < hi && !far(k)) ++k;
          while (k > lo && far(k - 1)) --k;
          if (far(k)) hit = k;
        }
      }
    }
    if (hit) {
      Crossing c;
      c.tick = *hit;
      tr.evaluate_into(c.tick, x.data());
      if (n == 1) {
        c.value = {x[0] >= ref[0] ? ref[0] + level : ref[0] - level};
      } else if (tau >= 0.0 && tau <= 1.0 && c.tick != lo) {
        c.value.resize(n);
        for (std::size_t i = 0; i < n; ++i) c.value[i] = std::lerp(v0[i], v1[i], tau);
      } else {
        // Started outside the ball: project the sample onto the sphere.
        double d = distance(x.data(), ref);
        c.value.resize(n);
        for (std::size_t i = 0; i < n; ++i) c.value[i] = ref[i] + (x[i] - ref[i]) * (level / d);
      }
      return c;
    }
    if (hi >= len) return std::nullopt;
  }
}

namespace {

struct LevelState {
  RealVector ref;
  Tick next_scan = 0;
  Carry carry;
};

}  // namespace

Machine make_level_crossing(double level, RealVector a0) {
  if (!(level > 0) || !std::isfinite(level)) throw Error(ErrorCode::InvalidArgument, "level must be positive");
  for (double v : a0)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "reference must be finite");
  std::size_t dim = a0.size();
  Machine m;
  m.name = "level_crossing";
  m.input_kind = Kind::linear(dim);
  m.output_kind = Kind::events(ValueType::real_or_vector(dim));
  m.lead = 0;
  m.initial = LevelState{std::move(a0), 0, {}};
  m.advance = [level](const State& st, Tick t0, const Section& in) {
    LevelState s = std::any_cast<const LevelState&>(st);
    const LinearTrajectory& tr = in.linear();
    Tick len = tr.length();
    Events out(len);
    if (s.carry.t == t0) out.push_back(0, s.carry.v);
    Tick from = std::max<Tick>(0, s.next_scan - t0);
    while (auto c = find_crossing(tr, from, s.ref, level)) {
      s.ref = c->value;
      Value v = vector_value(c->value);
      out.push_back(c->tick, v);
      s.carry = {t0 + c->tick, std::move(v)};
      from = c->tick + 1;
    }
    s.next_scan = t0 + from;
    return StepResult{std::move(s), std::move(out), {}};
  };
  return m;
}

namespace {

struct ZohState {
  RealVector held;
};

}  // namespace

Machine make_zoh(RealVector a0) {
  std::size_t dim = a0.size();
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "hold value must have at least one component");
  Machine m;
  m.name = "zoh";
  m.input_kind = Kind::events(ValueType::real_or_vector(dim));
  m.output_kind = Kind::step(dim);
  m.lead = 0;
  m.initial = ZohState{std::move(a0)};
  m.advance = [](const State& st, Tick, const Section& in) {
    ZohState s = std::any_cast<const ZohState&>(st);
    const Events& e = in.events();
    const auto& evs = e.events();
    std::size_t i = 0;
    // A seam event was already held by the previous block; holding it again is a no-op.
    if (!evs.empty() && evs.front().t == 0) s.held = evs[i++].value.to_vector();
    StepTrajectory out(s.held, e.length());
    for (; i < evs.size(); ++i) {
      s.held = evs[i].value.to_vector();
      out.push_step(evs[i].t, s.held);
    }
    return StepResult{std::move(s), std::move(out), {}};
  };
  return m;
}

Machine make_filter(const Kind& kind, std::function<bool(const Value&)> keep) {
  if (kind.tag != Kind::Tag::Events) throw Error(ErrorCode::KindMismatch, "filter works on event streams");
  Machine m;
  m.name = "filter";
  m.input_kind = kind;
  m.output_kind = kind;
  m.lead = 0;
  m.initial = std::monostate{};
  m.advance = [keep = std::move(keep)](const State& st, Tick, const Section& in) {
    return StepResult{st, filter_events(in.events(), keep), {}};
  };
  return m;
}

namespace {

struct DdsState {
  State user;
  Tick last = -1;
  Carry carry;
};

}  // namespace

Machine make_dds(DdsSpec spec) {
  if (!spec.update || !spec.readout) throw Error(ErrorCode::InvalidArgument, "dds needs update and readout");
  Machine m;
  m.name = "dds";
  m.input_kind = Kind::events(spec.input);
  m.output_kind = Kind::events(spec.output);
  m.lead = 0;
  m.initial = DdsState{spec.initial, -1, {}};
  m.advance = [update = spec.update, readout = spec.readout, pre = spec.pre_update_readout](
                  const State& st, Tick t0, const Section& in) {
    DdsState s = std::any_cast<const DdsState&>(st);
    const Events& e = in.events();
    Events out(e.length());
    for (const auto& ev : e.events()) {
      Tick abs = t0 + ev.t;
      if (abs <= s.last) {
        if (s.carry.t == abs) out.push_back(ev.t, s.carry.v);
        continue;
      }
      State next = update(ev.value, s.user);
      Value v = readout(pre ? s.user : next);
      s.user = std::move(next);
      s.last = abs;
      out.push_back(ev.t, v);
      s.carry = {abs, std::move(v)};
    }
    return StepResult{std::move(s), std::move(out), {}};
  };
  return m;
}

namespace {

struct CdsState {
  Tick grid = 0;      // absolute tick of the last committed grid point
  RealVector hi, lo;  // double-double state at `grid`
  Section buffer;     // input over [grid, seen]
  bool started = false;
};

// (hi, lo) + x, renormalized so hi is the nearest double to the sum.
void dd_add(double& hi, double& lo, double x) {
  double s = hi + x;
  double bb = s - hi;
  double err = (hi - (s - bb)) + (x - bb);
  double t = lo + err;
  hi = s + t;
  lo = t - (hi - s);
}

}  // namespace

Machine make_cds(CdsSpec spec) {
  if (!spec.dynamics) throw Error(ErrorCode::InvalidArgument, "cds needs dynamics");
  if (spec.h < 1) throw Error(ErrorCode::InvalidArgument, "integrator step must be at least one tick");
  if (spec.s0.size() != spec.state_dim) throw Error(ErrorCode::LengthMismatch, "initial state dimension");
  if (!spec.readout && spec.output_dim != spec.state_dim)
    throw Error(ErrorCode::LengthMismatch, "identity readout needs output_dim == state_dim");
  TickScale scale(spec.seconds_per_tick);
  Machine m;
  m.name = "cds";
  m.input_kind = spec.step_input ? Kind::step(spec.input_dim) : Kind::linear(spec.input_dim);
  m.output_kind = Kind::linear(spec.output_dim);
  m.lead = 0;
  CdsState init;
  init.hi = spec.s0;
  init.lo.assign(spec.state_dim, 0.0);
  m.initial = init;
  m.advance = [spec, scale](const State& st, Tick t0, const Section& in) {
    CdsState s = std::any_cast<const CdsState&>(st);
    const std::size_t n = spec.state_dim;
    const std::size_t ni = spec.input_dim;
    if (!s.started) {
      if (t0 != 0) throw Error(ErrorCode::InvalidArgument, "cds must start at tick 0");
      s.buffer = in;
      s.started = true;
    } else {
      s.buffer.append(in);
    }
    Tick len = in.length();
    RealVector u(ni), x(n), k1(n), k2(n), k3(n), k4(n), inc(n), out_state(n), y(spec.output_dim);

    // Input at fractional offset tau from the grid point; step inputs use the left limit.
    auto input_at = [&](double tau) {
      if (spec.step_input) {
        const StepTrajectory& b = s.buffer.step();
        Tick k = tau <= 0.0 ? 0 : static_cast<Tick>(std::ceil(tau)) - 1;
        const RealVector& v = b.evaluate(k);
        std::copy(v.begin(), v.end(), u.begin());
      } else {
        s.buffer.linear().evaluate_at(tau, u.data());
      }
    };
    auto check = [&](const RealVector& v) {
      for (double d : v)
        if (!std::isfinite(d)) throw Error(ErrorCode::NonFiniteState, "cds state diverged");
    };
    // RK4 increment over `ticks` ticks starting at the grid state.
    auto increment = [&](Tick ticks) {
      double H = scale.seconds(ticks);
      double half = static_cast<double>(ticks) / 2.0;
      input_at(0.0);
      spec.dynamics(u.data(), s.hi.data(), k1.data());
      input_at(half);
      for (std::size_t i = 0; i < n; ++i) x[i] = s.hi[i] + H / 2 * k1[i];
      spec.dynamics(u.data(), x.data(), k2.data());
      for (std::size_t i = 0; i < n; ++i) x[i] = s.hi[i] + H / 2 * k2[i];
      spec.dynamics(u.data(), x.data(), k3.data());
      input_at(static_cast<double>(ticks));
      for (std::size_t i = 0; i < n; ++i) x[i] = s.hi[i] + H * k3[i];
      spec.dynamics(u.data(), x.data(), k4.data());
      for (std::size_t i = 0; i < n; ++i) inc[i] = H / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      check(inc);
    };

    std::vector<Tick> ticks(static_cast<std::size_t>(len) + 1);
    std::vector<double> values(ticks.size() * spec.output_dim);
    for (Tick k = 0; k <= len; ++k) {
      Tick abs = t0 + k;
      Tick since = abs - s.grid;
      if (since == spec.h) {
        increment(since);
        for (std::size_t i = 0; i < n; ++i) dd_add(s.hi[i], s.lo[i], inc[i]);
        check(s.hi);
        s.buffer = s.buffer.restrict(ClosedInterval(since, s.buffer.length()));
        s.grid = abs;
        since = 0;
      }
      if (since == 0) {
        out_state = s.hi;
      } else {
        increment(since);
        for (std::size_t i = 0; i < n; ++i) {
          double h = s.hi[i], l = s.lo[i];
          dd_add(h, l, inc[i]);
          out_state[i] = h;
        }
        check(out_state);
      }
      ticks[k] = k;
      double* dst = &values[k * spec.output_dim];
      if (spec.readout) {
        spec.readout(out_state.data(), dst);
      } else {
        std::copy(out_state.begin(), out_state.end(), dst);
      }
      for (std::size_t i = 0; i < spec.output_dim; ++i)
        if (!std::isfinite(dst[i])) throw Error(ErrorCode::NonFiniteState, "cds readout is not finite");
    }
    return StepResult{std::move(s), LinearTrajectory(spec.output_dim, std::move(ticks), std::move(values)), {}};
  };
  return m;
}

}  // namespace evsheaf
