#include "evsheaf/finite_machine.hpp"

#include <algorithm>
#include <optional>

namespace evsheaf {

std::vector<TableRow> FiniteMachineTable::matches(int state, int input) const {
  std::vector<TableRow> out;
  for (const auto& r : rows)
    if (r.state == state && r.input == input) out.push_back(r);
  return out;
}

void FiniteMachineTable::validate() const {
  if (states < 1 || inputs < 1 || outputs < 1)
    throw Error(ErrorCode::InvalidArgument, name + ": alphabets and state set must be non-empty");
  if (initial < 0 || initial >= states) throw Error(ErrorCode::InvalidArgument, name + ": bad initial state");
  for (const auto& r : rows) {
    bool ok = r.state >= 0 && r.state < states && r.next >= 0 && r.next < states && r.input >= kSilent &&
              r.input < inputs && r.output >= kSilent && r.output < outputs;
    if (!ok) throw Error(ErrorCode::InvalidArgument, name + ": table row out of range");
  }
}

namespace {

struct TableState {
  int q;
  Tick last = -1;  // last absolute tick consumed
  int last_out = kSilent;
};

int symbol_at(const Events& e, Tick t) {
  const Value* v = e.at(t);
  return v ? static_cast<int>(v->as_integer()) : kSilent;
}

}  // namespace

Machine table_machine(const FiniteMachineTable& table, const std::string& state_wire) {
  table.validate();
  // Lookup table (state, input + 1) -> row.
  std::vector<std::optional<TableRow>> lut(table.states * (table.inputs + 1));
  for (int q = 0; q < table.states; ++q)
    for (int x = kSilent; x < table.inputs; ++x) {
      auto m = table.matches(q, x);
      if (m.size() != 1)
        throw Error(ErrorCode::InvalidArgument, table.name + ": not total and deterministic at state " +
                                                    std::to_string(q) + ", input " + std::to_string(x));
      lut[q * (table.inputs + 1) + x + 1] = m.front();
    }
  Machine m;
  m.name = table.name;
  m.input_kind = Kind::events(ValueType::integer());
  m.output_kind = Kind::events(ValueType::integer());
  m.lead = 0;
  m.initial = TableState{table.initial};
  m.advance = [lut, width = table.inputs + 1, state_wire](const State& st, Tick t0, const Section& in) {
    TableState s = std::any_cast<const TableState&>(st);
    const Events& e = in.events();
    Tick len = e.length();
    Events out(len), states(len);
    for (Tick k = 0; k <= len; ++k) {
      Tick abs = t0 + k;
      if (abs > s.last) {
        int x = symbol_at(e, k);
        const TableRow& r = *lut[s.q * width + x + 1];
        s.q = r.next;
        s.last_out = r.output;
        s.last = abs;
      }
      // abs == s.last here: either just consumed or the shared seam tick.
      if (s.last_out != kSilent) out.push_back(k, Value(std::int64_t{s.last_out}));
      states.push_back(k, Value(std::int64_t{s.q}));
    }
    return StepResult{s, std::move(out), {Wire{state_wire, std::move(states)}}};
  };
  return m;
}

Events symbols_to_events(const std::vector<int>& symbols) {
  Events e(static_cast<Tick>(symbols.size()) - 1);
  for (std::size_t t = 0; t < symbols.size(); ++t)
    if (symbols[t] != kSilent) e.push_back(static_cast<Tick>(t), Value(std::int64_t{symbols[t]}));
  return e;
}

std::vector<int> events_to_symbols(const Events& e) {
  std::vector<int> out(static_cast<std::size_t>(e.length()) + 1, kSilent);
  for (const auto& ev : e.events()) out[ev.t] = static_cast<int>(ev.value.as_integer());
  return out;
}

namespace {

// Odometer over a mixed-radix vector; returns false after the last value.
bool advance_digits(std::vector<int>& d, const std::vector<int>& lo, const std::vector<int>& hi) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (++d[i] <= hi[i]) return true;
    d[i] = lo[i];
  }
  return false;
}

bool allowed(const FiniteMachineTable& t, int q, int x, int next, int y) {
  for (const auto& r : t.rows)
    if (r.state == q && r.input == x && r.next == next && r.output == y) return true;
  return false;
}

}  // namespace

std::vector<TableBehavior> enumerate_behaviors(const FiniteMachineTable& table, Tick horizon) {
  table.validate();
  std::size_t n = static_cast<std::size_t>(horizon) + 1;
  std::vector<TableBehavior> out;
  // Digits: inputs, then states, then outputs, one per tick.
  std::vector<int> lo, hi;
  for (std::size_t i = 0; i < n; ++i) lo.push_back(kSilent), hi.push_back(table.inputs - 1);
  for (std::size_t i = 0; i < n; ++i) lo.push_back(0), hi.push_back(table.states - 1);
  for (std::size_t i = 0; i < n; ++i) lo.push_back(kSilent), hi.push_back(table.outputs - 1);
  std::vector<int> d = lo;
  do {
    bool ok = true;
    int q = table.initial;
    for (std::size_t t = 0; ok && t < n; ++t) {
      ok = allowed(table, q, d[t], d[n + t], d[2 * n + t]);
      q = d[n + t];
    }
    if (ok)
      out.push_back({std::vector<int>(d.begin(), d.begin() + n), std::vector<int>(d.begin() + n, d.begin() + 2 * n),
                     std::vector<int>(d.begin() + 2 * n, d.end())});
  } while (advance_digits(d, lo, hi));
  return out;
}

std::set<SeriesBehavior> pullback_behaviors(const FiniteMachineTable& t1, const FiniteMachineTable& t2,
                                            Tick horizon) {
  if (t1.outputs != t2.inputs) throw Error(ErrorCode::KindMismatch, "pullback: alphabets do not match");
  auto b1 = enumerate_behaviors(t1, horizon);
  auto b2 = enumerate_behaviors(t2, horizon);
  std::set<SeriesBehavior> out;
  for (const auto& d1 : b1)
    for (const auto& d2 : b2)
      if (d1.output == d2.input) out.insert({d1.input, d1.state, d1.output, d2.state, d2.output});
  return out;
}

std::set<SeriesBehavior> executable_series_behaviors(const FiniteMachineTable& t1, const FiniteMachineTable& t2,
                                                     Tick horizon, Tick step) {
  Machine m = series(table_machine(t1, "q1"), table_machine(t2, "q2"), "middle");
  std::size_t n = static_cast<std::size_t>(horizon) + 1;
  std::vector<int> lo(n, kSilent), hi(n, t1.inputs - 1);
  std::vector<int> x = lo;
  std::set<SeriesBehavior> out;
  do {
    BehaviorTrace tr = run(m, symbols_to_events(x), step);
    out.insert({x, events_to_symbols(tr.wire("q1")->events()), events_to_symbols(tr.wire("middle")->events()),
                events_to_symbols(tr.wire("q2")->events()), events_to_symbols(tr.output.events())});
  } while (advance_digits(x, lo, hi));
  return out;
}

namespace {

std::string seq(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += v[i] == kSilent ? std::string("-") : std::to_string(v[i]);
  }
  return s + "]";
}

struct Checker {
  const FiniteMachineTable& table;
  std::size_t horizon;
  std::size_t budget;
  TotalDeterministicReport report;
  std::vector<int> xs, qs, ys;

  void visit(int q) {
    if (++report.prefixes_checked > budget)
      throw Error(ErrorCode::EnumerationBudgetExceeded, "total/deterministic check exceeded its budget");
    if (xs.size() >= horizon) return;
    for (int x = kSilent; x < table.inputs; ++x) {
      auto m = table.matches(q, x);
      // Distinct (next, output) extensions.
      std::sort(m.begin(), m.end(), [](const TableRow& a, const TableRow& b) {
        return std::tie(a.next, a.output) < std::tie(b.next, b.output);
      });
      m.erase(std::unique(m.begin(), m.end()), m.end());
      if (m.empty() && report.total) {
        report.total = false;
        report.total_counterexample = describe(x, 0);
      }
      if (m.size() > 1 && report.deterministic) {
        report.deterministic = false;
        report.deterministic_counterexample = describe(x, m.size());
      }
      for (const auto& r : m) {
        xs.push_back(x), qs.push_back(r.next), ys.push_back(r.output);
        visit(r.next);
        xs.pop_back(), qs.pop_back(), ys.pop_back();
      }
    }
  }

  std::string describe(int x, std::size_t count) const {
    return "input " + seq(xs) + " states " + seq(qs) + " outputs " + seq(ys) + " extended by input " +
           (x == kSilent ? std::string("-") : std::to_string(x)) + " at tick " + std::to_string(xs.size()) +
           " has " + std::to_string(count) + " consistent extensions";
  }
};

}  // namespace

TotalDeterministicReport check_total_deterministic(const FiniteMachineTable& table, Tick horizon,
                                                   std::size_t budget) {
  table.validate();
  if (table.states > 4 || table.inputs > 4 || table.outputs > 4 || horizon > 5 || horizon < 0)
    throw Error(ErrorCode::EnumerationBudgetExceeded,
                "enumeration limited to 4 states, 4 symbols and a horizon of 5 ticks");
  Checker c{table, static_cast<std::size_t>(horizon) + 1, budget, {}, {}, {}, {}};
  c.visit(table.initial);
  return c.report;
}

FiniteMachineTable table_fixture(const std::string& name) {
  // Parity of the 1-symbols seen so far, emitted on every input event.
  FiniteMachineTable t;
  t.name = name;
  t.states = 2;
  t.inputs = 2;
  t.outputs = 2;
  for (int q = 0; q < 2; ++q) {
    t.rows.push_back({q, kSilent, q, kSilent});
    for (int x = 0; x < 2; ++x) t.rows.push_back({q, x, q ^ x, q ^ x});
  }
  if (name == "good") return t;
  if (name == "partial") {
    t.rows.erase(std::remove(t.rows.begin(), t.rows.end(), TableRow{1, 1, 0, 0}), t.rows.end());
    return t;
  }
  if (name == "nondet") {
    t.rows.push_back({0, 0, 1, 1});
    return t;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + name + "'");
}

std::vector<std::string> table_fixture_names() { return {"good", "partial", "nondet"}; }

FiniteMachineTable random_table(std::mt19937_64& rng, int states, int inputs, int outputs) {
  FiniteMachineTable t;
  t.name = "random";
  t.states = states;
  t.inputs = inputs;
  t.outputs = outputs;
  std::uniform_int_distribution<int> next(0, states - 1);
  std::uniform_int_distribution<int> out(kSilent, outputs - 1);
  for (int q = 0; q < states; ++q)
    for (int x = kSilent; x < inputs; ++x) t.rows.push_back({q, x, next(rng), out(rng)});
  return t;
}

}  // namespace evsheaf
