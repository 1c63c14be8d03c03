#include "evsheaf/laws.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace evsheaf {

namespace {

Tick uniform_tick(std::mt19937_64& rng, Tick lo, Tick hi) {
  return std::uniform_int_distribution<Tick>(lo, hi)(rng);
}

void fail(LawResult& r, const std::string& why) {
  if (r.passed) r.counterexample = why;
  r.passed = false;
}

template <class S>
std::string show(const S& s);

template <>
std::string show(const IntEvents& e) {
  std::ostringstream os;
  os << "len " << e.length() << " {";
  for (const auto& ev : e.events()) os << ' ' << ev.t << ':' << ev.value;
  os << " }";
  return os.str();
}

template <>
std::string show(const LinearTrajectory& tr) {
  std::ostringstream os;
  os << "len " << tr.length() << " {";
  for (Tick t : tr.breakpoints()) os << ' ' << t << ':' << format_real(tr.evaluate(t, 0));
  os << " }";
  return os.str();
}

template <>
std::string show(const StepTrajectory& st) {
  std::ostringstream os;
  os << "len " << st.length() << " init " << format_real(st.initial()[0]) << " {";
  for (const auto& [t, v] : st.steps()) os << ' ' << t << ':' << format_real(v[0]);
  os << " }";
  return os.str();
}

template <class S>
void check_split(LawResult& r, const S& whole, Tick cut) {
  ++r.cases;
  S a = whole.restrict(ClosedInterval(0, cut));
  S b = whole.restrict(ClosedInterval(cut, whole.length()));
  if (!sections_compatible(a, b)) return fail(r, "restrictions incompatible at " + std::to_string(cut) + ": " + show(whole));
  if (!glue_round_trip(a, b)) return fail(r, "round trip failed at " + std::to_string(cut) + ": " + show(whole));
  if (!(glue_sections(a, b) == whole)) return fail(r, "glue differs from original at " + std::to_string(cut) + ": " + show(whole));
}

}  // namespace

IntEvents random_int_events(std::mt19937_64& rng, Tick length, double density, std::int64_t values) {
  IntEvents e(length);
  std::bernoulli_distribution hit(density);
  std::uniform_int_distribution<std::int64_t> val(0, values - 1);
  for (Tick t = 0; t <= length; ++t)
    if (hit(rng)) e.push_back(t, val(rng));
  return e;
}

Events random_value_events(std::mt19937_64& rng, Tick length, double density) {
  Events e(length);
  std::bernoulli_distribution hit(density);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (Tick t = 0; t <= length; ++t)
    if (hit(rng)) e.push_back(t, Value(val(rng)));
  return e;
}

LinearTrajectory random_linear(std::mt19937_64& rng, Tick length, std::size_t dim, std::size_t knots) {
  std::vector<Tick> ts{0};
  if (length > 1) {
    std::vector<Tick> inner;
    for (std::size_t i = 0; i < knots; ++i) inner.push_back(uniform_tick(rng, 1, length - 1));
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    ts.insert(ts.end(), inner.begin(), inner.end());
  }
  if (length > 0) ts.push_back(length);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::vector<double> vs;
  for (std::size_t i = 0; i < ts.size() * dim; ++i) vs.push_back(val(rng));
  return LinearTrajectory(dim, std::move(ts), std::move(vs));
}

StepTrajectory random_step(std::mt19937_64& rng, Tick length, std::size_t dim, std::size_t steps) {
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  auto vec = [&] {
    RealVector v(dim);
    for (auto& x : v) x = val(rng);
    return v;
  };
  StepTrajectory st(vec(), length);
  if (length == 0) return st;
  std::vector<Tick> ts;
  for (std::size_t i = 0; i < steps; ++i) ts.push_back(uniform_tick(rng, 1, length));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (Tick t : ts) st.push_step(t, vec());
  return st;
}

std::vector<LawResult> ph_category_laws(std::mt19937_64& rng, std::size_t cases) {
  LawResult unit{"ph-unitality"}, assoc{"ph-associativity"}, homs{"ph-hom-composition"};
  const Tick big = Tick(1) << 40;
  Translation id(0);
  for (std::size_t i = 0; i < cases; ++i) {
    Translation f(uniform_tick(rng, 0, big)), g(uniform_tick(rng, 0, big)), h(uniform_tick(rng, 0, big));
    ++unit.cases;
    if (!(ph_compose(id, f) == f && ph_compose(f, id) == f))
      fail(unit, "identity fails for a=" + std::to_string(f.a));
    ++assoc.cases;
    if (!(ph_compose(ph_compose(f, g), h) == ph_compose(f, ph_compose(g, h))))
      fail(assoc, "a=" + std::to_string(f.a) + " b=" + std::to_string(g.a) + " c=" + std::to_string(h.a));
    // l1 -f-> l2 -g-> l3 with both legs valid; the composite must be valid too.
    Duration l1(uniform_tick(rng, 0, big));
    Duration l2(checked_add(l1.ticks, checked_add(f.a, uniform_tick(rng, 0, 8))));
    Duration l3(checked_add(l2.ticks, checked_add(g.a, uniform_tick(rng, 0, 8))));
    ++homs.cases;
    if (!hom_valid(f, l1, l2) || !hom_valid(g, l2, l3) || !hom_valid(ph_compose(f, g), l1, l3))
      fail(homs, "l1=" + std::to_string(l1.ticks) + " a=" + std::to_string(f.a) + " b=" + std::to_string(g.a));
  }
  return {unit, assoc, homs};
}

std::vector<LawResult> gluing_laws(std::mt19937_64& rng, std::size_t cases) {
  LawResult ev{"glue-roundtrip-events"}, lin{"glue-roundtrip-linear"}, step{"glue-roundtrip-step"};
  for (std::size_t i = 0; i < cases; ++i) {
    Tick len = uniform_tick(rng, 0, 200);
    Tick cut = uniform_tick(rng, 0, len);
    check_split(ev, random_int_events(rng, len, 0.2, 5), cut);
    check_split(lin, random_linear(rng, len, 1, 6), cut);
    check_split(step, random_step(rng, len, 1, 6), cut);
  }
  return {ev, lin, step};
}

LawResult gluing_uniqueness(Tick max_length, std::int64_t values) {
  LawResult r{"glue-uniqueness"};
  for (Tick n = 0; n <= max_length; ++n) {
    std::vector<IntEvents> all;
    // Each tick holds no event or one of `values` values.
    std::vector<std::int64_t> digits(n + 1, -1);
    while (true) {
      IntEvents e(n);
      for (Tick t = 0; t <= n; ++t)
        if (digits[t] >= 0) e.push_back(t, digits[t]);
      all.push_back(std::move(e));
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == values) digits[k++] = -1;
      if (k == digits.size()) break;
    }
    for (Tick cut = 0; cut <= n; ++cut) {
      std::map<std::pair<std::string, std::string>, std::size_t> seen;
      for (std::size_t i = 0; i < all.size(); ++i) {
        check_split(r, all[i], cut);
        auto key = std::make_pair(show(all[i].restrict(ClosedInterval(0, cut))),
                                  show(all[i].restrict(ClosedInterval(cut, n))));
        auto [it, fresh] = seen.emplace(key, i);
        if (!fresh) fail(r, "two streams share restrictions: " + show(all[it->second]) + " and " + show(all[i]));
      }
    }
  }
  return r;
}

std::vector<LawResult> restriction_laws(std::mt19937_64& rng, std::size_t cases) {
  LawResult fun{"restrict-functorial"}, ident{"restrict-identity"};
  for (std::size_t i = 0; i < cases; ++i) {
    Tick len = uniform_tick(rng, 0, 200);
    Tick lo = uniform_tick(rng, 0, len), hi = uniform_tick(rng, lo, len);
    ClosedInterval outer(lo, hi);
    Tick ilo = uniform_tick(rng, 0, hi - lo), ihi = uniform_tick(rng, ilo, hi - lo);
    ClosedInterval inner(ilo, ihi);
    auto e = random_int_events(rng, len, 0.2, 5);
    auto l = random_linear(rng, len, 2, 6);
    auto s = random_step(rng, len, 2, 6);
    fun.cases += 3;
    ident.cases += 3;
    if (!restrict_functorial(e, outer, inner)) fail(fun, "events " + show(e));
    if (!restrict_functorial(l, outer, inner)) fail(fun, "linear " + show(l));
    if (!restrict_functorial(s, outer, inner)) fail(fun, "step " + show(s));
    if (!restrict_identity(e)) fail(ident, "events " + show(e));
    if (!restrict_identity(l)) fail(ident, "linear " + show(l));
    if (!restrict_identity(s)) fail(ident, "step " + show(s));
  }
  return {fun, ident};
}

std::vector<LawResult> monoidal_laws(std::mt19937_64& rng, std::size_t cases) {
  LawResult ms{"merge-split-inverse"}, sm{"split-merge-inverse"}, nat{"merge-naturality"},
      res{"merge-restriction"};
  auto f = [](std::int64_t x) { return x * 3 + 1; };
  auto g = [](std::int64_t x) { return x - 7; };
  for (std::size_t i = 0; i < cases; ++i) {
    Tick len = uniform_tick(rng, 0, 100);
    auto a = random_int_events(rng, len, 0.3, 4);
    auto b = random_int_events(rng, len, 0.3, 4);
    auto m = merge(a, b);
    ++ms.cases;
    auto [a2, b2] = split(m);
    if (!(a2 == a && b2 == b)) fail(ms, show(a) + " | " + show(b));
    ++sm.cases;
    if (!(merge(a2, b2) == m)) fail(sm, show(a) + " | " + show(b));
    ++nat.cases;
    auto lhs = merge(map_values(a, f), map_values(b, g));
    auto rhs = map_values(m, [&](const SumValue<std::int64_t, std::int64_t>& v) { return map_sum(v, f, g); });
    if (!(lhs == rhs)) fail(nat, show(a) + " | " + show(b));
    ++res.cases;
    Tick lo = uniform_tick(rng, 0, len), hi = uniform_tick(rng, lo, len);
    ClosedInterval w(lo, hi);
    if (!(merge(a.restrict(w), b.restrict(w)) == m.restrict(w))) fail(res, show(a) + " | " + show(b));
  }
  return {ms, sm, nat, res};
}

namespace {

std::vector<int> random_symbols(std::mt19937_64& rng, Tick horizon, int inputs) {
  std::uniform_int_distribution<int> d(kSilent, inputs - 1);
  std::vector<int> v(horizon + 1);
  for (auto& x : v) x = d(rng);
  return v;
}

Section run_output(const Machine& m, const std::vector<int>& in) {
  return run(m, symbols_to_events(in), static_cast<Tick>(in.size())).output;
}

}  // namespace

std::vector<LawResult> series_category_laws(std::mt19937_64& rng, std::size_t cases) {
  LawResult unit{"series-unitality"}, assoc{"series-associativity"};
  Machine id = identity_machine(Kind::events(ValueType::integer()));
  for (std::size_t i = 0; i < cases; ++i) {
    auto t1 = random_table(rng, 3, 2, 2);
    auto t2 = random_table(rng, 3, 2, 2);
    auto t3 = random_table(rng, 3, 2, 2);
    Machine m1 = table_machine(t1), m2 = table_machine(t2), m3 = table_machine(t3);
    auto in = random_symbols(rng, 12, 2);
    Section base = run_output(m1, in);
    ++unit.cases;
    if (!(run_output(series(id, m1), in) == base && run_output(series(m1, id), in) == base))
      fail(unit, "table " + std::to_string(i));
    ++assoc.cases;
    if (!(run_output(series(series(m1, m2), m3), in) == run_output(series(m1, series(m2, m3)), in)))
      fail(assoc, "tables " + std::to_string(i));
  }
  return {unit, assoc};
}

LawResult pullback_law(std::mt19937_64& rng, std::size_t pairs, Tick horizon) {
  LawResult r{"pullback-oracle"};
  std::uniform_int_distribution<int> small(2, 3);
  for (std::size_t i = 0; i < pairs; ++i) {
    int mid = small(rng);
    auto t1 = random_table(rng, small(rng), small(rng), mid);
    auto t2 = random_table(rng, small(rng), mid, small(rng));
    ++r.cases;
    auto oracle = pullback_behaviors(t1, t2, horizon);
    auto exec = executable_series_behaviors(t1, t2, horizon);
    if (oracle != exec)
      fail(r, "pair " + std::to_string(i) + ": pullback has " + std::to_string(oracle.size()) +
                  " behaviors, executable series " + std::to_string(exec.size()));
  }
  return r;
}

std::string describe(const TotalDeterministicReport& r) {
  std::string s = std::string("total:") + (r.total ? "true" : "false") +
                  " deterministic:" + (r.deterministic ? "true" : "false");
  if (!r.total) s += "\n  not total: " + r.total_counterexample;
  if (!r.deterministic) s += "\n  not deterministic: " + r.deterministic_counterexample;
  return s;
}

LawResult fixture_classification(Tick horizon, std::size_t budget) {
  LawResult r{"fixture-classification"};
  const std::map<std::string, std::pair<bool, bool>> expected{
      {"good", {true, true}}, {"partial", {false, true}}, {"nondet", {true, false}}};
  for (const auto& [name, want] : expected) {
    ++r.cases;
    auto rep = check_total_deterministic(table_fixture(name), horizon, budget);
    if (rep.total != want.first || rep.deterministic != want.second) fail(r, name + ": " + describe(rep));
  }
  return r;
}

}  // namespace evsheaf
