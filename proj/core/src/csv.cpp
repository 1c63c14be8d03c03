#include "evsheaf/csv.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace evsheaf {

namespace {

void preamble(std::ostream& os, const char* kind, Tick length, const TickScale& scale, std::size_t dim) {
  os << "# kind: " << kind << '\n';
  os << "# length_ticks: " << length << '\n';
  os << "# seconds_per_tick: " << format_real(scale.seconds_per_tick) << '\n';
  if (dim) os << "# dim: " << dim << '\n';
}

const char* value_tag(const Value& v) {
  if (v.is_integer()) return "integer";
  if (v.is_real()) return "real";
  if (v.is_vector()) return "vector";
  if (v.is_joint()) return "joint";
  return "unit";
}

void header(std::ostream& os, std::size_t dim) {
  os << "t_tick,t_seconds";
  for (std::size_t i = 0; i < dim; ++i) os << ",v_" << i;
  os << '\n';
}

void row(std::ostream& os, Tick t, const TickScale& scale, const double* v, std::size_t dim) {
  os << t << ',' << format_real(scale.seconds(t));
  for (std::size_t i = 0; i < dim; ++i) os << ',' << format_real(v[i]);
  os << '\n';
}

}  // namespace

void write_csv(std::ostream& os, const Section& s, const TickScale& scale) {
  if (s.is_events()) {
    const Events& e = s.events();
    preamble(os, "events", e.length(), scale, 0);
    if (!e.empty()) os << "# value: " << value_tag(e.events().front().value) << '\n';
    os << "t_tick,t_seconds,value\n";
    for (const auto& ev : e.events())
      os << ev.t << ',' << format_real(scale.seconds(ev.t)) << ',' << to_string(ev.value) << '\n';
  } else if (s.is_linear()) {
    const LinearTrajectory& tr = s.linear();
    preamble(os, "linear", tr.length(), scale, tr.dim());
    header(os, tr.dim());
    RealVector v(tr.dim());
    for (Tick t : tr.breakpoints()) {
      tr.evaluate_into(t, v.data());
      row(os, t, scale, v.data(), v.size());
    }
  } else if (s.is_step()) {
    const StepTrajectory& st = s.step();
    preamble(os, "step", st.length(), scale, st.dim());
    header(os, st.dim());
    row(os, 0, scale, st.initial().data(), st.dim());
    for (const auto& [t, v] : st.steps()) row(os, t, scale, v.data(), v.size());
  } else {
    throw Error(ErrorCode::KindMismatch, "product sections are written one component per file");
  }
}

void write_csv_file(const std::string& path, const Section& s, const TickScale& scale) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  write_csv(os, s, scale);
  if (!os) throw Error(ErrorCode::InvalidArgument, "write failed for " + path);
}

std::size_t csv_row_count(const Section& s) {
  if (s.is_events()) return s.events().size();
  if (s.is_linear()) return s.linear().breakpoints().size();
  if (s.is_step()) return s.step().steps().size() + 1;
  return 0;
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::ConfigError, "csv: " + msg); }

double parse_real(const std::string& s) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    bad("not a number: '" + s + "'");
  }
  if (pos != s.size()) bad("trailing characters in '" + s + "'");
  return v;
}

Tick parse_tick(const std::string& s) {
  std::size_t pos = 0;
  long long v;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    bad("not a tick: '" + s + "'");
  }
  if (pos != s.size()) bad("trailing characters in '" + s + "'");
  return v;
}

std::vector<std::string> fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, sep)) out.push_back(f);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

Value parse_value(const std::string& s, const std::string& tag) {
  if (tag == "real") return Value(parse_real(s));
  if (tag == "integer") return Value(static_cast<std::int64_t>(parse_tick(s)));
  if (tag == "unit") {
    if (s != "()") bad("unit events are written as ()");
    return Value();
  }
  if (tag == "joint") {
    // Flat joints only: channel:value;channel:value
    Joint j;
    for (const auto& f : fields(s, ';')) {
      auto colon = f.find(':');
      if (colon == std::string::npos) bad("joint part without channel: '" + f + "'");
      std::string v = f.substr(colon + 1);
      if (!v.empty() && v[0] == '[') bad("nested joint values are not readable");
      if (!v.empty() && v[0] == '+') v.erase(0, 1);
      bool integral = !v.empty() && v.find_first_not_of("-0123456789") == std::string::npos;
      j.parts.push_back({static_cast<std::size_t>(parse_tick(f.substr(0, colon))),
                         integral ? Value(static_cast<std::int64_t>(parse_tick(v))) : Value(parse_real(v))});
    }
    return Value(std::move(j));
  }
  if (tag == "vector" || s.find(';') != std::string::npos) {
    RealVector v;
    for (const auto& f : fields(s, ';')) v.push_back(parse_real(f));
    return Value(std::move(v));
  }
  // Untagged files: integral text reads as an integer.
  bool integral = !s.empty() && s.find_first_not_of("+-0123456789") == std::string::npos;
  if (integral) return Value(static_cast<std::int64_t>(parse_tick(s)));
  return Value(parse_real(s));
}

}  // namespace

CsvSection read_csv(std::istream& is) {
  std::map<std::string, std::string> meta;
  std::string line;
  bool have_header = false;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string val = line.substr(colon + 1);
      auto trim = [](std::string& x) {
        x.erase(0, x.find_first_not_of(' '));
        x.erase(x.find_last_not_of(' ') + 1);
      };
      trim(key);
      trim(val);
      meta[key] = val;
      continue;
    }
    if (!have_header) {
      have_header = true;
      continue;
    }
    rows.push_back(fields(line, ','));
  }
  if (!have_header) bad("missing header row");
  std::string kind = meta.count("kind") ? meta["kind"] : "";
  TickScale scale(meta.count("seconds_per_tick") ? parse_real(meta["seconds_per_tick"]) : 1e-6);
  if (!meta.count("length_ticks") && rows.empty()) bad("no length and no rows");
  Tick length = meta.count("length_ticks") ? parse_tick(meta["length_ticks"]) : parse_tick(rows.back().at(0));
  if (kind == "events") {
    Events e(length);
    for (const auto& r : rows) {
      if (r.size() != 3) bad("event rows need 3 fields");
      e.push_back(parse_tick(r[0]), parse_value(r[2], meta.count("value") ? meta["value"] : ""));
    }
    return {std::move(e), scale};
  }
  if (kind == "linear" || kind == "step") {
    if (rows.empty()) bad("trajectory without rows");
    std::size_t dim = rows.front().size() - 2;
    if (dim == 0) bad("trajectory rows need at least one value column");
    std::vector<std::pair<Tick, RealVector>> pts;
    for (const auto& r : rows) {
      if (r.size() != dim + 2) bad("ragged trajectory row");
      RealVector v;
      for (std::size_t i = 2; i < r.size(); ++i) v.push_back(parse_real(r[i]));
      pts.emplace_back(parse_tick(r[0]), std::move(v));
    }
    if (kind == "linear") {
      if (pts.back().first != length) bad("last breakpoint must sit at length_ticks");
      return {LinearTrajectory::from_points(pts), scale};
    }
    if (pts.front().first != 0) bad("step trajectory must start at tick 0");
    StepTrajectory st(pts.front().second, length);
    for (std::size_t i = 1; i < pts.size(); ++i) st.push_step(pts[i].first, pts[i].second);
    return {std::move(st), scale};
  }
  bad("unknown kind '" + kind + "'");
}

CsvSection read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::ConfigError, "cannot read " + path);
  return read_csv(is);
}

}  // namespace evsheaf
