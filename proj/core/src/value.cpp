#include "evsheaf/value.hpp"

#include <charconv>

#include <cstdio>

namespace evsheaf {

std::int64_t Value::as_integer() const {
  if (auto p = std::get_if<std::int64_t>(&v)) return *p;
  throw Error(ErrorCode::KindMismatch, "value is not an integer");
}

double Value::as_real() const {
  if (auto p = std::get_if<double>(&v)) return *p;
  throw Error(ErrorCode::KindMismatch, "value is not a real");
}

const RealVector& Value::as_vector() const {
  if (auto p = std::get_if<RealVector>(&v)) return *p;
  throw Error(ErrorCode::KindMismatch, "value is not a vector");
}

const Joint& Value::as_joint() const {
  if (auto p = std::get_if<Joint>(&v)) return *p;
  throw Error(ErrorCode::KindMismatch, "value is not a joint value");
}

RealVector Value::to_vector() const {
  if (auto p = std::get_if<double>(&v)) return {*p};
  return as_vector();
}

bool operator==(const Joint& a, const Joint& b) { return a.parts == b.parts; }
bool operator==(const Value& a, const Value& b) { return a.v == b.v; }
bool operator==(const JointPart& a, const JointPart& b) {
  return a.channel == b.channel && a.value == b.value;
}

std::string format_real(double x) {
  // Shortest text that reads back to the same double.
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_string(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "()"; }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return format_real(x); }
    std::string operator()(const RealVector& x) const {
      std::string s;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ';';
        s += format_real(x[i]);
      }
      return s;
    }
    std::string operator()(const Joint& j) const {
      std::string s;
      for (std::size_t i = 0; i < j.parts.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(j.parts[i].channel);
        s += ':';
        const Value& p = j.parts[i].value;
        if (p.is_integer() && p.as_integer() > 0) s += '+';
        if (p.is_joint()) {
          s += '[' + to_string(p) + ']';
        } else {
          s += to_string(p);
        }
      }
      return s;
    }
  };
  return std::visit(Visitor{}, v.v);
}

bool ValueType::admits(const Value& v) const {
  switch (tag) {
    case Tag::Empty: return false;
    case Tag::Unit: return v.is_unit();
    case Tag::Integer: return v.is_integer();
    case Tag::Real: return v.is_real();
    case Tag::Vector: return v.is_vector() && v.as_vector().size() == dim;
    case Tag::Joint: {
      if (!v.is_joint()) return false;
      const auto& j = v.as_joint();
      if (j.parts.empty()) return false;
      std::size_t prev = 0;
      for (std::size_t i = 0; i < j.parts.size(); ++i) {
        const auto& p = j.parts[i];
        if (p.channel >= parts.size() || (i > 0 && p.channel <= prev)) return false;
        if (!parts[p.channel].admits(p.value)) return false;
        prev = p.channel;
      }
      return true;
    }
  }
  return false;
}

std::string to_string(const ValueType& t) {
  switch (t.tag) {
    case ValueType::Tag::Empty: return "empty";
    case ValueType::Tag::Unit: return "unit";
    case ValueType::Tag::Integer: return "integer";
    case ValueType::Tag::Real: return "real";
    case ValueType::Tag::Vector: return "vector(" + std::to_string(t.dim) + ")";
    case ValueType::Tag::Joint: {
      std::string s = "joint(";
      for (std::size_t i = 0; i < t.parts.size(); ++i) s += (i ? "," : "") + to_string(t.parts[i]);
      return s + ")";
    }
  }
  return "?";
}

std::string to_string(const Kind& k) {
  switch (k.tag) {
    case Kind::Tag::Events: return "events<" + to_string(k.value) + ">";
    case Kind::Tag::Linear: return "linear(" + std::to_string(k.dim) + ")";
    case Kind::Tag::Step: return "step(" + std::to_string(k.dim) + ")";
    case Kind::Tag::Product: {
      std::string s = "product(";
      for (std::size_t i = 0; i < k.parts.size(); ++i) s += (i ? "," : "") + to_string(k.parts[i]);
      return s + ")";
    }
  }
  return "?";
}

Tick Section::length() const {
  return std::visit(
      [](const auto& s) -> Tick {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ProductSection>) {
          return s.parts.empty() ? 0 : s.parts.front().length();
        } else {
          return s.length();
        }
      },
      v);
}

Section Section::restrict(ClosedInterval w) const {
  return std::visit(
      [&](const auto& s) -> Section {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ProductSection>) {
          ProductSection r;
          r.parts.reserve(s.parts.size());
          for (const auto& p : s.parts) r.parts.push_back(p.restrict(w));
          return r;
        } else {
          return s.restrict(w);
        }
      },
      v);
}

void Section::append(const Section& next) {
  if (v.index() != next.v.index())
    throw Error(ErrorCode::IncompatibleSections, "cannot glue sections of different sheaves");
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        const T& n = std::get<T>(next.v);
        if constexpr (std::is_same_v<T, ProductSection>) {
          if (s.parts.size() != n.parts.size())
            throw Error(ErrorCode::IncompatibleSections, "product arity differs");
          for (std::size_t i = 0; i < s.parts.size(); ++i)
            if (!check_compatible(s.parts[i], n.parts[i]))
              throw Error(ErrorCode::IncompatibleSections, "product component " + std::to_string(i) +
                                                               " disagrees at the seam");
          for (std::size_t i = 0; i < s.parts.size(); ++i) s.parts[i].append(n.parts[i]);
        } else {
          s.append(n);
        }
      },
      v);
}

#define EVSHEAF_SECTION_GETTER(Type, name)                                                  \
  const Type& Section::name() const {                                                       \
    if (auto p = std::get_if<Type>(&v)) return *p;                                          \
    throw Error(ErrorCode::KindMismatch, "section is not " #name);                          \
  }                                                                                         \
  Type& Section::name() {                                                                   \
    if (auto p = std::get_if<Type>(&v)) return *p;                                          \
    throw Error(ErrorCode::KindMismatch, "section is not " #name);                          \
  }

EVSHEAF_SECTION_GETTER(Events, events)
EVSHEAF_SECTION_GETTER(LinearTrajectory, linear)
EVSHEAF_SECTION_GETTER(StepTrajectory, step)
EVSHEAF_SECTION_GETTER(ProductSection, product)

#undef EVSHEAF_SECTION_GETTER

bool Section::conforms(const Kind& k) const {
  switch (k.tag) {
    case Kind::Tag::Events: {
      if (!is_events()) return false;
      for (const auto& e : events().events())
        if (!k.value.admits(e.value)) return false;
      return true;
    }
    case Kind::Tag::Linear: return is_linear() && linear().dim() == k.dim;
    case Kind::Tag::Step: return is_step() && step().dim() == k.dim;
    case Kind::Tag::Product: {
      if (!is_product() || product().parts.size() != k.parts.size()) return false;
      Tick len = length();
      for (std::size_t i = 0; i < k.parts.size(); ++i)
        if (product().parts[i].length() != len || !product().parts[i].conforms(k.parts[i])) return false;
      return true;
    }
  }
  return false;
}

bool operator==(const ProductSection& a, const ProductSection& b) { return a.parts == b.parts; }
bool operator==(const Section& a, const Section& b) { return a.v == b.v; }

Section glue(Section a, const Section& b) {
  a.append(b);
  return a;
}

bool check_compatible(const Section& a, const Section& b) {
  if (a.v.index() != b.v.index()) return false;
  Tick la = a.length();
  try {
    return a.restrict(ClosedInterval(la, la)) == b.restrict(ClosedInterval(0, 0));
  } catch (const Error&) {
    return false;
  }
}

Section zero_section(const Kind& k, Tick length) {
  switch (k.tag) {
    case Kind::Tag::Events: return Events(length);
    case Kind::Tag::Linear: return LinearTrajectory::constant(RealVector(k.dim, 0.0), length);
    case Kind::Tag::Step: return StepTrajectory(RealVector(k.dim, 0.0), length);
    case Kind::Tag::Product: {
      ProductSection p;
      for (const auto& part : k.parts) p.parts.push_back(zero_section(part, length));
      return p;
    }
  }
  return Events(length);
}

void require_kind(const Section& s, const Kind& k, const char* where) {
  if (!s.conforms(k))
    throw Error(ErrorCode::KindMismatch, std::string(where) + ": section does not conform to " + to_string(k));
}

}  // namespace evsheaf
