#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "evsheaf/event_stream.hpp"
#include "evsheaf/trajectory.hpp"

namespace evsheaf {

struct JointPart;

// n-ary A1 ⊙ ... ⊙ An value: the channels present at one tick, ascending.
struct Joint {
  std::vector<JointPart> parts;
};

struct Value {
  std::variant<std::monostate, std::int64_t, double, RealVector, Joint> v;

  Value() = default;
  Value(std::int64_t x) : v(x) {}
  Value(int x) : v(static_cast<std::int64_t>(x)) {}
  Value(double x) : v(x) {}
  Value(RealVector x) : v(std::move(x)) {}
  Value(Joint x) : v(std::move(x)) {}

  bool is_unit() const { return std::holds_alternative<std::monostate>(v); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(v); }
  bool is_real() const { return std::holds_alternative<double>(v); }
  bool is_vector() const { return std::holds_alternative<RealVector>(v); }
  bool is_joint() const { return std::holds_alternative<Joint>(v); }

  std::int64_t as_integer() const;
  double as_real() const;
  const RealVector& as_vector() const;
  const Joint& as_joint() const;
  // Real or vector value viewed as a vector.
  RealVector to_vector() const;
};

struct JointPart {
  std::size_t channel;
  Value value;
};

bool operator==(const Joint& a, const Joint& b);
bool operator==(const Value& a, const Value& b);
bool operator==(const JointPart& a, const JointPart& b);

// Text form used in CSV output: 1, 0.5, 1;2, 3:+1;7:-1.
std::string to_string(const Value& v);
std::string format_real(double x);

// Value type tags for event streams.
struct ValueType {
  // Empty admits no value at all, so its only streams are empty ones.
  enum class Tag { Empty, Unit, Integer, Real, Vector, Joint };
  Tag tag = Tag::Unit;
  std::size_t dim = 0;
  std::vector<ValueType> parts;

  static ValueType empty() { return {Tag::Empty, 0, {}}; }
  static ValueType unit() { return {Tag::Unit, 0, {}}; }
  static ValueType integer() { return {Tag::Integer, 0, {}}; }
  static ValueType real() { return {Tag::Real, 0, {}}; }
  static ValueType vector(std::size_t n) { return {Tag::Vector, n, {}}; }
  static ValueType joint(std::vector<ValueType> parts) { return {Tag::Joint, 0, std::move(parts)}; }
  // Real for n == 1, vector otherwise.
  static ValueType real_or_vector(std::size_t n) { return n == 1 ? real() : vector(n); }

  bool admits(const Value& v) const;
  friend bool operator==(const ValueType&, const ValueType&) = default;
};

struct Kind {
  enum class Tag { Events, Linear, Step, Product };
  Tag tag = Tag::Events;
  ValueType value;
  std::size_t dim = 0;
  std::vector<Kind> parts;

  static Kind events(ValueType v) { return {Tag::Events, std::move(v), 0, {}}; }
  static Kind linear(std::size_t n) { return {Tag::Linear, {}, n, {}}; }
  static Kind step(std::size_t n) { return {Tag::Step, {}, n, {}}; }
  static Kind product(std::vector<Kind> parts) { return {Tag::Product, {}, 0, std::move(parts)}; }

  friend bool operator==(const Kind&, const Kind&) = default;
};

std::string to_string(const ValueType& t);
std::string to_string(const Kind& k);

using Events = EventStream<Value>;

struct Section;

struct ProductSection {
  std::vector<Section> parts;
};

// A section of any supported sheaf.
struct Section {
  std::variant<Events, LinearTrajectory, StepTrajectory, ProductSection> v;

  Section() : v(Events(0)) {}
  Section(Events e) : v(std::move(e)) {}
  Section(LinearTrajectory t) : v(std::move(t)) {}
  Section(StepTrajectory t) : v(std::move(t)) {}
  Section(ProductSection p) : v(std::move(p)) {}

  Tick length() const;
  Section restrict(ClosedInterval w) const;
  void append(const Section& next);

  bool is_events() const { return std::holds_alternative<Events>(v); }
  bool is_linear() const { return std::holds_alternative<LinearTrajectory>(v); }
  bool is_step() const { return std::holds_alternative<StepTrajectory>(v); }
  bool is_product() const { return std::holds_alternative<ProductSection>(v); }

  const Events& events() const;
  const LinearTrajectory& linear() const;
  const StepTrajectory& step() const;
  const ProductSection& product() const;
  Events& events();
  LinearTrajectory& linear();
  StepTrajectory& step();
  ProductSection& product();

  bool conforms(const Kind& k) const;
};

bool operator==(const ProductSection& a, const ProductSection& b);
bool operator==(const Section& a, const Section& b);

Section glue(Section a, const Section& b);
bool check_compatible(const Section& a, const Section& b);

// Quiet section of a kind: empty events, zero trajectories.
Section zero_section(const Kind& k, Tick length);

void require_kind(const Section& s, const Kind& k, const char* where);

}  // namespace evsheaf
