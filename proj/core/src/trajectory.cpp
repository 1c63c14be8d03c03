#include "evsheaf/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace evsheaf {

namespace {

void require_finite(const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(v[i])) throw Error(ErrorCode::NonFiniteResult, "non-finite trajectory value");
}

bool equal_values(const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

}  // namespace

LinearTrajectory::LinearTrajectory() : dim_(1), length_(0), kt_{0}, kv_{0.0}, pieces_{{0, 0, 0}} {}

LinearTrajectory::LinearTrajectory(std::size_t dim, std::vector<Tick> ticks, std::vector<double> values)
    : dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "trajectory dimension must be at least 1");
  if (ticks.empty() || ticks.front() != 0)
    throw Error(ErrorCode::InvalidArgument, "trajectory breakpoints must start at 0");
  if (values.size() != ticks.size() * dim)
    throw Error(ErrorCode::LengthMismatch, "breakpoint/value count mismatch");
  for (std::size_t i = 1; i < ticks.size(); ++i)
    if (ticks[i] <= ticks[i - 1])
      throw Error(ErrorCode::InvalidArgument, "trajectory breakpoints must be strictly increasing");
  require_finite(values.data(), values.size());
  length_ = ticks.back();
  kt_ = std::move(ticks);
  kv_ = std::move(values);
  if (kt_.size() == 1) {
    pieces_.push_back({0, 0, 0});
  } else {
    pieces_.reserve(kt_.size() - 1);
    for (std::uint32_t i = 0; i + 1 < kt_.size(); ++i) pieces_.push_back({kt_[i], i, i + 1});
  }
}

LinearTrajectory LinearTrajectory::constant(const RealVector& v, Tick length) {
  if (length < 0) throw Error(ErrorCode::InvalidArgument, "negative trajectory length");
  LinearTrajectory tr(v.size(), {0}, v);
  tr.length_ = length;
  return tr;
}

LinearTrajectory LinearTrajectory::from_points(const std::vector<std::pair<Tick, RealVector>>& pts) {
  if (pts.empty()) throw Error(ErrorCode::InvalidArgument, "no breakpoints");
  std::size_t dim = pts.front().second.size();
  std::vector<Tick> ticks;
  std::vector<double> values;
  for (const auto& [t, v] : pts) {
    if (v.size() != dim) throw Error(ErrorCode::LengthMismatch, "mixed breakpoint dimensions");
    ticks.push_back(t);
    values.insert(values.end(), v.begin(), v.end());
  }
  return LinearTrajectory(dim, std::move(ticks), std::move(values));
}

std::size_t LinearTrajectory::piece_index(Tick t) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](Tick x, const Piece& p) { return x < p.start; });
  return static_cast<std::size_t>(it - pieces_.begin()) - 1;
}

std::size_t LinearTrajectory::piece_index(double t) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double x, const Piece& p) { return x < static_cast<double>(p.start); });
  return static_cast<std::size_t>(it - pieces_.begin()) - 1;
}

void LinearTrajectory::eval_piece(const Piece& p, Tick t, double* out) const {
  const double* v0 = &kv_[p.k0 * dim_];
  Tick t0 = kt_[p.k0];
  Tick t1 = kt_[p.k1];
  if (p.k0 == p.k1 || t == t0) {
    std::copy(v0, v0 + dim_, out);
    return;
  }
  const double* v1 = &kv_[p.k1 * dim_];
  if (t == t1) {
    std::copy(v1, v1 + dim_, out);
    return;
  }
  double x = static_cast<double>(t - t0) / static_cast<double>(t1 - t0);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = std::lerp(v0[i], v1[i], x);
}

void LinearTrajectory::evaluate_into(Tick t, double* out) const {
  if (t < 0 || t > length_)
    throw Error(ErrorCode::OutOfDomain, "evaluate at " + std::to_string(t) + " outside [0, " +
                                            std::to_string(length_) + "]");
  eval_piece(pieces_[piece_index(t)], t, out);
}

RealVector LinearTrajectory::evaluate(Tick t) const {
  RealVector out(dim_);
  evaluate_into(t, out.data());
  return out;
}

double LinearTrajectory::evaluate(Tick t, std::size_t component) const {
  if (component >= dim_) throw Error(ErrorCode::OutOfDomain, "component index out of range");
  if (dim_ == 1) {
    double v;
    evaluate_into(t, &v);
    return v;
  }
  return evaluate(t)[component];
}

void LinearTrajectory::evaluate_at(double t, double* out) const {
  if (!(t >= 0.0) || t > static_cast<double>(length_))
    throw Error(ErrorCode::OutOfDomain, "fractional evaluate outside the domain");
  double whole = std::floor(t);
  if (whole == t) {
    evaluate_into(static_cast<Tick>(whole), out);
    return;
  }
  const Piece& p = pieces_[piece_index(t)];
  const double* v0 = &kv_[p.k0 * dim_];
  if (p.k0 == p.k1) {
    std::copy(v0, v0 + dim_, out);
    return;
  }
  const double* v1 = &kv_[p.k1 * dim_];
  double t0 = static_cast<double>(kt_[p.k0]);
  double x = (t - t0) / static_cast<double>(kt_[p.k1] - kt_[p.k0]);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = std::lerp(v0[i], v1[i], x);
}

std::vector<Tick> LinearTrajectory::breakpoints() const {
  std::vector<Tick> out;
  out.reserve(pieces_.size() + 1);
  for (const auto& p : pieces_) out.push_back(p.start);
  if (out.back() != length_) out.push_back(length_);
  return out;
}

std::uint32_t LinearTrajectory::push_knot(Tick t, const double* v) {
  if (!kt_.empty() && kt_.back() == t && equal_values(&kv_[(kt_.size() - 1) * dim_], v, dim_))
    return static_cast<std::uint32_t>(kt_.size() - 1);
  kt_.push_back(t);
  kv_.insert(kv_.end(), v, v + dim_);
  return static_cast<std::uint32_t>(kt_.size() - 1);
}

LinearTrajectory LinearTrajectory::restrict(ClosedInterval w) const {
  if (!w.within(length_))
    throw Error(ErrorCode::WindowOutOfRange, "window [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) +
                                                 "] outside trajectory of length " + std::to_string(length_));
  LinearTrajectory r;
  r.dim_ = dim_;
  r.length_ = w.length();
  r.kt_.clear();
  r.kv_.clear();
  r.pieces_.clear();
  if (w.lo == w.hi) {
    RealVector v(dim_);
    evaluate_into(w.lo, v.data());
    r.kt_.push_back(0);
    r.kv_ = std::move(v);
    r.pieces_.push_back({0, 0, 0});
    return r;
  }
  std::size_t first = piece_index(w.lo);
  for (std::size_t j = first; j < pieces_.size() && pieces_[j].start < w.hi; ++j) {
    const Piece& p = pieces_[j];
    Tick start = std::max(p.start, w.lo) - w.lo;
    std::uint32_t k0 = r.push_knot(kt_[p.k0] - w.lo, &kv_[p.k0 * dim_]);
    std::uint32_t k1 = p.k0 == p.k1 ? k0 : r.push_knot(kt_[p.k1] - w.lo, &kv_[p.k1 * dim_]);
    r.pieces_.push_back({start, k0, k1});
  }
  return r;
}

bool LinearTrajectory::same_anchors(const Piece& a, const LinearTrajectory& other, const Piece& b,
                                    Tick shift) const {
  bool ca = a.k0 == a.k1;
  bool cb = b.k0 == b.k1;
  if (ca != cb) return false;
  if (!equal_values(&kv_[a.k0 * dim_], &other.kv_[b.k0 * dim_], dim_)) return false;
  if (ca) return true;
  return kt_[a.k0] == other.kt_[b.k0] + shift && kt_[a.k1] == other.kt_[b.k1] + shift &&
         equal_values(&kv_[a.k1 * dim_], &other.kv_[b.k1 * dim_], dim_);
}

void LinearTrajectory::append(const LinearTrajectory& next) {
  if (next.dim_ != dim_) throw Error(ErrorCode::IncompatibleSections, "trajectory dimensions differ");
  RealVector a(dim_), b(dim_);
  evaluate_into(length_, a.data());
  next.evaluate_into(0, b.data());
  if (!equal_values(a.data(), b.data(), dim_))
    throw Error(ErrorCode::IncompatibleSections, "trajectory endpoint values differ at the seam");
  if (next.length_ == 0) return;
  if (length_ == 0) {
    *this = next;
    return;
  }
  Tick shift = length_;
  std::size_t j = 0;
  if (same_anchors(pieces_.back(), next, next.pieces_.front(), shift)) j = 1;
  for (; j < next.pieces_.size(); ++j) {
    const Piece& p = next.pieces_[j];
    std::uint32_t k0 = push_knot(checked_add(next.kt_[p.k0], shift), &next.kv_[p.k0 * dim_]);
    std::uint32_t k1 = p.k0 == p.k1 ? k0 : push_knot(checked_add(next.kt_[p.k1], shift), &next.kv_[p.k1 * dim_]);
    pieces_.push_back({p.start + shift, k0, k1});
  }
  length_ = checked_add(length_, next.length_);
}

LinearTrajectory LinearTrajectory::concat(const std::vector<LinearTrajectory>& parts) {
  if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to concatenate");
  Tick len = parts.front().length_;
  std::size_t dim = 0;
  bool aligned = true;
  const auto& ref = parts.front();
  for (const auto& p : parts) {
    if (p.length_ != len) throw Error(ErrorCode::LengthMismatch, "concatenated trajectories differ in length");
    dim += p.dim_;
    if (p.pieces_.size() != ref.pieces_.size()) {
      aligned = false;
      continue;
    }
    for (std::size_t j = 0; aligned && j < p.pieces_.size(); ++j) {
      const Piece& a = p.pieces_[j];
      const Piece& b = ref.pieces_[j];
      aligned = a.start == b.start && (a.k0 == a.k1) == (b.k0 == b.k1) && p.kt_[a.k0] == ref.kt_[b.k0] &&
                p.kt_[a.k1] == ref.kt_[b.k1];
    }
  }
  LinearTrajectory r;
  r.dim_ = dim;
  r.length_ = len;
  r.kt_.clear();
  r.kv_.clear();
  r.pieces_.clear();
  if (aligned) {
    RealVector v0(dim), v1(dim);
    for (std::size_t j = 0; j < ref.pieces_.size(); ++j) {
      std::size_t off = 0;
      for (const auto& p : parts) {
        const Piece& q = p.pieces_[j];
        std::copy_n(&p.kv_[q.k0 * p.dim_], p.dim_, v0.begin() + off);
        std::copy_n(&p.kv_[q.k1 * p.dim_], p.dim_, v1.begin() + off);
        off += p.dim_;
      }
      const Piece& q = ref.pieces_[j];
      std::uint32_t k0 = r.push_knot(ref.kt_[q.k0], v0.data());
      std::uint32_t k1 = q.k0 == q.k1 ? k0 : r.push_knot(ref.kt_[q.k1], v1.data());
      r.pieces_.push_back({q.start, k0, k1});
    }
    return r;
  }
  std::vector<Tick> ticks;
  for (const auto& p : parts) {
    auto b = p.breakpoints();
    ticks.insert(ticks.end(), b.begin(), b.end());
  }
  std::sort(ticks.begin(), ticks.end());
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  std::vector<double> values(ticks.size() * dim);
  for (std::size_t i = 0; i < ticks.size(); ++i) {
    std::size_t off = 0;
    for (const auto& p : parts) {
      p.evaluate_into(ticks[i], &values[i * dim + off]);
      off += p.dim_;
    }
  }
  LinearTrajectory out(dim, std::move(ticks), std::move(values));
  out.length_ = len;
  return out;
}

LinearTrajectory LinearTrajectory::components(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > dim_) throw Error(ErrorCode::OutOfDomain, "component range out of bounds");
  LinearTrajectory r = *this;
  r.dim_ = count;
  r.kv_.clear();
  r.kv_.reserve(kt_.size() * count);
  for (std::size_t k = 0; k < kt_.size(); ++k)
    r.kv_.insert(r.kv_.end(), kv_.begin() + k * dim_ + first, kv_.begin() + k * dim_ + first + count);
  // Pieces that only differed in the dropped components become redundant; merge them.
  std::vector<Piece> merged;
  for (const auto& p : r.pieces_) {
    if (!merged.empty() && r.same_anchors(merged.back(), r, p, 0)) continue;
    merged.push_back(p);
  }
  r.pieces_ = std::move(merged);
  return r;
}

bool operator==(const LinearTrajectory& a, const LinearTrajectory& b) {
  if (a.dim_ != b.dim_ || a.length_ != b.length_ || a.pieces_.size() != b.pieces_.size()) return false;
  for (std::size_t j = 0; j < a.pieces_.size(); ++j) {
    if (a.pieces_[j].start != b.pieces_[j].start) return false;
    if (!a.same_anchors(a.pieces_[j], b, b.pieces_[j], 0)) return false;
  }
  return true;
}

StepTrajectory::StepTrajectory() : initial_{0.0}, length_(0) {}

StepTrajectory::StepTrajectory(RealVector initial, Tick length, std::vector<std::pair<Tick, RealVector>> steps)
    : initial_(std::move(initial)), length_(length) {
  if (initial_.empty()) throw Error(ErrorCode::InvalidArgument, "step trajectory dimension must be at least 1");
  if (length < 0) throw Error(ErrorCode::InvalidArgument, "negative trajectory length");
  require_finite(initial_.data(), initial_.size());
  for (auto& [t, v] : steps) push_step(t, std::move(v));
}

void StepTrajectory::push_step(Tick t, RealVector v) {
  if (v.size() != initial_.size()) throw Error(ErrorCode::LengthMismatch, "step dimension mismatch");
  require_finite(v.data(), v.size());
  if (t <= 0 || t > length_)
    throw Error(ErrorCode::OutOfDomain, "step tick " + std::to_string(t) + " outside (0, length]");
  if (!steps_.empty() && steps_.back().first >= t)
    throw Error(ErrorCode::InvalidArgument, "step ticks must be strictly increasing");
  const RealVector& held = steps_.empty() ? initial_ : steps_.back().second;
  if (held == v) return;
  steps_.emplace_back(t, std::move(v));
}

const RealVector& StepTrajectory::evaluate(Tick t) const {
  if (t < 0 || t > length_) throw Error(ErrorCode::OutOfDomain, "evaluate outside the domain");
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](Tick x, const auto& s) { return x < s.first; });
  return it == steps_.begin() ? initial_ : std::prev(it)->second;
}

const RealVector& StepTrajectory::evaluate_left(Tick t) const {
  if (t <= 0 || t > length_) throw Error(ErrorCode::OutOfDomain, "left limit outside (0, length]");
  return evaluate(t - 1);
}

StepTrajectory StepTrajectory::restrict(ClosedInterval w) const {
  if (!w.within(length_))
    throw Error(ErrorCode::WindowOutOfRange, "window outside step trajectory of length " + std::to_string(length_));
  StepTrajectory r(evaluate(w.lo), w.length());
  auto it = std::upper_bound(steps_.begin(), steps_.end(), w.lo,
                             [](Tick x, const auto& s) { return x < s.first; });
  for (; it != steps_.end() && it->first <= w.hi; ++it) r.steps_.emplace_back(it->first - w.lo, it->second);
  return r;
}

void StepTrajectory::append(const StepTrajectory& next) {
  if (next.dim() != dim()) throw Error(ErrorCode::IncompatibleSections, "step trajectory dimensions differ");
  if (evaluate(length_) != next.initial_)
    throw Error(ErrorCode::IncompatibleSections, "step trajectory values differ at the seam");
  Tick shift = length_;
  length_ = checked_add(length_, next.length_);
  for (const auto& [t, v] : next.steps_) steps_.emplace_back(t + shift, v);
}

double lipschitz_estimate(const LinearTrajectory& tr, const TickScale& scale) {
  if (tr.length() == 0) throw Error(ErrorCode::ZeroLength, "Lipschitz estimate of a zero-length trajectory");
  double k = 0.0;
  std::size_t n = tr.dim();
  tr.for_each_piece([&](Tick, Tick, Tick t0, const double* v0, Tick t1, const double* v1) {
    if (t0 == t1) return;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (v1[i] - v0[i]) * (v1[i] - v0[i]);
    k = std::max(k, std::sqrt(s) / scale.seconds(t1 - t0));
  });
  return k;
}

LinearTrajectory map_pointwise(const LinearTrajectory& tr, const PointMap& g, Tick step, Tick phase) {
  if (step <= 0) throw Error(ErrorCode::InvalidArgument, "resample step must be positive");
  std::vector<Tick> bps = tr.breakpoints();
  std::vector<Tick> ticks;
  Tick r = ((phase % step) + step) % step;
  Tick grid = r == 0 ? 0 : step - r;
  std::size_t i = 0;
  while (i < bps.size() || grid <= tr.length()) {
    Tick next = i < bps.size() ? bps[i] : grid;
    if (grid <= tr.length()) next = std::min(next, grid);
    ticks.push_back(next);
    if (i < bps.size() && bps[i] == next) ++i;
    if (grid == next) grid += step;
  }
  std::vector<double> values;
  std::size_t dim = 0;
  RealVector x(tr.dim());
  for (Tick t : ticks) {
    tr.evaluate_into(t, x.data());
    RealVector y = g(x);
    if (dim == 0) dim = y.size();
    if (y.size() != dim || dim == 0) throw Error(ErrorCode::LengthMismatch, "map changed output dimension");
    for (double v : y)
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteResult, "map produced a non-finite value");
    values.insert(values.end(), y.begin(), y.end());
  }
  return LinearTrajectory(dim, std::move(ticks), std::move(values));
}

}  // namespace evsheaf
