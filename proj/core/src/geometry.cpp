#include "vislab/geometry.hpp"

#include <algorithm>
#include <string>

#include "vislab/errors.hpp"

namespace vislab {

namespace {

constexpr double kTau = IntervalSet::kMergeTolerance;

void check_interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidInput("interval endpoints must be finite");
  if (!(lo < hi))
    throw InvalidInput("interval must satisfy lo < hi (got [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "])");
}

}  // namespace

double wrap_two_pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double arc_distance(double a, double b) {
  double d = wrap_two_pi(a - b);
  return d > kPi ? kTwoPi - d : d;
}

IntervalSet IntervalSet::from_intervals(std::vector<Interval> raw) {
  for (const auto& iv : raw) check_interval(iv.lo, iv.hi);
  std::sort(raw.begin(), raw.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalSet out;
  out.intervals_.reserve(raw.size());
  for (const auto& iv : raw) {
    if (!out.intervals_.empty() && iv.lo <= out.intervals_.back().hi + kTau) {
      out.intervals_.back().hi = std::max(out.intervals_.back().hi, iv.hi);
    } else {
      out.intervals_.push_back(iv);
    }
  }
  return out;
}

void IntervalSet::insert(double lo, double hi) {
  check_interval(lo, hi);
  auto first = std::lower_bound(intervals_.begin(), intervals_.end(), lo - kTau,
                                [](const Interval& iv, double v) { return iv.hi < v; });
  auto last = std::upper_bound(first, intervals_.end(), hi + kTau,
                               [](double v, const Interval& iv) { return v < iv.lo; });
  if (first == last) {
    intervals_.insert(first, Interval{lo, hi});
    return;
  }
  Interval merged{std::min(lo, first->lo), std::max(hi, (last - 1)->hi)};
  auto pos = intervals_.erase(first, last);
  intervals_.insert(pos, merged);
}

double IntervalSet::measure() const {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.hi - iv.lo;
  return total;
}

bool IntervalSet::contains(double x) const {
  auto it = std::lower_bound(intervals_.begin(), intervals_.end(), x,
                             [](const Interval& iv, double v) { return iv.hi < v; });
  return it != intervals_.end() && it->lo <= x;
}

IntervalSet interval_union_insert(const IntervalSet& set, double lo, double hi) {
  IntervalSet out = set;
  out.insert(lo, hi);
  return out;
}

bool Arc::contains(double angle) const {
  if (full()) return true;
  return wrap_two_pi(angle - lo) <= len;
}

namespace {

void check_arc(double lo, double len) {
  if (!std::isfinite(lo) || !std::isfinite(len))
    throw InvalidInput("arc parameters must be finite");
  if (!(len > 0.0) || len > kTwoPi)
    throw InvalidInput("arc length must lie in (0, 2pi], got " + std::to_string(len));
}

}  // namespace

CircularIntervalSet CircularIntervalSet::from_arcs(const std::vector<Arc>& arcs) {
  std::vector<Interval> pieces;
  pieces.reserve(arcs.size() + 4);
  CircularIntervalSet out;
  for (const auto& a : arcs) {
    check_arc(a.lo, a.len);
    if (a.len >= kTwoPi) {
      out.cut_ = IntervalSet::from_intervals({{0.0, kTwoPi}});
      return out;
    }
    const double start = wrap_two_pi(a.lo);
    const double end = start + a.len;
    if (end <= kTwoPi) {
      pieces.push_back({start, end});
    } else {
      pieces.push_back({start, kTwoPi});
      pieces.push_back({0.0, end - kTwoPi});
    }
  }
  out.cut_ = IntervalSet::from_intervals(std::move(pieces));
  return out;
}

void CircularIntervalSet::insert(double lo, double len) {
  check_arc(lo, len);
  if (len >= kTwoPi) {
    cut_ = IntervalSet::from_intervals({{0.0, kTwoPi}});
    return;
  }
  const double start = wrap_two_pi(lo);
  const double end = start + len;
  if (end <= kTwoPi) {
    cut_.insert(start, end);
  } else {
    cut_.insert(start, kTwoPi);
    cut_.insert(0.0, end - kTwoPi);
  }
}

bool CircularIntervalSet::full() const {
  auto ivs = cut_.intervals();
  return ivs.size() == 1 && ivs.front().lo <= kTau && ivs.front().hi >= kTwoPi - kTau;
}

double CircularIntervalSet::measure() const {
  if (full()) return kTwoPi;
  return std::min(cut_.measure(), kTwoPi);
}

bool CircularIntervalSet::contains(double angle) const {
  return full() || cut_.contains(wrap_two_pi(angle));
}

std::vector<Arc> CircularIntervalSet::arcs() const {
  if (full()) return {Arc{0.0, kTwoPi}};
  auto ivs = cut_.intervals();
  std::vector<Arc> out;
  if (ivs.empty()) return out;
  const bool seam = ivs.size() >= 2 && ivs.front().lo <= kTau && ivs.back().hi >= kTwoPi - kTau;
  const std::size_t begin = seam ? 1 : 0;
  const std::size_t end = seam ? ivs.size() - 1 : ivs.size();
  for (std::size_t i = begin; i < end; ++i) out.push_back({ivs[i].lo, ivs[i].hi - ivs[i].lo});
  if (seam) {
    const auto& tail = ivs.back();
    out.push_back({tail.lo, (kTwoPi - tail.lo) + ivs.front().hi});
  }
  return out;
}

CircularIntervalSet CircularIntervalSet::rotated(double angle) const {
  CircularIntervalSet out;
  for (const auto& a : arcs()) out.insert(a.lo + angle, a.len);
  return out;
}

CircularIntervalSet CircularIntervalSet::united(const CircularIntervalSet& other) const {
  CircularIntervalSet out = *this;
  for (const auto& a : other.arcs()) out.insert(a);
  return out;
}

CircularIntervalSet circular_union_insert(const CircularIntervalSet& set, double lo, double len) {
  CircularIntervalSet out = set;
  out.insert(lo, len);
  return out;
}

Point2 Square::vertex(int i) const {
  switch (i & 3) {
    case 0: return corner;
    case 1: return {corner.x + side, corner.y};
    case 2: return {corner.x + side, corner.y + side};
    default: return {corner.x, corner.y + side};
  }
}

bool Square::contains(Point2 p) const {
  return p.x >= corner.x && p.x <= corner.x + side && p.y >= corner.y && p.y <= corner.y + side;
}

bool Square::contains(const Square& inner, double tol) const {
  return inner.corner.x >= corner.x - tol && inner.corner.y >= corner.y - tol &&
         inner.corner.x + inner.side <= corner.x + side + tol &&
         inner.corner.y + inner.side <= corner.y + side + tol;
}

double Square::distance_to(Point2 p) const {
  const double dx = std::max({corner.x - p.x, 0.0, p.x - (corner.x + side)});
  const double dy = std::max({corner.y - p.y, 0.0, p.y - (corner.y + side)});
  return std::hypot(dx, dy);
}

Arc angular_hull(const Square& sq, Point2 a) {
  if (sq.contains(a)) return Arc{0.0, kTwoPi};
  const Point2 c = sq.center();
  const double ref = std::atan2(c.y - a.y, c.x - a.x);
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point2 v = sq.vertex(i) - a;
    const double rel = std::remainder(std::atan2(v.y, v.x) - ref, kTwoPi);
    lo = std::min(lo, rel);
    hi = std::max(hi, rel);
  }
  return Arc{wrap_two_pi(ref + lo), hi - lo};
}

Arc angular_hull(const Disk& disk, Point2 a) {
  const double d = distance(disk.center, a);
  if (d <= disk.radius) return Arc{0.0, kTwoPi};
  const double half = std::asin(disk.radius / d);
  const double ref = std::atan2(disk.center.y - a.y, disk.center.x - a.x);
  return Arc{wrap_two_pi(ref - half), 2.0 * half};
}

Line::Line(double theta, double offset) {
  if (!std::isfinite(theta) || !std::isfinite(offset))
    throw InvalidInput("line parameters must be finite");
  const double k = std::floor(theta / kPi);
  double t = theta - k * kPi;
  bool flip = std::fmod(std::fabs(k), 2.0) == 1.0;
  if (t >= kPi) {
    t -= kPi;
    flip = !flip;
  }
  if (t < 0) {
    t += kPi;
    flip = !flip;
  }
  theta_ = t;
  offset_ = flip ? -offset : offset;
}

Line Line::through(Point2 p, Point2 q) {
  if (p == q) throw InvalidInput("line through two points needs distinct points");
  const double theta = std::atan2(q.y - p.y, q.x - p.x);
  const Point2 n{-std::sin(theta), std::cos(theta)};
  return Line(theta, dot(p, n));
}

double dist_point_line(Point2 p, const Line& line) {
  return std::fabs(dot(p, line.normal()) - line.offset());
}

RotRect::RotRect(Point2 center, double axis_angle, double r1, double r2)
    : center_(center), axis_angle_(axis_angle), r1_(r1), r2_(r2) {
  if (!(r1 > 0.0) || !(r1 <= r2) || !std::isfinite(r2))
    throw InvalidInput("rectangle needs 0 < r1 <= r2");
  long_dir_ = {std::cos(axis_angle), std::sin(axis_angle)};
  short_dir_ = {-long_dir_.y, long_dir_.x};
}

bool RotRect::contains(Point2 p) const {
  return std::fabs(dot(p, long_dir_) - dot(center_, long_dir_)) <= r2_ / 2 &&
         std::fabs(dot(p, short_dir_) - dot(center_, short_dir_)) <= r1_ / 2;
}

}  // namespace vislab
