#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace vislab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double t, Point2 p) { return {t * p.x, t * p.y}; }
  friend Point2 operator*(Point2 p, double t) { return {t * p.x, t * p.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

// Reduces an angle into [0, 2pi).
double wrap_two_pi(double angle);

// Shortest distance between two directions on the circle, in [0, pi].
double arc_distance(double a, double b);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Sorted union of closed intervals. Neighbours closer than kMergeTolerance
// are fused, so after any operation every gap exceeds the tolerance.
class IntervalSet {
 public:
  static constexpr double kMergeTolerance = 1e-12;

  IntervalSet() = default;

  // Bulk construction: sort by lo, then one merging sweep.
  static IntervalSet from_intervals(std::vector<Interval> raw);

  void insert(double lo, double hi);

  double measure() const;
  bool contains(double x) const;
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }
  std::span<const Interval> intervals() const { return intervals_; }

 private:
  std::vector<Interval> intervals_;
};

// Pure form of IntervalSet::insert.
IntervalSet interval_union_insert(const IntervalSet& set, double lo, double hi);

struct Arc {
  double lo = 0.0;   // in [0, 2pi)
  double len = 0.0;  // in (0, 2pi]
  bool full() const { return len >= kTwoPi; }
  bool contains(double angle) const;
};

// Union of arcs on R/2piZ. Internally a linear set on [0, 2pi] with arcs
// split at the seam; arcs() re-joins the seam on read.
class CircularIntervalSet {
 public:
  CircularIntervalSet() = default;

  // Bulk construction, one sort for all arcs.
  static CircularIntervalSet from_arcs(const std::vector<Arc>& arcs);

  void insert(double lo, double len);
  void insert(const Arc& arc) { insert(arc.lo, arc.len); }

  // Exactly 2pi when the circle is covered.
  double measure() const;
  bool full() const;
  bool contains(double angle) const;
  std::vector<Arc> arcs() const;
  const IntervalSet& linear() const { return cut_; }

  // Every arc shifted by angle; rotated(kPi) is the antipodal set.
  CircularIntervalSet rotated(double angle) const;
  CircularIntervalSet united(const CircularIntervalSet& other) const;

 private:
  IntervalSet cut_;
};

CircularIntervalSet circular_union_insert(const CircularIntervalSet& set, double lo, double len);

struct Square {
  Point2 corner;  // lower-left
  double side = 1.0;

  Point2 center() const { return {corner.x + side / 2, corner.y + side / 2}; }
  Point2 vertex(int i) const;  // counter-clockwise from the corner
  bool contains(Point2 p) const;
  bool contains(const Square& inner, double tol = 1e-12) const;
  double distance_to(Point2 p) const;
};

struct Disk {
  Point2 center;
  double radius = 0.0;
};

// Set of directions from a toward points of the square or disk. Full when a
// lies in the closed body.
Arc angular_hull(const Square& sq, Point2 a);
Arc angular_hull(const Disk& disk, Point2 a);

// Line {p : dot(p, n) = offset} with direction (cos theta, sin theta) and
// normal n = (-sin theta, cos theta).
class Line {
 public:
  Line() = default;
  Line(double theta, double offset);

  static Line through(Point2 p, Point2 q);

  double theta() const { return theta_; }
  double offset() const { return offset_; }
  Point2 direction() const { return {std::cos(theta_), std::sin(theta_)}; }
  Point2 normal() const { return {-std::sin(theta_), std::cos(theta_)}; }
  Point2 foot() const { return offset_ * normal(); }

 private:
  double theta_ = 0.0;
  double offset_ = 0.0;
};

double dist_point_line(Point2 p, const Line& line);

// Rectangle with long side along axis_angle. r1 <= r2 are full side lengths.
class RotRect {
 public:
  RotRect(Point2 center, double axis_angle, double r1, double r2);

  Point2 center() const { return center_; }
  double axis_angle() const { return axis_angle_; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }
  bool contains(Point2 p) const;

 private:
  Point2 center_;
  double axis_angle_;
  double r1_;
  double r2_;
  Point2 long_dir_;
  Point2 short_dir_;
};

}  // namespace vislab
