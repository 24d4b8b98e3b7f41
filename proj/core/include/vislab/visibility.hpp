#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "vislab/geometry.hpp"
#include "vislab/ifs.hpp"
#include "vislab/point_cloud.hpp"
#include "vislab/projections.hpp"

namespace vislab {

CircularIntervalSet radial_projection(std::span<const DiskNode> nodes, Point2 a);
CircularIntervalSet radial_projection(std::span<const Square> squares, Point2 a);
CircularIntervalSet radial_projection(std::span<const Disk> disks, Point2 a);

// |P_a(S)| / 2pi
double visibility(std::span<const DiskNode> nodes, Point2 a);

// Union of radius-r disks around the points.
std::vector<Disk> ball_union(const PointCloud& A, double r);

// Angular separation of x and y seen from a over |x-y| dist(a, line xy).
double radial_separation_ratio(Point2 a, Point2 x, Point2 y);

inline constexpr std::uint64_t kDefaultLineBudget = 400'000'000;

struct DiscreteLine {
  int k1 = 0;
  int k2 = 0;
  double delta = 0.0;
  Line line;
};

// Lines l_{k1,k2}: direction k1*delta, through (-k2 delta sin, k2 delta cos),
// for 0 <= k1 <= pi/delta and |k2| <= d/delta. Not materialised.
class LineFamily {
 public:
  LineFamily(double delta, double d, std::uint64_t budget = kDefaultLineBudget);

  double delta() const { return delta_; }
  double d() const { return d_; }
  int k1_count() const { return k1_count_; }
  int k2_max() const { return k2_max_; }
  int k2_count() const { return 2 * k2_max_ + 1; }
  std::uint64_t size() const {
    return static_cast<std::uint64_t>(k1_count_) * static_cast<std::uint64_t>(k2_count());
  }
  double angle(int k1) const { return k1 * delta_; }
  DiscreteLine line(int k1, int k2) const;
  // Row-major by (k1, k2 + k2_max).
  DiscreteLine at(std::uint64_t index) const;

 private:
  double delta_;
  double d_;
  int k1_count_;
  int k2_max_;
};

LineFamily build_line_family(double delta, double d, std::uint64_t budget = kDefaultLineBudget);

inline constexpr double kDefaultC = 4.0;

// |{p in A : dist(p, line) <= rho}|
int count_near_line(const Line& line, const PointCloud& A, double rho);

int f_delta(const DiscreteLine& l, const PointCloud& A, double c = kDefaultC);

// Calls visit(k1, counts) once per direction, counts[k2 + k2_max] = f_delta.
void for_each_direction(const LineFamily& fam, const PointCloud& A, double c,
                        const std::function<void(int, std::span<const int>)>& visit);

int vis_delta(Point2 a, const PointCloud& A, const LineFamily& fam, double c = kDefaultC);

double l2_norm_f(const PointCloud& A, const LineFamily& fam, double c = kDefaultC);

// Lines through the 2 delta ball of a whose direction lies in Theta or its antipode.
std::int64_t mass(Point2 a, const Arc& theta, const PointCloud& A, const LineFamily& fam,
                  double c = kDefaultC);

// Pairs (a', l), a' != a, with a and a' in l^{c delta} and direction of l in
// Theta or its antipode.
std::int64_t cone_count(Point2 a, const Arc& theta, const PointCloud& A, const LineFamily& fam,
                        double c = kDefaultC);

// |A intersected with the double cone of directions Theta u (Theta + pi) at a|.
std::size_t double_cone_population(Point2 a, const Arc& theta, const PointCloud& A);

struct IntervalSelection {
  int i1 = 0;  // 1-based, Theta_i = [2pi(i-1)/k, 2pi i/k)
  int i2 = 0;
  Arc theta1;
  Arc theta2;
  std::int64_t mass1 = 0;
  std::int64_t mass2 = 0;
};

// First pair (i1 < i2) whose masses exceed |A|/10k and whose line directions
// stay 2pi/k apart, also after the antipodal shift.
std::optional<IntervalSelection> select_intervals(Point2 a, const PointCloud& A,
                                                  const LineFamily& fam, int k,
                                                  double c = kDefaultC);

// Masses of the k half-open candidate arcs.
std::vector<std::int64_t> candidate_masses(Point2 a, const PointCloud& A, const LineFamily& fam,
                                           int k, double c = kDefaultC);

// Buckets j hold lines with 2^j < f_delta <= 2^(j+1), so f = 1 lands in j = -1.
struct RichnessHistogram {
  std::map<int, std::uint64_t> buckets;
  std::uint64_t lines_considered = 0;
  std::uint64_t empty_lines = 0;

  std::uint64_t total() const;
  static int bucket_of(int f);
};

RichnessHistogram richness_histogram(const PointCloud& A, const LineFamily& fam,
                                     double c = kDefaultC,
                                     std::optional<Arc> direction_filter = std::nullopt);

inline constexpr std::uint64_t kDefaultTableBudget = 40'000'000;

// f_delta for every line of the family, for repeated vantage queries.
class IncidenceTable {
 public:
  IncidenceTable(const LineFamily& fam, const PointCloud& A, double c = kDefaultC,
                 std::uint64_t budget = kDefaultTableBudget);

  const LineFamily& family() const { return fam_; }
  double c() const { return c_; }
  int f(int k1, int k2) const {
    return counts_[static_cast<std::size_t>(k1) * fam_.k2_count() + (k2 + fam_.k2_max())];
  }
  int vis_delta(Point2 a) const;
  std::int64_t mass(Point2 a, const Arc& theta) const;

 private:
  LineFamily fam_;
  double c_;
  std::vector<std::int32_t> counts_;
};

struct Segment {
  Point2 start;
  Point2 end;
  double length() const { return distance(start, end); }
};

// Chord of the line inside B(0, d).
Segment chord(const Line& l, double d);

struct ScanResult {
  double lambda = 0.0;
  double sublevel_length = 0.0;
  double segment_length = 0.0;
  std::size_t samples = 0;
  std::size_t low_samples = 0;
};

// vis_delta at the midpoints of ceil(length/step) equal cells of the segment.
std::vector<int> vis_profile(const Segment& seg, const IncidenceTable& table, double sample_step);

ScanResult scan_from_profile(std::span<const int> profile, double segment_length, double delta,
                             double lambda);

// Length of {a on the segment : vis_delta(a) < lambda / delta}. The segment
// defaults to the chord of l0 in B(0, d).
ScanResult scan_line_low_visibility(const Line& l0, const PointCloud& A, const LineFamily& fam,
                                    double lambda, double sample_step, double c = kDefaultC,
                                    std::optional<Segment> segment = std::nullopt);

// g(theta) = number of squares met by the line through the origin in direction
// theta, i.e. the sum over squares of the indicators of their angular hull and
// its antipode.
class RadialCounting {
 public:
  RadialCounting(std::span<const DiskNode> nodes, Point2 origin = {0.0, 0.0});

  int value(double theta) const;
  // Centred maximal average over radii base * 2^k up to pi, with base the
  // smallest arc width.
  double maximal(double theta) const;
  std::span<const double> radii() const { return radii_; }
  CircularIntervalSet support() const;

 private:
  std::vector<Arc> arcs_;
  CountingFunction unrolled_;
  std::vector<double> radii_;
};

}  // namespace vislab
