#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vislab/geometry.hpp"
#include "vislab/ifs.hpp"

namespace vislab {

// Midpoints of count equal cells of [0, pi).
struct AngleGrid {
  int count = 4096;

  explicit AngleGrid(int n = 4096);
  double theta(int k) const { return (k + 0.5) * kPi / count; }
  double spacing() const { return kPi / count; }
  std::vector<double> thetas() const;
};

// x cos(theta) + y sin(theta)
inline double project_point(Point2 p, double theta) {
  return p.x * std::cos(theta) + p.y * std::sin(theta);
}

Interval project_square(const Square& sq, double theta);

IntervalSet project_generation(std::span<const DiskNode> nodes, double theta);

// Sorted lower endpoints of the projected squares of J_n, built by merging
// the s affine copies of stage n-1. Equal-ratio systems only.
std::vector<double> projected_lows(const IFSystem& sys, int n, double theta);

// Measure of the union of equal-length intervals given their sorted starts.
double union_measure_sorted(std::span<const double> lows, double length);

// Per-angle projection measures, index k at grid.theta(k).
std::vector<double> projection_measures(std::span<const DiskNode> nodes, const AngleGrid& grid);
std::vector<double> projection_measures(const Generation& g, const AngleGrid& grid);

double favard_length(std::span<const DiskNode> nodes, const AngleGrid& grid);
// Uses the merge path for equal-ratio systems.
double favard_length(const Generation& g, const AngleGrid& grid);

int projection_count(std::span<const DiskNode> nodes, double theta, double r);

// f = sum of indicators of closed intervals.
class CountingFunction {
 public:
  CountingFunction() = default;
  explicit CountingFunction(std::vector<Interval> pieces);
  CountingFunction(std::span<const DiskNode> nodes, double theta);

  int value(double r) const;
  double integral(double a, double b) const;
  double total_mass() const;
  // Essential supremum: touching endpoints do not stack.
  int sup_norm() const;
  // |{r : f(r) >= K}|, with the same convention as sup_norm.
  double level_set_measure(int K) const;
  double support_measure() const { return level_set_measure(1); }
  std::size_t pieces() const { return lo_.size(); }

 private:
  double primitive(double x) const;

  std::vector<double> lo_, hi_;
  std::vector<double> lo_prefix_, hi_prefix_;
};

// Radii base * 2^k for k = -below .. ceil(log2(hull side / node side)) + above,
// with base the width of one projected stage-n square.
struct HlLadder {
  int below = 6;
  int above = 0;
};

std::vector<double> ladder_radii(const Generation& g, double theta, HlLadder ladder = {});

// Centered maximal average max_rho (1/2rho) int_{r-rho}^{r+rho} f.
double maximal_average(const CountingFunction& f, std::span<const double> radii, double r);

class MaximalFunction {
 public:
  MaximalFunction(const Generation& g, double theta, HlLadder ladder = {});

  double operator()(double r) const { return maximal_average(f_, radii_, r); }
  const CountingFunction& counting() const { return f_; }
  std::span<const double> radii() const { return radii_; }

 private:
  CountingFunction f_;
  std::vector<double> radii_;
};

double hl_maximal(const Generation& g, double theta, double r, HlLadder ladder = {});

struct StackReport {
  int n = 0;
  double theta = 0.0;
  double K = 0.0;
  double stacked_fraction = 0.0;
  std::size_t stacked_count = 0;
  double support_measure = 0.0;
};

StackReport stacked_census(const Generation& g, double theta, double K, HlLadder ladder = {});

struct BadAngleReport {
  int L = 0;
  double K = 0.0;
  double favard = 0.0;
  double measure_estimate = 0.0;
  std::vector<double> bad_thetas;
};

// E_L = {theta : sup f_{L, theta - pi/2} <= K} with K = 1/sqrt(Fav(J_L)).
BadAngleReport bad_angle_measure(const IFSystem& sys, int L, const AngleGrid& grid);

struct FavUpperReport {
  int n = 0;
  int L = 0;
  double vis_measured = 0.0;
  double bound = 0.0;
};

FavUpperReport fav_upper_pipeline(const IFSystem& sys, Point2 a, int n, const AngleGrid& grid);

// Smallest L with s^L >= n.
int log_ceiling(int n, std::size_t s);

}  // namespace vislab
