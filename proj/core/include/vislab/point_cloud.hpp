#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "vislab/geometry.hpp"

namespace vislab {

struct Generation;

struct PointCloud {
  std::vector<Point2> points;
  double delta = 0.0;
  std::vector<double> weights;  // empty means uniform
  bool separated = false;       // pairwise distances >= delta, verified when set

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool weighted() const { return !weights.empty(); }
  double weight(std::size_t i) const {
    return weights.empty() ? 1.0 / static_cast<double>(points.size()) : weights[i];
  }
  // Throws InvalidInput unless the weights are nonnegative and sum to 1.
  void require_normalized(double tol = 1e-9) const;
};

// Square centres of a generation, delta = node side.
PointCloud centers_of(const Generation& g);

struct ClosestPair {
  double distance = 0.0;  // +inf for fewer than two points
  std::size_t i = 0;
  std::size_t j = 0;
};

// Grid-hash search; cell size is the probe scale.
ClosestPair closest_pair(const std::vector<Point2>& pts, double probe);

PointCloud translated(const PointCloud& A, Point2 shift);

// One "x y [weight]" per line; '#' starts a comment.
PointCloud load_point_cloud(const std::string& path, double delta);
void save_point_cloud(const PointCloud& A, const std::string& path);

}  // namespace vislab
