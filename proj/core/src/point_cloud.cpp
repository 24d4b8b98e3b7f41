#include "vislab/point_cloud.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "vislab/errors.hpp"
#include "vislab/ifs.hpp"

namespace vislab {

void PointCloud::require_normalized(double tol) const {
  if (weights.empty()) return;
  if (weights.size() != points.size())
    throw InvalidInput("weights and points differ in length");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("weights must be nonnegative");
    total += w;
  }
  if (std::fabs(total - 1.0) > tol)
    throw InvalidInput("weights must sum to 1 (sum is " + std::to_string(total) + ")");
}

PointCloud centers_of(const Generation& g) {
  PointCloud A;
  A.points = g.centers();
  A.delta = g.nodes.empty() ? 0.0 : g.nodes.front().square.side;
  for (const auto& n : g.nodes) A.delta = std::min(A.delta, n.square.side);
  A.separated = g.system.osc_asserted;
  return A;
}

ClosestPair closest_pair(const std::vector<Point2>& pts, double probe) {
  ClosestPair best{std::numeric_limits<double>::infinity(), 0, 0};
  if (pts.size() < 2) return best;
  if (!(probe > 0.0)) throw InvalidInput("closest-pair probe scale must be > 0");
  auto key = [](std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint32_t>(cy);
  };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells;
  cells.reserve(pts.size() * 2);
  auto cell_of = [&](Point2 p) {
    return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::floor(p.x / probe)),
                                                 static_cast<std::int64_t>(std::floor(p.y / probe))};
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto [cx, cy] = cell_of(pts[i]);
    cells[key(cx, cy)].push_back(i);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto [cx, cy] = cell_of(pts[i]);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells.find(key(cx + dx, cy + dy));
        if (it == cells.end()) continue;
        for (std::size_t j : it->second) {
          if (j <= i) continue;
          const double d = distance(pts[i], pts[j]);
          if (d < best.distance) best = {d, i, j};
        }
      }
  }
  if (!std::isfinite(best.distance)) {
    // Nothing within one probe cell: fall back to the exact O(n^2) scan.
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double d = distance(pts[i], pts[j]);
        if (d < best.distance) best = {d, i, j};
      }
  }
  return best;
}

PointCloud translated(const PointCloud& A, Point2 shift) {
  PointCloud out = A;
  for (auto& p : out.points) p = p + shift;
  return out;
}

PointCloud load_point_cloud(const std::string& path, double delta) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open point file '" + path + "'");
  PointCloud A;
  A.delta = delta;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    std::vector<double> vals;
    double v;
    while (row >> v) vals.push_back(v);
    if (!row.eof()) throw InvalidInput(path + ":" + std::to_string(lineno) + ": not a number");
    if (vals.empty()) continue;
    if (vals.size() < 2 || vals.size() > 3)
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": expected 'x y [weight]'");
    A.points.push_back({vals[0], vals[1]});
    if (vals.size() == 3) {
      if (A.weights.size() + 1 != A.points.size())
        throw InvalidInput(path + ": weights must be given for all points or none");
      A.weights.push_back(vals[2]);
    } else if (!A.weights.empty()) {
      throw InvalidInput(path + ": weights must be given for all points or none");
    }
  }
  return A;
}

void save_point_cloud(const PointCloud& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write point file '" + path + "'");
  char buf[64];
  for (std::size_t i = 0; i < A.size(); ++i) {
    auto put = [&](double x) {
      auto r = std::to_chars(buf, buf + sizeof buf, x);
      out.write(buf, r.ptr - buf);
    };
    put(A.points[i].x);
    out << ' ';
    put(A.points[i].y);
    if (A.weighted()) {
      out << ' ';
      put(A.weights[i]);
    }
    out << '\n';
  }
}

}  // namespace vislab
