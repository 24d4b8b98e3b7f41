#include "vislab/projections.hpp"

#include <algorithm>
#include <numeric>

#include "vislab/errors.hpp"
#include "vislab/parallel.hpp"
#include "vislab/visibility.hpp"

namespace vislab {

namespace {

constexpr double kTau = IntervalSet::kMergeTolerance;

// Offsets of the projected square relative to its projected corner.
std::pair<double, double> square_offsets(double side, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {side * (std::min(0.0, c) + std::min(0.0, s)), side * (std::max(0.0, c) + std::max(0.0, s))};
}

}  // namespace

AngleGrid::AngleGrid(int n) : count(n) {
  if (n < 1) throw InvalidInput("angle count must be >= 1");
}

std::vector<double> AngleGrid::thetas() const {
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = theta(k);
  return out;
}

Interval project_square(const Square& sq, double theta) {
  const double base = project_point(sq.corner, theta);
  auto [lo, hi] = square_offsets(sq.side, theta);
  return {base + lo, base + hi};
}

IntervalSet project_generation(std::span<const DiskNode> nodes, double theta) {
  std::vector<Interval> pieces;
  pieces.reserve(nodes.size());
  for (const auto& n : nodes) pieces.push_back(project_square(n.square, theta));
  return IntervalSet::from_intervals(std::move(pieces));
}

std::vector<double> projected_lows(const IFSystem& sys, int n, double theta) {
  if (!sys.equal_ratios()) throw InvalidInput("merge projection path needs equal ratios");
  generation_size(sys, n);
  const double lambda = sys.maps.front().lambda;
  std::vector<double> shifts;
  for (const auto& m : sys.maps) shifts.push_back(project_point(m.z, theta));
  std::vector<double> cur{project_square(sys.hull, theta).lo};
  std::vector<double> next, copy, merged;
  for (int k = 0; k < n; ++k) {
    next.clear();
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      copy.resize(cur.size());
      for (std::size_t j = 0; j < cur.size(); ++j) copy[j] = lambda * cur[j] + shifts[i];
      if (!std::is_sorted(copy.begin(), copy.end())) std::sort(copy.begin(), copy.end());
      merged.resize(next.size() + copy.size());
      std::merge(next.begin(), next.end(), copy.begin(), copy.end(), merged.begin());
      next.swap(merged);
    }
    cur.swap(next);
  }
  return cur;
}

double union_measure_sorted(std::span<const double> lows, double length) {
  if (lows.empty()) return 0.0;
  double total = 0.0;
  double lo = lows.front(), hi = lows.front() + length;
  for (std::size_t i = 1; i < lows.size(); ++i) {
    const double a = lows[i];
    if (a <= hi + kTau) {
      hi = std::max(hi, a + length);
    } else {
      total += hi - lo;
      lo = a;
      hi = a + length;
    }
  }
  return total + (hi - lo);
}

std::vector<double> projection_measures(std::span<const DiskNode> nodes, const AngleGrid& grid) {
  std::vector<double> out(grid.count, 0.0);
  if (nodes.empty()) return out;
  parallel_for(grid.count, [&](std::size_t k) {
    out[k] = project_generation(nodes, grid.theta(static_cast<int>(k))).measure();
  });
  return out;
}

std::vector<double> projection_measures(const Generation& g, const AngleGrid& grid) {
  if (!g.system.equal_ratios() || g.nodes.empty()) return projection_measures(g.nodes, grid);
  std::vector<double> out(grid.count, 0.0);
  const double side = g.nodes.front().square.side;
  parallel_for(grid.count, [&](std::size_t k) {
    const double theta = grid.theta(static_cast<int>(k));
    const auto lows = projected_lows(g.system, g.depth, theta);
    out[k] = union_measure_sorted(lows, side * (std::fabs(std::cos(theta)) + std::fabs(std::sin(theta))));
  });
  return out;
}

namespace {

double average(const std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x;
  return v.empty() ? 0.0 : total / static_cast<double>(v.size());
}

}  // namespace

double favard_length(std::span<const DiskNode> nodes, const AngleGrid& grid) {
  return average(projection_measures(nodes, grid));
}

double favard_length(const Generation& g, const AngleGrid& grid) {
  return average(projection_measures(g, grid));
}

int projection_count(std::span<const DiskNode> nodes, double theta, double r) {
  int count = 0;
  for (const auto& n : nodes) {
    const Interval iv = project_square(n.square, theta);
    if (iv.lo <= r && r <= iv.hi) ++count;
  }
  return count;
}

CountingFunction::CountingFunction(std::vector<Interval> pieces) {
  lo_.reserve(pieces.size());
  hi_.reserve(pieces.size());
  for (const auto& p : pieces) {
    if (!(p.lo <= p.hi)) throw InvalidInput("counting function piece with lo > hi");
    lo_.push_back(p.lo);
    hi_.push_back(p.hi);
  }
  std::sort(lo_.begin(), lo_.end());
  std::sort(hi_.begin(), hi_.end());
  lo_prefix_.assign(lo_.size() + 1, 0.0);
  hi_prefix_.assign(hi_.size() + 1, 0.0);
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    lo_prefix_[i + 1] = lo_prefix_[i] + lo_[i];
    hi_prefix_[i + 1] = hi_prefix_[i] + hi_[i];
  }
}

CountingFunction::CountingFunction(std::span<const DiskNode> nodes, double theta)
    : CountingFunction([&] {
        std::vector<Interval> pieces;
        pieces.reserve(nodes.size());
        for (const auto& n : nodes) pieces.push_back(project_square(n.square, theta));
        return pieces;
      }()) {}

int CountingFunction::value(double r) const {
  const auto opened = std::upper_bound(lo_.begin(), lo_.end(), r) - lo_.begin();
  const auto closed = std::lower_bound(hi_.begin(), hi_.end(), r) - hi_.begin();
  return static_cast<int>(opened - closed);
}

double CountingFunction::primitive(double x) const {
  const auto a = static_cast<std::size_t>(std::upper_bound(lo_.begin(), lo_.end(), x) - lo_.begin());
  const auto b = static_cast<std::size_t>(std::upper_bound(hi_.begin(), hi_.end(), x) - hi_.begin());
  return (static_cast<double>(a) * x - lo_prefix_[a]) - (static_cast<double>(b) * x - hi_prefix_[b]);
}

double CountingFunction::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  return primitive(b) - primitive(a);
}

double CountingFunction::total_mass() const { return hi_prefix_.back() - lo_prefix_.back(); }

namespace {

// Walks the merged endpoint sequence; closings within kTau of an opening go
// first, so touching intervals never overlap.
template <class Visit>
void sweep(const std::vector<double>& lo, const std::vector<double>& hi, Visit&& visit) {
  std::size_t i = 0, j = 0;
  int count = 0;
  double x = 0.0;
  while (i < lo.size() || j < hi.size()) {
    const bool close = j < hi.size() && (i >= lo.size() || hi[j] <= lo[i] + kTau);
    const double at = close ? hi[j] : lo[i];
    if (i + j > 0) visit(x, at, count);
    if (close) {
      --count;
      ++j;
    } else {
      ++count;
      ++i;
    }
    x = at;
    visit(x, x, count);
  }
}

}  // namespace

int CountingFunction::sup_norm() const {
  int best = 0;
  sweep(lo_, hi_, [&](double, double, int c) { best = std::max(best, c); });
  return best;
}

double CountingFunction::level_set_measure(int K) const {
  double total = 0.0;
  sweep(lo_, hi_, [&](double a, double b, int c) {
    if (c >= K && b > a) total += b - a;
  });
  return total;
}

std::vector<double> ladder_radii(const Generation& g, double theta, HlLadder ladder) {
  if (g.nodes.empty()) return {};
  double side = g.nodes.front().square.side;
  for (const auto& n : g.nodes) side = std::min(side, n.square.side);
  const double base = side * (std::fabs(std::cos(theta)) + std::fabs(std::sin(theta)));
  const int up = static_cast<int>(std::ceil(std::log2(g.system.hull.side / side) - 1e-9));
  std::vector<double> radii;
  for (int k = -ladder.below; k <= up + ladder.above; ++k) radii.push_back(std::ldexp(base, k));
  return radii;
}

double maximal_average(const CountingFunction& f, std::span<const double> radii, double r) {
  double best = 0.0;
  for (double rho : radii) best = std::max(best, f.integral(r - rho, r + rho) / (2.0 * rho));
  return best;
}

MaximalFunction::MaximalFunction(const Generation& g, double theta, HlLadder ladder)
    : f_(g.nodes, theta), radii_(ladder_radii(g, theta, ladder)) {}

double hl_maximal(const Generation& g, double theta, double r, HlLadder ladder) {
  return MaximalFunction(g, theta, ladder)(r);
}

StackReport stacked_census(const Generation& g, double theta, double K, HlLadder ladder) {
  if (!(K > 0.0)) throw InvalidInput("stack threshold K must be > 0");
  const MaximalFunction M(g, theta, ladder);
  std::vector<char> stacked(g.nodes.size(), 0);
  parallel_for(g.nodes.size(), [&](std::size_t q) {
    const Interval iv = project_square(g.nodes[q].square, theta);
    bool all = true;
    for (int j = 0; j < 9 && all; ++j) all = M(iv.lo + (j + 0.5) / 9.0 * iv.length()) >= K;
    stacked[q] = all;
  });
  StackReport rep;
  rep.n = g.depth;
  rep.theta = theta;
  rep.K = K;
  rep.stacked_count = static_cast<std::size_t>(std::count(stacked.begin(), stacked.end(), 1));
  rep.stacked_fraction =
      g.nodes.empty() ? 0.0 : static_cast<double>(rep.stacked_count) / static_cast<double>(g.nodes.size());
  rep.support_measure = g.nodes.empty() ? 0.0 : project_generation(g.nodes, theta).measure();
  return rep;
}

BadAngleReport bad_angle_measure(const IFSystem& sys, int L, const AngleGrid& grid) {
  const Generation g = generate_generation(sys, L);
  BadAngleReport rep;
  rep.L = L;
  rep.favard = favard_length(g, grid);
  if (!(rep.favard > 0.0)) throw DegenerateError("Favard length is zero; K = 1/sqrt(Fav) undefined");
  rep.K = 1.0 / std::sqrt(rep.favard);
  std::vector<char> bad(grid.count, 0);
  parallel_for(grid.count, [&](std::size_t k) {
    const double theta = grid.theta(static_cast<int>(k));
    bad[k] = CountingFunction(g.nodes, theta - kPi / 2).sup_norm() <= rep.K;
  });
  for (int k = 0; k < grid.count; ++k)
    if (bad[k]) rep.bad_thetas.push_back(grid.theta(k));
  rep.measure_estimate = static_cast<double>(rep.bad_thetas.size()) * grid.spacing();
  return rep;
}

int log_ceiling(int n, std::size_t s) {
  if (n < 1) throw InvalidInput("log_ceiling needs n >= 1");
  int L = 0;
  for (long long p = 1; p < n; p *= static_cast<long long>(s)) ++L;
  return L;
}

FavUpperReport fav_upper_pipeline(const IFSystem& sys, Point2 a, int n, const AngleGrid& grid) {
  if (sys.hull.distance_to(a) < 0.1 * sys.hull.side)
    throw InvalidInput("vantage must keep distance >= 0.1 * hull side from the hull");
  FavUpperReport rep;
  rep.n = n;
  const Generation g = generate_generation(sys, n);
  rep.vis_measured = visibility(g.nodes, a);
  rep.L = log_ceiling(std::max(n, 1), sys.size());
  rep.bound = std::sqrt(favard_length(generate_generation(sys, rep.L), grid));
  return rep;
}

}  // namespace vislab
