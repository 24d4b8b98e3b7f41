#include "vislab/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vislab/errors.hpp"
#include "vislab/parallel.hpp"

namespace vislab {

CircularIntervalSet radial_projection(std::span<const Square> squares, Point2 a) {
  std::vector<Arc> arcs;
  arcs.reserve(squares.size());
  for (const auto& sq : squares) arcs.push_back(angular_hull(sq, a));
  return CircularIntervalSet::from_arcs(arcs);
}

CircularIntervalSet radial_projection(std::span<const DiskNode> nodes, Point2 a) {
  std::vector<Arc> arcs;
  arcs.reserve(nodes.size());
  for (const auto& n : nodes) arcs.push_back(angular_hull(n.square, a));
  return CircularIntervalSet::from_arcs(arcs);
}

CircularIntervalSet radial_projection(std::span<const Disk> disks, Point2 a) {
  std::vector<Arc> arcs;
  arcs.reserve(disks.size());
  for (const auto& d : disks) arcs.push_back(angular_hull(d, a));
  return CircularIntervalSet::from_arcs(arcs);
}

double visibility(std::span<const DiskNode> nodes, Point2 a) {
  return radial_projection(nodes, a).measure() / kTwoPi;
}

std::vector<Disk> ball_union(const PointCloud& A, double r) {
  std::vector<Disk> out;
  out.reserve(A.size());
  for (const auto& p : A.points) out.push_back({p, r});
  return out;
}

double radial_separation_ratio(Point2 a, Point2 x, Point2 y) {
  const double arc = arc_distance(std::atan2(x.y - a.y, x.x - a.x), std::atan2(y.y - a.y, y.x - a.x));
  return arc / (distance(x, y) * dist_point_line(a, Line::through(x, y)));
}

LineFamily::LineFamily(double delta, double d, std::uint64_t budget) : delta_(delta), d_(d) {
  if (!(delta > 0.0) || !std::isfinite(d) || !(delta <= d))
    throw InvalidInput("line family needs 0 < delta <= d");
  const double k1 = std::floor(kPi / delta + 1e-9) + 1.0;
  const double k2 = std::floor(d / delta + 1e-9);
  const double lines = k1 * (2.0 * k2 + 1.0);
  if (lines > static_cast<double>(budget))
    throw ResourceError("delta too small for line budget: family needs " +
                        std::to_string(static_cast<std::uint64_t>(lines)) + " lines, cap is " +
                        std::to_string(budget));
  k1_count_ = static_cast<int>(k1);
  k2_max_ = static_cast<int>(k2);
}

DiscreteLine LineFamily::line(int k1, int k2) const {
  return {k1, k2, delta_, Line(angle(k1), k2 * delta_)};
}

DiscreteLine LineFamily::at(std::uint64_t index) const {
  const auto k2n = static_cast<std::uint64_t>(k2_count());
  return line(static_cast<int>(index / k2n), static_cast<int>(index % k2n) - k2_max_);
}

LineFamily build_line_family(double delta, double d, std::uint64_t budget) {
  return LineFamily(delta, d, budget);
}

int count_near_line(const Line& line, const PointCloud& A, double rho) {
  int n = 0;
  for (const auto& p : A.points)
    if (dist_point_line(p, line) <= rho) ++n;
  return n;
}

int f_delta(const DiscreteLine& l, const PointCloud& A, double c) {
  return count_near_line(l.line, A, c * l.delta);
}

namespace {

struct Direction {
  Point2 normal;
  double delta;
  int k2_max;

  Direction(const LineFamily& fam, int k1) : delta(fam.delta()), k2_max(fam.k2_max()) {
    const Line l(fam.angle(k1), 0.0);
    normal = l.normal();
  }

  // Same expression as dist_point_line against the family line's offset.
  bool near(double t, int k2, double rho) const { return std::fabs(t - k2 * delta) <= rho; }

  // k2 range of family lines within rho of a point with normal coordinate t.
  bool range(double t, double rho, int& lo, int& hi) const {
    double flo = std::ceil((t - rho) / delta);
    double fhi = std::floor((t + rho) / delta);
    flo = std::max(flo, static_cast<double>(-k2_max) - 1);
    fhi = std::min(fhi, static_cast<double>(k2_max) + 1);
    if (flo > fhi + 1) return false;
    lo = static_cast<int>(flo);
    hi = static_cast<int>(fhi);
    while (lo - 1 >= -k2_max && near(t, lo - 1, rho)) --lo;
    while (lo <= hi && !near(t, lo, rho)) ++lo;
    while (hi + 1 <= k2_max && near(t, hi + 1, rho)) ++hi;
    while (hi >= lo && !near(t, hi, rho)) --hi;
    lo = std::max(lo, -k2_max);
    hi = std::min(hi, k2_max);
    return lo <= hi;
  }
};

void direction_counts(const LineFamily& fam, const PointCloud& A, double c, int k1,
                      std::vector<int>& counts, std::vector<int>& diff) {
  const Direction dir(fam, k1);
  const int K = fam.k2_max();
  const double rho = c * fam.delta();
  diff.assign(fam.k2_count() + 1, 0);
  for (const auto& p : A.points) {
    int lo, hi;
    if (!dir.range(dot(p, dir.normal), rho, lo, hi)) continue;
    ++diff[lo + K];
    --diff[hi + K + 1];
  }
  counts.resize(fam.k2_count());
  int run = 0;
  for (int i = 0; i < fam.k2_count(); ++i) counts[i] = run += diff[i];
}

bool direction_in(const Arc& theta, double phi) {
  return theta.contains(phi) || theta.contains(phi + kPi);
}

}  // namespace

void for_each_direction(const LineFamily& fam, const PointCloud& A, double c,
                        const std::function<void(int, std::span<const int>)>& visit) {
  std::vector<int> counts, diff;
  for (int k1 = 0; k1 < fam.k1_count(); ++k1) {
    direction_counts(fam, A, c, k1, counts, diff);
    visit(k1, counts);
  }
}

int vis_delta(Point2 a, const PointCloud& A, const LineFamily& fam, double c) {
  if (A.empty()) return 0;
  const double rho = c * fam.delta();
  int total = 0;
  std::vector<char> hit;
  for (int k1 = 0; k1 < fam.k1_count(); ++k1) {
    const Direction dir(fam, k1);
    int alo, ahi;
    if (!dir.range(dot(a, dir.normal), 2.0 * fam.delta(), alo, ahi)) continue;
    hit.assign(ahi - alo + 1, 0);
    int open = ahi - alo + 1;
    for (const auto& p : A.points) {
      int lo, hi;
      if (!dir.range(dot(p, dir.normal), rho, lo, hi)) continue;
      for (int k2 = std::max(lo, alo); k2 <= std::min(hi, ahi); ++k2) {
        if (!hit[k2 - alo]) {
          hit[k2 - alo] = 1;
          --open;
        }
      }
      if (open == 0) break;
    }
    total += (ahi - alo + 1) - open;
  }
  return total;
}

double l2_norm_f(const PointCloud& A, const LineFamily& fam, double c) {
  if (A.empty()) return 0.0;
  std::vector<double> per_direction(fam.k1_count(), 0.0);
  parallel_for(fam.k1_count(), [&](std::size_t k1) {
    std::vector<int> counts, diff;
    direction_counts(fam, A, c, static_cast<int>(k1), counts, diff);
    double s = 0.0;
    for (int f : counts) s += static_cast<double>(f) * f;
    per_direction[k1] = s;
  });
  double total = 0.0;
  for (double s : per_direction) total += s;
  return total / static_cast<double>(fam.size());
}

namespace {

// Sum over lines through the rho_a ball of a (direction filtered) of g(f, k2 range).
template <class PerLine>
std::int64_t lines_through(Point2 a, const Arc* theta, const PointCloud& A, const LineFamily& fam,
                           double c, double rho_a, PerLine&& per_line) {
  const double rho = c * fam.delta();
  std::int64_t total = 0;
  std::vector<int> f;
  for (int k1 = 0; k1 < fam.k1_count(); ++k1) {
    if (theta && !direction_in(*theta, fam.angle(k1))) continue;
    const Direction dir(fam, k1);
    int alo, ahi;
    if (!dir.range(dot(a, dir.normal), rho_a, alo, ahi)) continue;
    f.assign(ahi - alo + 1, 0);
    for (const auto& p : A.points) {
      int lo, hi;
      if (!dir.range(dot(p, dir.normal), rho, lo, hi)) continue;
      for (int k2 = std::max(lo, alo); k2 <= std::min(hi, ahi); ++k2) ++f[k2 - alo];
    }
    for (int v : f) total += per_line(v);
  }
  return total;
}

}  // namespace

std::int64_t mass(Point2 a, const Arc& theta, const PointCloud& A, const LineFamily& fam, double c) {
  return lines_through(a, &theta, A, fam, c, 2.0 * fam.delta(), [](int f) { return f; });
}

std::int64_t cone_count(Point2 a, const Arc& theta, const PointCloud& A, const LineFamily& fam,
                        double c) {
  const auto copies = static_cast<int>(std::count(A.points.begin(), A.points.end(), a));
  return lines_through(a, &theta, A, fam, c, c * fam.delta(),
                       [copies](int f) { return std::max(0, f - copies); });
}

std::size_t double_cone_population(Point2 a, const Arc& theta, const PointCloud& A) {
  std::size_t n = 0;
  for (const auto& p : A.points) {
    if (p == a) continue;
    if (direction_in(theta, std::atan2(p.y - a.y, p.x - a.x))) ++n;
  }
  return n;
}

std::vector<std::int64_t> candidate_masses(Point2 a, const PointCloud& A, const LineFamily& fam,
                                           int k, double c) {
  if (k <= 10 || k % 2 != 0) throw InvalidInput("interval selection needs k even and k > 10");
  std::vector<std::int64_t> masses(k, 0);
  const double rho = c * fam.delta();
  std::vector<int> f;
  for (int k1 = 0; k1 < fam.k1_count(); ++k1) {
    const Direction dir(fam, k1);
    int alo, ahi;
    if (!dir.range(dot(a, dir.normal), 2.0 * fam.delta(), alo, ahi)) continue;
    f.assign(ahi - alo + 1, 0);
    for (const auto& p : A.points) {
      int lo, hi;
      if (!dir.range(dot(p, dir.normal), rho, lo, hi)) continue;
      for (int k2 = std::max(lo, alo); k2 <= std::min(hi, ahi); ++k2) ++f[k2 - alo];
    }
    std::int64_t m = 0;
    for (int v : f) m += v;
    const int idx = std::min(k - 1, static_cast<int>(std::floor(fam.angle(k1) * k / kTwoPi)));
    masses[idx] += m;
    masses[(idx + k / 2) % k] += m;
  }
  return masses;
}

std::optional<IntervalSelection> select_intervals(Point2 a, const PointCloud& A,
                                                  const LineFamily& fam, int k, double c) {
  const auto masses = candidate_masses(a, A, fam, k, c);
  const double threshold = static_cast<double>(A.size()) / (10.0 * k);
  auto gap = [k](int i, int j) {
    const int d = ((i - j) % k + k) % k;
    return std::min(d, k - d);
  };
  for (int i = 0; i < k; ++i) {
    if (!(static_cast<double>(masses[i]) > threshold)) continue;
    for (int j = i + 1; j < k; ++j) {
      if (!(static_cast<double>(masses[j]) > threshold)) continue;
      if (gap(i, j) < 2 || gap(i, j + k / 2) < 2) continue;
      const double w = kTwoPi / k;
      return IntervalSelection{i + 1, j + 1, Arc{i * w, w}, Arc{j * w, w}, masses[i], masses[j]};
    }
  }
  return std::nullopt;
}

std::uint64_t RichnessHistogram::total() const {
  std::uint64_t t = 0;
  for (const auto& [j, n] : buckets) t += n;
  return t;
}

int RichnessHistogram::bucket_of(int f) {
  if (f < 1) throw InvalidInput("richness bucket needs f >= 1");
  int j = -1;
  while ((static_cast<std::int64_t>(1) << (j + 1)) < f) ++j;
  return j;
}

RichnessHistogram richness_histogram(const PointCloud& A, const LineFamily& fam, double c,
                                     std::optional<Arc> direction_filter) {
  RichnessHistogram h;
  for_each_direction(fam, A, c, [&](int k1, std::span<const int> counts) {
    if (direction_filter && !direction_in(*direction_filter, fam.angle(k1))) return;
    for (int f : counts) {
      ++h.lines_considered;
      if (f == 0) {
        ++h.empty_lines;
      } else {
        ++h.buckets[RichnessHistogram::bucket_of(f)];
      }
    }
  });
  return h;
}

IncidenceTable::IncidenceTable(const LineFamily& fam, const PointCloud& A, double c,
                               std::uint64_t budget)
    : fam_(fam), c_(c) {
  if (fam.size() > budget)
    throw ResourceError("incidence table needs " + std::to_string(fam.size()) +
                        " entries, cap is " + std::to_string(budget));
  counts_.assign(fam.size(), 0);
  const auto row = static_cast<std::size_t>(fam.k2_count());
  parallel_for(fam.k1_count(), [&](std::size_t k1) {
    std::vector<int> counts, diff;
    direction_counts(fam, A, c, static_cast<int>(k1), counts, diff);
    std::copy(counts.begin(), counts.end(), counts_.begin() + k1 * row);
  });
}

int IncidenceTable::vis_delta(Point2 a) const {
  int total = 0;
  for (int k1 = 0; k1 < fam_.k1_count(); ++k1) {
    const Direction dir(fam_, k1);
    int lo, hi;
    if (!dir.range(dot(a, dir.normal), 2.0 * fam_.delta(), lo, hi)) continue;
    for (int k2 = lo; k2 <= hi; ++k2)
      if (f(k1, k2) > 0) ++total;
  }
  return total;
}

std::int64_t IncidenceTable::mass(Point2 a, const Arc& theta) const {
  std::int64_t total = 0;
  for (int k1 = 0; k1 < fam_.k1_count(); ++k1) {
    if (!direction_in(theta, fam_.angle(k1))) continue;
    const Direction dir(fam_, k1);
    int lo, hi;
    if (!dir.range(dot(a, dir.normal), 2.0 * fam_.delta(), lo, hi)) continue;
    for (int k2 = lo; k2 <= hi; ++k2) total += f(k1, k2);
  }
  return total;
}

Segment chord(const Line& l, double d) {
  if (std::fabs(l.offset()) >= d) throw InvalidInput("line misses B(0, d)");
  const double h = std::sqrt(d * d - l.offset() * l.offset());
  const Point2 foot = l.foot();
  const Point2 dir = l.direction();
  return {foot - h * dir, foot + h * dir};
}

std::vector<int> vis_profile(const Segment& seg, const IncidenceTable& table, double sample_step) {
  if (!(sample_step > 0.0)) throw InvalidInput("sample step must be > 0");
  const double len = seg.length();
  const auto N = static_cast<std::size_t>(std::max(1.0, std::ceil(len / sample_step - 1e-9)));
  std::vector<int> out(N, 0);
  parallel_for(N, [&](std::size_t i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(N);
    out[i] = table.vis_delta(seg.start + t * (seg.end - seg.start));
  });
  return out;
}

ScanResult scan_from_profile(std::span<const int> profile, double segment_length, double delta,
                             double lambda) {
  ScanResult r;
  r.lambda = lambda;
  r.segment_length = segment_length;
  r.samples = profile.size();
  const double cut = lambda / delta;
  for (int v : profile)
    if (v < cut) ++r.low_samples;
  r.sublevel_length = r.samples == 0 ? 0.0
                                     : static_cast<double>(r.low_samples) * segment_length /
                                           static_cast<double>(r.samples);
  return r;
}

ScanResult scan_line_low_visibility(const Line& l0, const PointCloud& A, const LineFamily& fam,
                                    double lambda, double sample_step, double c,
                                    std::optional<Segment> segment) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidInput("lambda must lie in (0, 1]");
  if (!(sample_step > 0.0) || sample_step > fam.delta())
    throw InvalidInput("sample step must lie in (0, delta]");
  const Segment seg = segment ? *segment : chord(l0, fam.d());
  const IncidenceTable table(fam, A, c);
  const auto profile = vis_profile(seg, table, sample_step);
  return scan_from_profile(profile, seg.length(), fam.delta(), lambda);
}

RadialCounting::RadialCounting(std::span<const DiskNode> nodes, Point2 origin) {
  std::vector<Interval> pieces;
  double base = kPi;
  for (const auto& n : nodes) {
    const Arc arc = angular_hull(n.square, origin);
    arcs_.push_back(arc);
    if (arc.full()) {
      // both the arc and its antipode cover everything
      pieces.push_back({-kTwoPi, 2.0 * kTwoPi});
      pieces.push_back({-kTwoPi, 2.0 * kTwoPi});
      continue;
    }
    base = std::min(base, arc.len);
    for (double start : {arc.lo, wrap_two_pi(arc.lo + kPi)})
      for (double shift : {-kTwoPi, 0.0, kTwoPi}) pieces.push_back({start + shift, start + shift + arc.len});
  }
  unrolled_ = CountingFunction(std::move(pieces));
  for (int k = -2; std::ldexp(base, k) <= kPi; ++k) radii_.push_back(std::ldexp(base, k));
}

int RadialCounting::value(double theta) const { return unrolled_.value(wrap_two_pi(theta)); }

double RadialCounting::maximal(double theta) const {
  return maximal_average(unrolled_, radii_, wrap_two_pi(theta));
}

CircularIntervalSet RadialCounting::support() const {
  std::vector<Arc> all;
  for (const auto& a : arcs_) {
    all.push_back(a);
    if (!a.full()) all.push_back({wrap_two_pi(a.lo + kPi), a.len});
  }
  return CircularIntervalSet::from_arcs(all);
}

}  // namespace vislab
