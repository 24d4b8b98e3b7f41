#include "vislab/set_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numeric>
#include <random>

#include "vislab/errors.hpp"
#include "vislab/parallel.hpp"
#include "vislab/visibility.hpp"

namespace vislab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBatch = 1000;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent stream per (purpose, batch), fixed by the master seed.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t batch) {
  return std::mt19937_64(splitmix(splitmix(seed ^ (tag * 0x632be59bd9b4e019ull)) + batch));
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Box {
  double x0, y0, x1, y1;
  double diam() const { return std::hypot(x1 - x0, y1 - y0); }
};

Box bounds(const std::vector<Point2>& pts) {
  Box b{kInf, kInf, -kInf, -kInf};
  for (const auto& p : pts) {
    b.x0 = std::min(b.x0, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.x1 = std::max(b.x1, p.x);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

// Dyadic radii delta * 2^k up to the first one covering the whole set.
std::vector<double> dyadic_scales(double delta, double diam) {
  std::vector<double> out;
  double r = delta;
  out.push_back(r);
  while (r < diam) out.push_back(r *= 2.0);
  return out;
}

bool geq_rel(double C, double required) { return C >= required * (1.0 - 1e-12); }

ConditionResult separation_check(const PointCloud& A) {
  ConditionResult r;
  const auto cp = closest_pair(A.points, A.delta);
  r.pass = !(cp.distance < A.delta * (1.0 - 1e-12));
  Witness w;
  w.kind = Witness::Kind::pair;
  if (A.size() >= 2) {
    w.center = A.points[cp.i];
    w.other = A.points[cp.j];
  }
  w.radius = std::isfinite(cp.distance) ? cp.distance : 0.0;
  w.count = 2;
  w.bound = A.delta;
  r.worst = w;
  return r;
}

ConditionResult cardinality_check(const PointCloud& A, double alpha, double C) {
  ConditionResult r;
  const double scaled = static_cast<double>(A.size()) * std::pow(A.delta, alpha);
  r.required_C = std::max(scaled, 1.0 / scaled);
  r.pass = geq_rel(C, r.required_C);
  Witness w;
  w.kind = Witness::Kind::cardinality;
  w.count = A.size();
  w.bound = scaled;  // |A| delta^alpha
  w.radius = C;
  r.worst = w;
  return r;
}

ConditionResult ball_check(const PointCloud& A, double alpha, double C, std::uint64_t seed,
                           const CertifierOptions& opt) {
  const double N = static_cast<double>(A.size());
  const Box box = bounds(A.points);
  const double diam = std::max(box.diam(), A.delta);
  const auto radii = dyadic_scales(A.delta, diam);

  std::vector<Point2> centers = A.points;
  for (const auto& p : A.points)
    centers.push_back({std::round(p.x / A.delta) * A.delta, std::round(p.y / A.delta) * A.delta});
  std::sort(centers.begin(), centers.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());

  struct Best {
    double ratio = -1.0;
    Point2 c;
    double r = 0.0;
    std::size_t count = 0;
  };
  std::vector<Best> best(centers.size());
  parallel_for(centers.size(), [&](std::size_t q) {
    std::vector<double> d(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) d[i] = distance(centers[q], A.points[i]);
    std::sort(d.begin(), d.end());
    for (double r : radii) {
      const auto count = static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), r) - d.begin());
      const double ratio = static_cast<double>(count) / (std::pow(r, alpha) * N);
      if (ratio > best[q].ratio) best[q] = {ratio, centers[q], r, count};
    }
  });

  const std::size_t batches = (opt.random_balls + kBatch - 1) / kBatch;
  std::vector<Best> random_best(batches);
  const double margin = 0.1 * diam;
  parallel_for(batches, [&](std::size_t b) {
    auto rng = stream(seed, 1, b);
    const std::size_t n = std::min(kBatch, opt.random_balls - b * kBatch);
    for (std::size_t t = 0; t < n; ++t) {
      const Point2 c{box.x0 - margin + unit(rng) * (box.x1 - box.x0 + 2 * margin),
                     box.y0 - margin + unit(rng) * (box.y1 - box.y0 + 2 * margin)};
      const double r = A.delta * std::pow(diam / A.delta, unit(rng));
      std::size_t count = 0;
      for (const auto& p : A.points)
        if (distance(c, p) <= r) ++count;
      const double ratio = static_cast<double>(count) / (std::pow(r, alpha) * N);
      if (ratio > random_best[b].ratio) random_best[b] = {ratio, c, r, count};
    }
  });

  Best top;
  for (const auto& b : best)
    if (b.ratio > top.ratio) top = b;
  for (const auto& b : random_best)
    if (b.ratio > top.ratio) top = b;

  ConditionResult res;
  res.required_C = top.ratio;
  res.pass = geq_rel(C, top.ratio);
  Witness w;
  w.kind = Witness::Kind::ball;
  w.center = top.c;
  w.radius = top.r;
  w.count = top.count;
  w.bound = C * std::pow(top.r, alpha) * N;
  res.worst = w;
  return res;
}

ConditionResult line_check(const PointCloud& A, double C, std::uint64_t seed,
                           const CertifierOptions& opt) {
  const std::size_t N = A.size();
  const std::size_t m = N / 10;  // a strip holding m + 1 points violates
  const Box box = bounds(A.points);

  struct Cand {
    double required = 0.0;
    double angle = 0.0;
    double offset = 0.0;
  };
  Cand top;
  auto consider = [&](const Cand& c) {
    if (c.required > top.required) top = c;
  };

  std::vector<double> t(N);
  for (int j = 0; j < 4; ++j) {
    const double angle = j * kPi / 4;
    const Line l(angle, 0.0);
    for (std::size_t i = 0; i < N; ++i) t[i] = dot(A.points[i], l.normal());
    std::sort(t.begin(), t.end());
    double w = kInf, at = 0.0;
    for (std::size_t i = 0; i + m < N; ++i) {
      if (t[i + m] - t[i] < w) {
        w = t[i + m] - t[i];
        at = 0.5 * (t[i] + t[i + m]);
      }
    }
    if (std::isfinite(w)) consider({w > 0 ? 2.0 / w : kInf, angle, at});
  }

  const std::size_t batches = (opt.random_lines + kBatch - 1) / kBatch;
  std::vector<Cand> random_top(batches);
  parallel_for(batches, [&](std::size_t b) {
    auto rng = stream(seed, 2, b);
    std::vector<double> d(N);
    const std::size_t n = std::min(kBatch, opt.random_lines - b * kBatch);
    for (std::size_t s = 0; s < n; ++s) {
      const double angle = unit(rng) * kPi;
      const Point2 through{box.x0 + unit(rng) * (box.x1 - box.x0), box.y0 + unit(rng) * (box.y1 - box.y0)};
      const Line l(angle, dot(through, Line(angle, 0.0).normal()));
      for (std::size_t i = 0; i < N; ++i) d[i] = dist_point_line(A.points[i], l);
      std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(m), d.end());
      const double dm = d[m];
      const double req = dm > 0 ? 1.0 / dm : kInf;
      if (req > random_top[b].required) random_top[b] = {req, l.theta(), l.offset()};
    }
  });
  for (const auto& c : random_top) consider(c);

  ConditionResult res;
  res.required_C = top.required;
  res.pass = C > top.required;
  const Line wl(top.angle, top.offset);
  Witness w;
  w.kind = Witness::Kind::line;
  w.angle = wl.theta();
  w.offset = wl.offset();
  w.radius = 1.0 / C;
  w.count = static_cast<std::size_t>(count_near_line(wl, A, w.radius));
  w.bound = static_cast<double>(N) / 10.0;
  res.worst = w;
  return res;
}

struct Fenwick {
  std::vector<int> tree;
  explicit Fenwick(std::size_t n) : tree(n + 1, 0) {}
  void clear() { std::fill(tree.begin(), tree.end(), 0); }
  void add(std::size_t i) {
    for (++i; i < tree.size(); i += i & (~i + 1)) ++tree[i];
  }
  // sum over [0, i)
  int prefix(std::size_t i) const {
    int s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree[i];
    return s;
  }
};

}  // namespace

std::string Witness::kind_name() const {
  switch (kind) {
    case Kind::pair: return "separation";
    case Kind::cardinality: return "cardinality";
    case Kind::ball: return "ball";
    case Kind::line: return "line";
    case Kind::rectangle: return "rectangle";
  }
  return "unknown";
}

bool witness_violates(const Witness& w, const PointCloud& A) {
  switch (w.kind) {
    case Witness::Kind::pair:
      return distance(w.center, w.other) < w.bound * (1.0 - 1e-12);
    case Witness::Kind::cardinality:
      // bound holds |A| delta^alpha, radius holds C
      return w.radius < std::max(w.bound, 1.0 / w.bound) * (1.0 - 1e-12);
    case Witness::Kind::ball: {
      std::size_t n = 0;
      for (const auto& p : A.points)
        if (distance(w.center, p) <= w.radius) ++n;
      return static_cast<double>(n) > w.bound * (1.0 + 1e-12);
    }
    case Witness::Kind::line:
      return static_cast<double>(count_near_line(Line(w.angle, w.offset), A, w.radius)) > w.bound;
    case Witness::Kind::rectangle: {
      const RotRect R(w.center, w.angle, w.radius, w.length);
      std::size_t n = 0;
      for (const auto& p : A.points)
        if (R.contains(p)) ++n;
      return static_cast<double>(n) > w.bound * (1.0 + 1e-12);
    }
  }
  return false;
}

SetCertificate check_discrete_alpha_set(const PointCloud& A, double alpha, double C,
                                        std::uint64_t seed, const CertifierOptions& opt) {
  if (A.empty()) throw InvalidInput("certifier needs a nonempty point set");
  if (!(A.delta > 0.0)) throw InvalidInput("certifier needs delta > 0");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidInput("alpha must lie in (0, 2]");
  if (!(C > 0.0)) throw InvalidInput("C must be > 0");
  SetCertificate cert;
  cert.alpha = alpha;
  cert.C = C;
  cert.delta = A.delta;
  cert.seed = seed;
  cert.points = A.size();
  cert.separation = separation_check(A);
  cert.cardinality = cardinality_check(A, alpha, C);
  cert.ball = ball_check(A, alpha, C, seed, opt);
  cert.line = line_check(A, C, seed, opt);
  cert.C_required = std::max({cert.cardinality.required_C, cert.ball.required_C, cert.line.required_C});
  std::string reasons;
  auto note = [&](bool ok, const char* what) {
    if (!ok) reasons += (reasons.empty() ? "" : ", ") + std::string(what);
  };
  note(cert.separation.pass, "separation");
  note(cert.cardinality.pass, "cardinality");
  note(cert.ball.pass, "ball");
  note(cert.line.pass, "line");
  if (!reasons.empty()) cert.fail_reason = "failed: " + reasons;
  return cert;
}

RectangleTable sample_rectangles(const PointCloud& A, std::uint64_t seed, const CertifierOptions& opt) {
  RectangleTable table;
  table.points = A.size();
  if (A.empty()) return table;
  const Box box = bounds(A.points);
  const double diam = std::max(box.diam(), A.delta);
  const auto scales = dyadic_scales(A.delta, diam);
  const std::size_t L = scales.size();

  std::vector<Point2> centers = A.points;
  {
    auto rng = stream(seed, 3, 0);
    for (std::size_t i = 0; i < opt.random_rect_centers; ++i)
      centers.push_back({box.x0 + unit(rng) * (box.x1 - box.x0), box.y0 + unit(rng) * (box.y1 - box.y0)});
  }
  const std::size_t N = A.size(), Q = centers.size();

  struct Best {
    std::size_t count = 0;
    std::size_t center = 0;
    int orientation = 0;
  };
  // per orientation, per (a <= b) pair
  std::vector<std::vector<Best>> per_orientation(opt.rect_orientations, std::vector<Best>(L * L));

  parallel_for(static_cast<std::size_t>(opt.rect_orientations), [&](std::size_t o) {
    const double angle = kPi * static_cast<double>(o) / opt.rect_orientations;
    const Point2 ld{std::cos(angle), std::sin(angle)};
    const Point2 sd{-ld.y, ld.x};
    std::vector<double> pu(N), pv(N), qu(Q), qv(Q);
    for (std::size_t i = 0; i < N; ++i) {
      pu[i] = dot(A.points[i], ld);
      pv[i] = dot(A.points[i], sd);
    }
    for (std::size_t i = 0; i < Q; ++i) {
      qu[i] = dot(centers[i], ld);
      qv[i] = dot(centers[i], sd);
    }
    std::vector<std::size_t> by_u(N), q_by_u(Q);
    std::iota(by_u.begin(), by_u.end(), 0);
    std::iota(q_by_u.begin(), q_by_u.end(), 0);
    std::sort(by_u.begin(), by_u.end(), [&](std::size_t a, std::size_t b) { return pu[a] < pu[b]; });
    std::sort(q_by_u.begin(), q_by_u.end(), [&](std::size_t a, std::size_t b) { return qu[a] < qu[b]; });
    std::vector<double> v_sorted = pv;
    std::sort(v_sorted.begin(), v_sorted.end());
    std::vector<std::size_t> vrank(N);
    for (std::size_t i = 0; i < N; ++i)
      vrank[i] = static_cast<std::size_t>(std::lower_bound(v_sorted.begin(), v_sorted.end(), pv[i]) -
                                          v_sorted.begin());
    // v-window [lo_rank, hi_rank) for every query and short side
    std::vector<std::size_t> vlo(Q * L), vhi(Q * L);
    for (std::size_t q = 0; q < Q; ++q)
      for (std::size_t a = 0; a < L; ++a) {
        const double h = scales[a] / 2;
        vlo[q * L + a] = static_cast<std::size_t>(
            std::lower_bound(v_sorted.begin(), v_sorted.end(), qv[q] - h) - v_sorted.begin());
        vhi[q * L + a] = static_cast<std::size_t>(
            std::upper_bound(v_sorted.begin(), v_sorted.end(), qv[q] + h) - v_sorted.begin());
      }

    Fenwick fw(N);
    std::vector<int> inside(Q * L);
    for (std::size_t b = 0; b < L; ++b) {
      const double h = scales[b] / 2;
      // points with u <= qu + h
      fw.clear();
      std::size_t p = 0;
      for (std::size_t q : q_by_u) {
        while (p < N && pu[by_u[p]] <= qu[q] + h) fw.add(vrank[by_u[p++]]);
        for (std::size_t a = 0; a <= b; ++a)
          inside[q * L + a] = fw.prefix(vhi[q * L + a]) - fw.prefix(vlo[q * L + a]);
      }
      // minus points with u < qu - h
      fw.clear();
      p = 0;
      for (std::size_t q : q_by_u) {
        while (p < N && pu[by_u[p]] < qu[q] - h) fw.add(vrank[by_u[p++]]);
        for (std::size_t a = 0; a <= b; ++a) {
          const auto count = static_cast<std::size_t>(
              inside[q * L + a] - (fw.prefix(vhi[q * L + a]) - fw.prefix(vlo[q * L + a])));
          auto& best = per_orientation[o][a * L + b];
          if (count > best.count) best = {count, q, static_cast<int>(o)};
        }
      }
    }
  });

  for (std::size_t a = 0; a < L; ++a)
    for (std::size_t b = a; b < L; ++b) {
      Best top;
      for (const auto& po : per_orientation)
        if (po[a * L + b].count > top.count) top = po[a * L + b];
      RectangleTable::Entry e;
      e.r1 = scales[a];
      e.r2 = scales[b];
      Witness w;
      w.kind = Witness::Kind::rectangle;
      w.center = centers[top.center];
      w.angle = kPi * top.orientation / opt.rect_orientations;
      w.radius = e.r1;
      w.length = e.r2;
      const RotRect R(w.center, w.angle, e.r1, e.r2);
      std::size_t recount = 0;
      for (const auto& pt : A.points)
        if (R.contains(pt)) ++recount;
      w.count = recount;
      e.max_count = std::max(top.count, recount);
      e.worst = w;
      table.entries.push_back(e);
    }
  return table;
}

double RectangleTable::required_C(double kappa) const {
  double req = 0.0;
  for (const auto& e : entries)
    req = std::max(req, static_cast<double>(e.max_count) /
                            (std::pow(e.r1, kappa) * std::pow(e.r2, 1.0 - kappa) * static_cast<double>(points)));
  return req;
}

double RectangleTable::kappa_at(double C, double kappa_cap) const {
  const int top = static_cast<int>(std::floor(kappa_cap * 100 + 1e-9));
  for (int k = top; k >= 1; --k)
    if (geq_rel(C, required_C(k / 100.0))) return k / 100.0;
  return 0.0;
}

SetCertificate check_unrectifiable_one_set(const PointCloud& A, double C, std::uint64_t seed,
                                           const CertifierOptions& opt) {
  SetCertificate cert = check_discrete_alpha_set(A, 1.0, C, seed, opt);
  ConditionResult rect;
  const RectangleTable table = sample_rectangles(A, seed, opt);
  if (!cert.alpha_pass()) {
    rect.pass = false;
    rect.required_C = table.required_C(0.01);
    cert.kappa_estimate = 0.0;
    cert.fail_reason = "fails alpha=1 precheck (" + cert.fail_reason + ")";
    cert.rectangle = rect;
    return cert;
  }
  const double kappa = table.kappa_at(C);
  cert.kappa_estimate = kappa;
  const double k_eval = kappa > 0 ? kappa : 0.01;
  rect.required_C = table.required_C(k_eval);
  rect.pass = kappa > 0.0;
  double worst_ratio = -1.0;
  for (const auto& e : table.entries) {
    const double bound = std::pow(e.r1, k_eval) * std::pow(e.r2, 1.0 - k_eval) * static_cast<double>(A.size());
    const double ratio = static_cast<double>(e.max_count) / bound;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      Witness w = e.worst;
      w.bound = C * bound;
      rect.worst = w;
    }
  }
  cert.rectangle = rect;
  cert.C_required = std::max(cert.C_required, rect.required_C);
  if (!rect.pass) cert.fail_reason = "rectangle bound fails at kappa = 0.01";
  return cert;
}

std::string SetCertificate::to_json() const {
  using nlohmann::json;
  auto witness_json = [](const Witness& w) {
    json j{{"condition", w.kind_name()}, {"count", w.count}, {"bound", w.bound}};
    switch (w.kind) {
      case Witness::Kind::pair:
        j["points"] = {{w.center.x, w.center.y}, {w.other.x, w.other.y}};
        j["distance"] = w.radius;
        break;
      case Witness::Kind::cardinality:
        j["size_times_delta_alpha"] = w.bound;
        break;
      case Witness::Kind::ball:
        j["center"] = {w.center.x, w.center.y};
        j["radius"] = w.radius;
        break;
      case Witness::Kind::line:
        j["theta"] = w.angle;
        j["offset"] = w.offset;
        j["half_width"] = w.radius;
        break;
      case Witness::Kind::rectangle:
        j["center"] = {w.center.x, w.center.y};
        j["axis_angle"] = w.angle;
        j["r1"] = w.radius;
        j["r2"] = w.length;
        break;
    }
    return j;
  };
  json passes{{"separation", separation.pass},
              {"cardinality", cardinality.pass},
              {"ball", ball.pass},
              {"line", line.pass},
              {"rectangle", rectangle ? json(rectangle->pass) : json(nullptr)}};
  json witnesses = json::array();
  for (const auto* c : {&separation, &cardinality, &ball, &line})
    if (c->worst) witnesses.push_back(witness_json(*c->worst));
  if (rectangle && rectangle->worst) witnesses.push_back(witness_json(*rectangle->worst));
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j{{"alpha", alpha},
         {"C", C},
         {"C_required", finite_or_null(C_required)},
         {"delta", delta},
         {"points", points},
         {"passes", passes},
         {"pass", this->passes()},
         {"kappa_estimate", kappa_estimate ? json(*kappa_estimate) : json(nullptr)},
         {"worst_witnesses", witnesses},
         {"seed", seed}};
  if (!fail_reason.empty()) j["fail_reason"] = fail_reason;
  return j.dump(2);
}

double riesz_energy(const PointCloud& A, double s) {
  if (!(s > 0.0)) throw InvalidInput("Riesz exponent s must be > 0");
  if (!(A.delta > 0.0)) throw InvalidInput("Riesz energy needs delta > 0 for the kernel floor");
  A.require_normalized();
  const std::size_t N = A.size();
  std::vector<double> rows(N, 0.0);
  const double floor2 = A.delta * A.delta;
  const bool unit_s = s == 1.0;
  parallel_for(N, [&](std::size_t i) {
    double acc = 0.0;
    const Point2 p = A.points[i];
    for (std::size_t j = i + 1; j < N; ++j) {
      const double dx = p.x - A.points[j].x, dy = p.y - A.points[j].y;
      const double d2 = std::max(dx * dx + dy * dy, floor2);
      const double k = unit_s ? 1.0 / std::sqrt(d2) : std::pow(d2, -0.5 * s);
      acc += A.weight(j) * k;
    }
    rows[i] = A.weight(i) * acc;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return 2.0 * total;
}

std::size_t box_count(const PointCloud& S, double eps) {
  std::vector<std::pair<std::int64_t, std::int64_t>> cells;
  cells.reserve(S.size());
  for (const auto& p : S.points)
    cells.emplace_back(static_cast<std::int64_t>(std::floor(p.x / eps)),
                       static_cast<std::int64_t>(std::floor(p.y / eps)));
  std::sort(cells.begin(), cells.end());
  return static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

std::size_t box_count(const IntervalSet& S, double eps) {
  std::size_t total = 0;
  bool any = false;
  std::int64_t covered_to = 0;  // last counted cell
  for (const auto& iv : S.intervals()) {
    auto first = static_cast<std::int64_t>(std::floor(iv.lo / eps));
    const auto last = static_cast<std::int64_t>(std::ceil(iv.hi / eps)) - 1;
    if (any) first = std::max(first, covered_to + 1);
    if (first <= last) {
      total += static_cast<std::size_t>(last - first + 1);
      covered_to = last;
      any = true;
    }
  }
  return total;
}

namespace {

void check_scales(std::span<const double> scales) {
  if (scales.size() < 3) throw InvalidInput("box counting needs at least 3 scales");
  double lo = kInf, hi = 0.0;
  for (double e : scales) {
    if (!(e > 0.0) || !std::isfinite(e)) throw InvalidInput("box scales must be positive");
    const double l = std::log2(e);
    if (std::fabs(l - std::round(l)) > 1e-9) throw InvalidInput("box scales must be dyadic");
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  if (hi / lo < 16.0 * (1.0 - 1e-12)) throw InvalidInput("box scales must span a factor >= 16");
}

double fit_slope(std::span<const double> scales, const std::vector<std::size_t>& counts) {
  bool informative = false;
  for (std::size_t c : counts) informative |= c > 1;
  if (!informative) throw DegenerateError("single occupied cell at every scale: dimension undefined");
  const auto n = static_cast<double>(scales.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double x = -std::log(scales[i]);
    const double y = std::log(static_cast<double>(counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double box_dimension_estimate(const PointCloud& S, std::span<const double> scales) {
  check_scales(scales);
  if (S.empty()) throw DegenerateError("empty set has no box dimension");
  std::vector<std::size_t> counts;
  for (double e : scales) counts.push_back(box_count(S, e));
  return fit_slope(scales, counts);
}

double box_dimension_estimate(const IntervalSet& S, std::span<const double> scales) {
  check_scales(scales);
  if (S.empty()) throw DegenerateError("empty set has no box dimension");
  std::vector<std::size_t> counts;
  for (double e : scales) counts.push_back(box_count(S, e));
  return fit_slope(scales, counts);
}

WellDistributedResult check_well_distributed(std::span<const double> positions,
                                             std::span<const double> weights, double delta,
                                             double kappa, double tau, bool circular) {
  if (positions.size() != weights.size()) throw InvalidInput("positions and weights differ in length");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  if (!(kappa > 0.0)) throw InvalidInput("kappa must be > 0");
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidInput("tau must lie in (0, 1)");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidInput("weights must be nonnegative");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw InvalidInput("weights must sum to 1");

  WellDistributedResult res;
  if (positions.empty()) return res;
  const double h = delta / 2;
  const double max_len = std::pow(delta, tau);

  std::vector<double> pos(positions.begin(), positions.end());
  std::vector<double> wts(weights.begin(), weights.end());
  if (circular) {
    for (auto& p : pos) p = wrap_two_pi(p);
    const std::size_t n = pos.size();
    for (std::size_t i = 0; i < n; ++i) {
      pos.push_back(pos[i] + kTwoPi);
      wts.push_back(wts[i]);
    }
  }
  const auto m_lo = static_cast<std::int64_t>(std::floor(delta / h)) + 1;
  std::int64_t m_hi = static_cast<std::int64_t>(std::ceil(max_len / h)) - 1;
  while (m_hi >= m_lo && !(m_hi * h < max_len)) --m_hi;

  double lo = kInf, hi = -kInf;
  for (double p : pos) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  // padded so every admissible interval meeting a point fits on the grid
  const auto pad = std::max<std::int64_t>(m_hi, 0) + 1;
  const auto g0 = static_cast<std::int64_t>(std::floor(lo / h)) - pad;
  const auto g1 = static_cast<std::int64_t>(std::ceil(hi / h)) + pad;
  const auto cells = static_cast<std::size_t>(g1 - g0 + 1);
  // cell c = [ (g0+c) h, (g0+c+1) h ), node mass for points exactly on a grid node
  std::vector<double> cell(cells, 0.0), node(cells + 1, 0.0);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const double g = pos[i] / h;
    const auto gi = static_cast<std::int64_t>(std::floor(g));
    cell[static_cast<std::size_t>(gi - g0)] += wts[i];
    if (g == std::floor(g)) node[static_cast<std::size_t>(gi - g0)] += wts[i];
  }
  std::vector<double> prefix(cells + 1, 0.0);
  for (std::size_t c = 0; c < cells; ++c) prefix[c + 1] = prefix[c] + cell[c];

  std::int64_t a_end = g1;
  if (circular) a_end = std::min<std::int64_t>(g1, static_cast<std::int64_t>(std::ceil(kTwoPi / h)));
  if (circular) m_hi = std::min<std::int64_t>(m_hi, static_cast<std::int64_t>(std::floor(kTwoPi / h)) - 1);

  double worst_ratio = -1.0;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const double len = static_cast<double>(m) * h;
    if (!(len > delta && len < max_len)) continue;
    const double bound = std::pow(len, kappa);
    for (std::int64_t a = g0; a + m <= g1 && a <= a_end; ++a) {
      const auto c0 = static_cast<std::size_t>(a - g0);
      const auto c1 = static_cast<std::size_t>(a + m - g0);
      // closed [a h, (a+m) h]
      const double massI = prefix[c1] - prefix[c0] + (c1 < node.size() ? node[c1] : 0.0);
      ++res.intervals_checked;
      const double ratio = massI / bound;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        res.worst = {static_cast<double>(a) * h, static_cast<double>(a + m) * h};
        res.worst_mass = massI;
        res.worst_bound = bound;
      }
      if (massI > bound + 1e-12) res.pass = false;
    }
  }
  return res;
}

}  // namespace vislab
