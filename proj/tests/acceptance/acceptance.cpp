// One line per criterion: "[PASS] <id> <name>: <measurements>".
// Usage: vislab_acceptance [--only ID]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "vislab/ifs.hpp"
#include "vislab/point_cloud.hpp"
#include "vislab/projections.hpp"
#include "vislab/set_analysis.hpp"
#include "vislab/transforms.hpp"
#include "vislab/visibility.hpp"

using namespace vislab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string name;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Tolerances.
constexpr int kAngles = 4096;
constexpr double kFavardFloor = 1.0;          // n * Fav(K_n) >= c0
constexpr double kHalvingTol = 1e-9;
constexpr double kSlopeTol = 1e-6;
constexpr double kEnergySpread = 0.15;
constexpr double kPolylogResidual = 0.05;
constexpr double kCertifyC = 256.0;
constexpr double kSegmentCmax = 1e3;
constexpr double kDiffeoC = 512.0;
constexpr double kKappaSlack = 0.05;
constexpr double kDimFloor = 0.3;
constexpr double kBand = 8.0;
constexpr double kSeedStability = 0.20;
constexpr double kOracleTol = 1e-3;

Outcome favard_law() {
  const auto sys = fourcorner();
  std::ostringstream d;
  bool ok = true;
  double prev = 1e300, floor = 1e300;
  for (int n = 2; n <= 8; ++n) {
    const double f = favard_length(generate_generation(sys, n), AngleGrid(kAngles));
    if (!(f < prev)) ok = false;
    floor = std::min(floor, n * f);
    prev = f;
    d << fmt("n=%d:%.5f ", n, f);
  }
  ok = ok && floor >= kFavardFloor;
  d << fmt("min n*Fav=%.4f (c0=%.1f)", floor, kFavardFloor);
  return {ok, d.str()};
}

Outcome polar_halving() {
  const auto sys = fourcorner();
  std::vector<double> n_axis, logv;
  double worst = 0;
  double prev = 0;
  for (int n = 1; n <= 8; ++n) {
    const double v = polar_visibility_from_origin(generate_generation(sys, n).nodes);
    if (n > 1) worst = std::max(worst, std::fabs(v / prev - 0.5));
    n_axis.push_back(n);
    logv.push_back(std::log2(v));
    prev = v;
  }
  const double s = oracle::slope(n_axis, logv);
  return {worst <= kHalvingTol && std::fabs(s + 1.0) <= kSlopeTol,
          fmt("max |ratio-0.5|=%.2e slope=%.9f", worst, s)};
}

Outcome energy_growth() {
  const auto sys = fourcorner();
  std::vector<double> e;
  for (int n = 3; n <= 7; ++n) e.push_back(riesz_energy(centers_of(generate_generation(sys, n)), 1.0));
  std::vector<double> diff;
  for (std::size_t i = 1; i < e.size(); ++i) diff.push_back(e[i] - e[i - 1]);
  const auto [mn, mx] = std::minmax_element(diff.begin(), diff.end());
  const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / diff.size();
  const double spread = (*mx - *mn) / mean;
  return {*mn > 0 && spread <= kEnergySpread,
          fmt("I(n=3..7)=%.4f..%.4f diffs %.5f..%.5f spread=%.2e", e.front(), e.back(), *mn, *mx, spread)};
}

// Smallest polynomial degree (<= 2) in log(1/delta) fitting within tolerance.
int polylog_degree(const std::vector<double>& L, const std::vector<double>& y, double& residual) {
  for (int deg = 0; deg <= 2; ++deg) {
    // normal equations, tiny system
    const int m = deg + 1;
    std::vector<double> A(m * m, 0.0), b(m, 0.0);
    for (std::size_t i = 0; i < L.size(); ++i)
      for (int r = 0; r < m; ++r) {
        b[r] += std::pow(L[i], r) * y[i];
        for (int c = 0; c < m; ++c) A[r * m + c] += std::pow(L[i], r + c);
      }
    for (int p = 0; p < m; ++p)
      for (int r = p + 1; r < m; ++r) {
        const double f = A[r * m + p] / A[p * m + p];
        for (int c = p; c < m; ++c) A[r * m + c] -= f * A[p * m + c];
        b[r] -= f * b[p];
      }
    std::vector<double> coef(m);
    for (int r = m - 1; r >= 0; --r) {
      double s = b[r];
      for (int c = r + 1; c < m; ++c) s -= A[r * m + c] * coef[c];
      coef[r] = s / A[r * m + r];
    }
    residual = 0;
    for (std::size_t i = 0; i < L.size(); ++i) {
      double p = 0;
      for (int r = 0; r < m; ++r) p += coef[r] * std::pow(L[i], r);
      residual = std::max(residual, std::fabs(p - y[i]) / y[i]);
    }
    if (residual <= kPolylogResidual) return deg;
  }
  return -1;
}

Outcome l2_bound() {
  const auto sys = fourcorner();
  const double alpha = 1.0;
  std::vector<double> L, y;
  std::ostringstream d;
  for (int n = 3; n <= 6; ++n) {
    const double delta = std::pow(4.0, -n);
    PointCloud A = centers_of(generate_generation(sys, n));
    const LineFamily fam(delta, 2.0, 1'000'000'000ull);
    const double v = l2_norm_f(A, fam) * std::pow(delta, alpha - 1.0);
    L.push_back(std::log(1.0 / delta));
    y.push_back(v);
    d << fmt("n=%d:%.4f ", n, v);
  }
  double worst_growth = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    worst_growth = std::max(worst_growth, std::log(y[i] / y[i - 1]) / std::log(L[i] / L[i - 1]));
  double residual = 0;
  const int deg = polylog_degree(L, y, residual);
  d << fmt("degree=%d residual=%.3f max dlog/dloglog=%.3f", deg, residual, worst_growth);
  return {deg >= 0 && worst_growth <= 2.0, d.str()};
}

Outcome certifier_fixtures() {
  const auto sys = fourcorner();
  std::ostringstream d;
  bool ok = true;
  for (int n = 3; n <= 6; ++n) {
    const auto cert = check_unrectifiable_one_set(centers_of(generate_generation(sys, n)), kCertifyC, 7);
    const double kappa = cert.kappa_estimate.value_or(0.0);
    ok = ok && cert.passes() && kappa > 0.0;
    d << fmt("n=%d:%s(k=%.2f,Creq=%.4g) ", n, cert.passes() ? "pass" : "FAIL", kappa, cert.C_required);
  }
  PointCloud seg;
  for (int i = 0; i < 256; ++i) seg.points.push_back({i / 256.0, 0.0});
  seg.delta = 1.0 / 256.0;
  bool seg_fails = true;
  for (double C : {1.0, 10.0, 100.0, kSegmentCmax}) {
    const auto c = check_discrete_alpha_set(seg, 1.0, C, 7);
    seg_fails = seg_fails && !c.line.pass;
  }
  d << fmt("segment line-fails up to C=%.0f:%s", kSegmentCmax, seg_fails ? "yes" : "NO");
  return {ok && seg_fails, fmt("C=%.0f ", kCertifyC) + d.str()};
}

Outcome diffeo_preservation() {
  const auto sys = fourcorner();
  const PointCloud A = centers_of(generate_generation(sys, 4));
  const auto base = check_unrectifiable_one_set(A, kCertifyC, 7);
  const PointCloud B = apply_diffeo(DiffeoPreset::polar(), A);
  const auto img = check_unrectifiable_one_set(B, kDiffeoC, 7);
  const double k0 = base.kappa_estimate.value_or(0.0), k1 = img.kappa_estimate.value_or(0.0);
  return {img.passes() && k1 >= 0.5 * k0 - kKappaSlack,
          fmt("kappa(K4)=%.2f at C=%.0f, kappa(phi K4)=%.2f at C'=%.0f (C'req=%.4g, delta'=%.5g)", k0,
              kCertifyC, k1, kDiffeoC, img.C_required, B.delta)};
}

Outcome dimension_floor() {
  const auto sys = fourcorner();
  const auto g = generate_generation(sys, 6);
  std::vector<double> scales;
  for (int k = 1; k <= 6; ++k) scales.push_back(std::pow(4.0, -k));
  double mn = 1e300, arg = 0;
  for (int k = 0; k < 360; ++k) {
    const double th = k * kPi / 360;
    const double dim = box_dimension_estimate(project_generation(g.nodes, th), scales);
    if (dim < mn) {
      mn = dim;
      arg = th;
    }
  }
  const IntervalSet col = project_generation(g.nodes, 0.0);
  bool exact = true;
  for (int k = 1; k <= 6; ++k) exact = exact && box_count(col, std::pow(4.0, -k)) == (1u << k);
  const double s0 = box_dimension_estimate(col, scales);
  return {mn >= kDimFloor && exact && std::fabs(s0 - 0.5) <= 1e-9,
          fmt("alpha0=min dim=%.4f at theta=%.4f; theta=0 counts 2^k:%s slope=%.12f", mn, arg,
              exact ? "yes" : "NO", s0)};
}

Outcome vis_bridge() {
  const auto sys = fourcorner();
  const auto g = generate_generation(sys, 4);
  PointCloud A = centers_of(g);
  const double delta = 1.0 / 256.0;
  A.delta = delta;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Point2> vantages;
  for (int i = 0; i < 20; ++i) {
    const double r = 1.0 + U(rng), t = kTwoPi * U(rng);
    vantages.push_back({0.5 + r * std::cos(t), 0.5 + r * std::sin(t)});
  }
  const LineFamily fam(delta, 3.0);
  const IncidenceTable table(fam, A);
  const auto disks = ball_union(A, delta);
  double lo = 1e300, hi = 0;
  for (auto a : vantages) {
    const double vis = radial_projection(std::span<const Disk>(disks), a).measure() / kTwoPi;
    const double ratio = table.vis_delta(a) * delta / vis;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo > 0 && hi / lo <= kBand, fmt("ratio in [%.3f, %.3f], band %.3fx (limit %.0fx)", lo, hi, hi / lo, kBand)};
}

Outcome projective_bridge() {
  const auto sys = fourcorner();
  PointCloud A = translated(centers_of(generate_generation(sys, 4)), {1.0, 1.0});
  const double delta = 1.0 / 256.0;
  A.delta = delta;
  const LineFamily fam(delta, std::hypot(2.0, 2.0) + 10.0);
  double lo = 1e300, hi = 0;
  for (int i = 0; i < 10; ++i) {
    const auto s = radial_vs_projection_bridge(A, -9.5 + i, fam);
    lo = std::min(lo, s.ratio_delta);
    hi = std::max(hi, s.ratio_delta);
  }
  return {lo > 0 && hi / lo <= kBand, fmt("ratio in [%.3f, %.3f], band %.3fx (limit %.0fx)", lo, hi, hi / lo, kBand)};
}

Outcome separation_sampling() {
  std::vector<double> c0;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double mn = 1e300;
    int kept = 0;
    while (kept < 10'000) {
      const Point2 a{U(rng), U(rng)}, x{U(rng), U(rng)}, y{U(rng), U(rng)};
      const double r = radial_separation_ratio(a, x, y);
      if (!std::isfinite(r)) continue;
      mn = std::min(mn, r);
      ++kept;
    }
    c0.push_back(mn);
  }
  const double mean = (c0[0] + c0[1] + c0[2]) / 3.0;
  double dev = 0;
  for (double v : c0) dev = std::max(dev, std::fabs(v - mean) / mean);
  return {mean > 0 && dev <= kSeedStability,
          fmt("c0 per seed %.4f %.4f %.4f, max deviation %.1f%%", c0[0], c0[1], c0[2], 100 * dev)};
}

Outcome oracle_equivalence() {
  const auto sys = fourcorner();
  const auto g = generate_generation(sys, 3);
  const auto squares = oracle::stage_squares(sys, 3);
  const double fav = favard_length(g, AngleGrid(kAngles));
  const double mc = oracle::favard_monte_carlo(squares, -1.0, std::sqrt(2.0), 10'000'000, 99);
  double worst = 0;
  for (Point2 a : {Point2{-1, -1}, Point2{0.5, -0.5}, Point2{2, 0.3}, Point2{0.1, 1.7}, Point2{0.5, 0.5}}) {
    const double v = visibility(g.nodes, a);
    worst = std::max(worst, std::fabs(v - oracle::ray_visibility(squares, a, 1'000'000)));
  }
  const double e = std::fabs(fav - mc);
  return {e <= kOracleTol && worst <= kOracleTol,
          fmt("|Fav-MC|=%.2e (Fav=%.6f MC=%.6f), max |vis-rays|=%.2e", e, fav, mc, worst)};
}

// Lines in bucket j number about delta^{-1-alpha} 2^{-2j} up to log factors:
// the normalised peak may grow at most like log^2(1/delta).
Outcome richness_shape() {
  const auto sys = fourcorner();
  std::ostringstream d;
  std::vector<double> L, peak;
  for (int n = 3; n <= 5; ++n) {
    const double delta = std::pow(4.0, -n);
    const PointCloud A = centers_of(generate_generation(sys, n));
    const auto h = richness_histogram(A, LineFamily(delta, 2.0));
    double worst = 0;
    for (auto [j, count] : h.buckets)
      if (j >= 0) worst = std::max(worst, count * std::pow(2.0, 2 * j) * delta * delta);
    L.push_back(std::log(1.0 / delta));
    peak.push_back(worst);
    d << fmt("n=%d:%.3f ", n, worst);
  }
  double growth = 0;
  for (std::size_t i = 1; i < L.size(); ++i)
    growth = std::max(growth, std::log(peak[i] / peak[i - 1]) / std::log(L[i] / L[i - 1]));
  d << fmt("max dlog/dloglog=%.3f", growth);
  return {peak.front() > 0 && growth <= 2.0, d.str()};
}

std::vector<Criterion> criteria() {
  return {
      {"1", "favard lower-bound law", favard_law},
      {"2", "polar cantor visibility halving", polar_halving},
      {"3", "energy grows affinely", energy_growth},
      {"4", "l2 norm of line counts is polylog", l2_bound},
      {"5", "certifier fixtures", certifier_fixtures},
      {"6", "diffeomorphism preserves unrectifiability", diffeo_preservation},
      {"7", "projection dimension floor", dimension_floor},
      {"8", "discrete/continuous visibility bridge", vis_bridge},
      {"9", "projective bridge", projective_bridge},
      {"10", "angular separation sampling", separation_sampling},
      {"11", "oracle equivalence", oracle_equivalence},
      {"richness", "richness histogram shape", richness_shape},
  };
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = argv[++i];
    else if (std::strcmp(argv[i], "--list") == 0) {
      for (const auto& c : criteria()) std::printf("%s %s\n", c.id.c_str(), c.name.c_str());
      return 0;
    }
  }
  int failed = 0, ran = 0;
  for (const auto& c : criteria()) {
    if (!only.empty() && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.name.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion '%s'\n", only.c_str());
    return 2;
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
