#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vislab/geometry.hpp"
#include "vislab/point_cloud.hpp"

namespace vislab {

// A sampled ball, line or rectangle together with its count and the bound it
// was compared against.
struct Witness {
  enum class Kind { pair, cardinality, ball, line, rectangle };
  Kind kind = Kind::ball;
  Point2 center;         // ball/rectangle centre, pair's first point
  Point2 other;          // pair's second point
  double radius = 0.0;   // ball radius, line half-width or r1
  double length = 0.0;   // rectangle r2
  double angle = 0.0;    // line direction or rectangle axis
  double offset = 0.0;   // line offset
  std::size_t count = 0;
  double bound = 0.0;

  std::string kind_name() const;
};

struct ConditionResult {
  bool pass = true;
  double required_C = 0.0;  // smallest C at which the sampled condition holds
  std::optional<Witness> worst;
};

struct CertifierOptions {
  std::size_t random_balls = 10'000;
  std::size_t random_lines = 10'000;
  std::size_t random_rect_centers = 256;
  int rect_orientations = 64;
};

struct SetCertificate {
  double alpha = 1.0;
  double C = 1.0;
  double C_required = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::size_t points = 0;
  ConditionResult separation, cardinality, ball, line;
  std::optional<ConditionResult> rectangle;
  std::optional<double> kappa_estimate;
  std::string fail_reason;

  bool alpha_pass() const { return separation.pass && cardinality.pass && ball.pass && line.pass; }
  bool passes() const { return alpha_pass() && (!rectangle || rectangle->pass); }
  std::string to_json() const;
};

SetCertificate check_discrete_alpha_set(const PointCloud& A, double alpha, double C,
                                        std::uint64_t seed, const CertifierOptions& opt = {});

SetCertificate check_unrectifiable_one_set(const PointCloud& A, double C, std::uint64_t seed,
                                           const CertifierOptions& opt = {});

// Re-evaluates a witness against A from scratch: true iff the inequality it
// records is violated.
bool witness_violates(const Witness& w, const PointCloud& A);

// Largest count over sampled rectangles for every dyadic (r1, r2) pair.
struct RectangleTable {
  struct Entry {
    double r1 = 0.0;
    double r2 = 0.0;
    std::size_t max_count = 0;
    Witness worst;
  };
  std::vector<Entry> entries;
  std::size_t points = 0;

  // Largest kappa on the 0.01 grid in (0, kappa_cap] satisfying the bound at
  // C, or 0 when even 0.01 fails.
  double kappa_at(double C, double kappa_cap = 0.5) const;
  // Smallest C for which the bound holds at kappa.
  double required_C(double kappa) const;
};

RectangleTable sample_rectangles(const PointCloud& A, std::uint64_t seed,
                                 const CertifierOptions& opt = {});

// Sum over i != j of w_i w_j max(|p_i - p_j|, delta)^(-s).
double riesz_energy(const PointCloud& A, double s);

// Least-squares slope of log N(eps) against log(1/eps), half-open cells
// anchored at the origin.
double box_dimension_estimate(const PointCloud& S, std::span<const double> scales);
double box_dimension_estimate(const IntervalSet& S, std::span<const double> scales);

std::size_t box_count(const PointCloud& S, double eps);
std::size_t box_count(const IntervalSet& S, double eps);

struct WellDistributedResult {
  bool pass = true;
  Interval worst;
  double worst_mass = 0.0;
  double worst_bound = 0.0;
  std::size_t intervals_checked = 0;
};

// Positions on a line, or angles in [0, 2pi) when circular.
WellDistributedResult check_well_distributed(std::span<const double> positions,
                                             std::span<const double> weights, double delta,
                                             double kappa, double tau, bool circular = false);

}  // namespace vislab
