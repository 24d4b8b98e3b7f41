#include "vislab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vislab/errors.hpp"
#include "vislab/parallel.hpp"
#include "vislab/projections.hpp"

namespace vislab {

namespace {

std::string show(Point2 p) {
  std::ostringstream s;
  s.precision(17);
  s << "(" << p.x << ", " << p.y << ")";
  return s.str();
}

}  // namespace

Point2 projective_T(Point2 p, bool allow_near_singular) {
  if (!p.finite()) throw InvalidInput("projective_T needs a finite point");
  if (p.y == 0.0) throw SingularInput("projective_T: y = 0 maps to the line at infinity " + show(p));
  if (!allow_near_singular && std::fabs(p.y) < 0.5)
    throw DomainError("projective_T: |y| < 1/2 refused without override " + show(p));
  return {(p.x + 1.0) / p.y, (p.y + 1.0) / p.y};
}

double theta_x(double x) {
  if (!(x >= -10.0 && x <= 0.0)) throw DomainError("theta_x needs x in [-10, 0]");
  return std::atan2(1.0, x + 1.0);
}

Point2 polar_phi(Point2 p) {
  const double r = p.x + 1.0;
  return {r * std::cos(kPi * p.y), r * std::sin(kPi * p.y)};
}

double Mat2::sigma_max() const {
  const double f = a * a + b * b + c * c + d * d;
  const double g = std::sqrt(std::max(0.0, f * f - 4.0 * det() * det()));
  return std::sqrt(0.5 * (f + g));
}

double Mat2::sigma_min() const {
  const double smax = sigma_max();
  return smax == 0.0 ? 0.0 : std::fabs(det()) / smax;
}

DiffeoPreset::DiffeoPreset(Kind kind, std::string name, std::optional<Square> domain,
                           std::array<double, 6> params)
    : kind_(kind), name_(std::move(name)), domain_(domain), params_(params) {
  sigma_min_ = sample_sigma_min();
}

DiffeoPreset DiffeoPreset::polar() {
  return DiffeoPreset(Kind::polar, "polar", Square{{-0.25, -0.25}, 1.5}, {});
}

DiffeoPreset DiffeoPreset::projective() {
  return DiffeoPreset(Kind::projectiveT, "projectiveT", Square{{1.0, 1.0}, 19.0}, {});
}

DiffeoPreset DiffeoPreset::affine(const std::array<double, 6>& params) {
  for (double v : params)
    if (!std::isfinite(v)) throw InvalidInput("affine parameters must be finite");
  const Mat2 m{params[0], params[1], params[2], params[3]};
  if (m.det() == 0.0) throw InvalidInput("affine map is singular");
  return DiffeoPreset(Kind::affine, "affine", std::nullopt, params);
}

DiffeoPreset DiffeoPreset::by_name(std::string_view name, std::span<const double> params) {
  if (name == "polar") return polar();
  if (name == "projectiveT") return projective();
  if (name == "affine") {
    if (params.size() != 6) throw InvalidInput("affine preset needs 6 parameters");
    std::array<double, 6> p{};
    std::copy(params.begin(), params.end(), p.begin());
    return affine(p);
  }
  if (name == "identity") return identity();
  throw InvalidInput("unknown diffeomorphism preset '" + std::string(name) +
                     "' (known: polar, projectiveT, affine, identity)");
}

Point2 DiffeoPreset::forward(Point2 p) const {
  switch (kind_) {
    case Kind::polar: return polar_phi(p);
    case Kind::projectiveT: return projective_T(p);
    case Kind::affine:
      return {params_[0] * p.x + params_[1] * p.y + params_[4], params_[2] * p.x + params_[3] * p.y + params_[5]};
  }
  return p;
}

Mat2 DiffeoPreset::jacobian(Point2 p) const {
  switch (kind_) {
    case Kind::polar: {
      const double r = p.x + 1.0, cs = std::cos(kPi * p.y), sn = std::sin(kPi * p.y);
      return {cs, -kPi * r * sn, sn, kPi * r * cs};
    }
    case Kind::projectiveT:
      return {1.0 / p.y, -(p.x + 1.0) / (p.y * p.y), 0.0, -1.0 / (p.y * p.y)};
    case Kind::affine:
      return {params_[0], params_[1], params_[2], params_[3]};
  }
  return {};
}

double DiffeoPreset::sample_sigma_min() const {
  if (!domain_) return jacobian({0.0, 0.0}).sigma_min();
  const double step = 1e-2;
  const auto n = static_cast<std::size_t>(std::floor(domain_->side / step + 1e-9)) + 1;
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double m = std::numeric_limits<double>::infinity();
    const double x = std::min(domain_->corner.x + i * step, domain_->corner.x + domain_->side);
    for (std::size_t j = 0; j < n; ++j) {
      const double y = std::min(domain_->corner.y + j * step, domain_->corner.y + domain_->side);
      m = std::min(m, jacobian({x, y}).sigma_min());
    }
    rows[i] = m;
  });
  return *std::min_element(rows.begin(), rows.end());
}

PointCloud apply_diffeo(const DiffeoPreset& map, const PointCloud& A) {
  PointCloud out;
  out.points.reserve(A.size());
  for (const auto& p : A.points) {
    if (!map.in_domain(p))
      throw InvalidInput("point " + show(p) + " lies outside the domain of '" + map.name() + "'");
    out.points.push_back(map.forward(p));
  }
  out.weights = A.weights;
  out.delta = A.delta * map.min_singular_value();
  if (out.size() >= 2 && out.delta > 0.0) {
    out.separated = !(closest_pair(out.points, out.delta).distance < out.delta * (1.0 - 1e-12));
  } else {
    out.separated = true;
  }
  return out;
}

BridgeSample radial_vs_projection_bridge(const PointCloud& A, double x, const LineFamily& fam, double c) {
  BridgeSample s;
  s.x = x;
  const double theta = theta_x(x);
  if (A.empty()) return s;
  for (const auto& p : A.points)
    if (!(p.x >= 1.0 && p.x <= 20.0 && p.y >= 1.0 && p.y <= 20.0))
      throw DomainError("bridge needs A inside [1,20]^2, got " + show(p));
  s.vis_delta = vis_delta({x, 0.0}, A, fam, c);
  const double h = A.delta;
  const double normal_dir = theta + kPi / 2;
  std::vector<Interval> pieces;
  pieces.reserve(A.size());
  for (const auto& p : A.points) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Point2 v : {Point2{p.x - h, p.y - h}, Point2{p.x + h, p.y - h}, Point2{p.x + h, p.y + h},
                     Point2{p.x - h, p.y + h}}) {
      const double t = project_point(projective_T(v), normal_dir);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    pieces.push_back({lo, hi});
  }
  s.projected_length = IntervalSet::from_intervals(std::move(pieces)).measure();
  s.ratio_delta = static_cast<double>(s.vis_delta) * A.delta / s.projected_length;
  return s;
}

double image_line_separation(double x, double m1, double m2) {
  auto image_line = [x](double m) {
    const Point2 p = projective_T({x + 1.0 / m, 1.0});
    const Point2 q = projective_T({x + 2.0 / m, 2.0});
    return std::pair{p, q};
  };
  const auto [p1, q1] = image_line(m1);
  return dist_point_line(image_line(m2).first, Line::through(p1, q1));
}

std::vector<Arc> polar_sector_arcs(std::span<const DiskNode> nodes) {
  std::vector<Arc> arcs;
  arcs.reserve(nodes.size());
  for (const auto& n : nodes) arcs.push_back({kPi * n.square.corner.y, kPi * n.square.side});
  return arcs;
}

double polar_visibility_from_origin(std::span<const DiskNode> nodes) {
  return CircularIntervalSet::from_arcs(polar_sector_arcs(nodes)).measure() / kTwoPi;
}

}  // namespace vislab
