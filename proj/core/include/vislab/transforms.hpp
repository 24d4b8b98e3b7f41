#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vislab/geometry.hpp"
#include "vislab/ifs.hpp"
#include "vislab/point_cloud.hpp"
#include "vislab/visibility.hpp"

namespace vislab {

// ((x+1)/y, (y+1)/y). y == 0 is the line at infinity; |y| < 1/2 is refused
// unless allow_near_singular is set.
Point2 projective_T(Point2 p, bool allow_near_singular = false);

// arccot(x + 1) in (0, pi), for x in [-10, 0].
double theta_x(double x);

// ((x+1) cos(pi y), (x+1) sin(pi y))
Point2 polar_phi(Point2 p);

struct Mat2 {
  double a = 1, b = 0;  // row-major
  double c = 0, d = 1;

  double det() const { return a * d - b * c; }
  double sigma_max() const;
  double sigma_min() const;
};

class DiffeoPreset {
 public:
  enum class Kind { polar, projectiveT, affine };

  static DiffeoPreset polar();
  static DiffeoPreset projective();
  // Row-major 2x2 matrix then translation.
  static DiffeoPreset affine(const std::array<double, 6>& params);
  static DiffeoPreset identity() { return affine({1, 0, 0, 1, 0, 0}); }
  static DiffeoPreset by_name(std::string_view name, std::span<const double> params = {});

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::optional<Square>& domain() const { return domain_; }
  bool in_domain(Point2 p) const { return !domain_ || domain_->contains(p); }

  Point2 forward(Point2 p) const;
  Mat2 jacobian(Point2 p) const;
  // inf of the smallest singular value of the differential over the domain,
  // sampled on a grid of step 1e-2 (exact for affine maps).
  double min_singular_value() const { return sigma_min_; }

 private:
  DiffeoPreset(Kind kind, std::string name, std::optional<Square> domain, std::array<double, 6> params);
  double sample_sigma_min() const;

  Kind kind_;
  std::string name_;
  std::optional<Square> domain_;
  std::array<double, 6> params_{};
  double sigma_min_ = 1.0;
};

// delta' = delta * min singular value; separation re-verified on the image.
PointCloud apply_diffeo(const DiffeoPreset& map, const PointCloud& A);

struct BridgeSample {
  double x = 0.0;
  int vis_delta = 0;
  double projected_length = 0.0;
  double ratio_delta = 0.0;  // vis_delta * delta / projected_length
};

// vis_delta at (x, 0) against the length of the projection of T(A^delta)
// onto the normal of direction theta_x. A^delta is covered by the side-2delta
// squares centred on A; T maps each to a convex quadrilateral.
BridgeSample radial_vs_projection_bridge(const PointCloud& A, double x, const LineFamily& fam,
                                         double c = kDefaultC);

// Distance between the T-images of the lines through (x, 0) with slopes m1, m2.
double image_line_separation(double x, double m1, double m2);

// Under the polar map each square [x0, x0+s] x [y0, y0+s] becomes an annular
// sector seen from the origin as the arc [pi y0, pi (y0 + s)].
std::vector<Arc> polar_sector_arcs(std::span<const DiskNode> nodes);
double polar_visibility_from_origin(std::span<const DiskNode> nodes);

}  // namespace vislab
