#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace maxperim {

using Vector = std::vector<double>;
using ConstPoint = std::span<double const>;

double dot(ConstPoint a, ConstPoint b);
double norm(ConstPoint a);

// { x : <normal, x> <= offset }. The normal is kept exactly as given; it is
// never normalized, and every formula that needs |normal| carries it.
class Halfspace {
 public:
  Halfspace(Vector normal, double offset);

  int dim() const { return static_cast<int>(normal_.size()); }
  Vector const& normal() const { return normal_; }
  double offset() const { return offset_; }
  double normal_norm() const { return normal_norm_; }

 private:
  Vector normal_;
  double offset_;
  double normal_norm_;
};

class Ball {
 public:
  Ball(int dim, double radius);
  Ball(double radius, Vector center);

  int dim() const { return static_cast<int>(center_.size()); }
  double radius() const { return radius_; }
  Vector const& center() const { return center_; }

 private:
  double radius_;
  Vector center_;
};

// Axis-aligned box center + [-h_1, h_1] x ... x [-h_n, h_n].
class Box {
 public:
  explicit Box(Vector half_widths);
  Box(Vector half_widths, Vector center);

  // [-h, h]^n
  static Box cube(int dim, double half_width);

  int dim() const { return static_cast<int>(half_widths_.size()); }
  Vector const& half_widths() const { return half_widths_; }
  Vector const& center() const { return center_; }

 private:
  Vector half_widths_;
  Vector center_;
};

struct BoundingBox {
  Vector lower;
  Vector upper;
};

// Finite intersection of halfspaces, stored row-major for fast margin sweeps.
class Polytope {
 public:
  explicit Polytope(std::vector<Halfspace> const& facets,
                    std::optional<BoundingBox> bounding_box = std::nullopt);

  int dim() const { return dim_; }
  std::size_t facet_count() const { return offsets_.size(); }
  ConstPoint normal(std::size_t i) const {
    return ConstPoint(normals_).subspan(i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_));
  }
  double offset(std::size_t i) const { return offsets_[i]; }
  double normal_norm(std::size_t i) const { return norms_[i]; }
  Halfspace facet(std::size_t i) const;
  std::optional<BoundingBox> const& bounding_box() const { return bounding_box_; }

  std::span<double const> normals_row_major() const { return normals_; }
  std::span<double const> offsets() const { return offsets_; }

 private:
  int dim_;
  std::vector<double> normals_;
  std::vector<double> offsets_;
  std::vector<double> norms_;
  std::optional<BoundingBox> bounding_box_;
};

using NamedBody = std::variant<Ball, Box, Halfspace>;
using Body = std::variant<Ball, Box, Halfspace, Polytope>;

int dimension(Body const& body);
int dimension(NamedBody const& body);
Body to_body(NamedBody const& body);
std::optional<NamedBody> as_named(Body const& body);

// Closed-set membership.
bool contains(Body const& body, ConstPoint x);

// m_i = <x, theta_i> - rho_i for every facet.
Vector facet_margins(Polytope const& polytope, ConstPoint x);
void facet_margins(Polytope const& polytope, ConstPoint x, std::span<double> out);

struct Inradius {
  double radius = 0.0;
  Vector center;
  bool unbounded = false;
};

// Largest inscribed Euclidean ball via the linear program
//   max r  s.t.  <theta_i/|theta_i|, x> + r <= rho_i/|theta_i|.
// Throws EmptyBodyError when the polytope is empty.
Inradius chebyshev_inradius(Polytope const& polytope);

// Inradius of any supported body (halfspaces report +inf).
double inradius(Body const& body);

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Closed form for balls and boxes; Monte Carlo hit ratio for polytopes of
// dimension <= 10 that carry a bounding box.
VolumeEstimate body_volume(Body const& body, std::size_t samples = 1'000'000,
                           std::uint64_t seed = 0);

// Balls and boxes only.
double body_surface_area(Body const& body);

Polytope box_as_polytope(Box const& box);

// Euclidean signed distance to the boundary: positive outside, negative inside.
double signed_distance(NamedBody const& body, ConstPoint x);

// Image of the body under z -> (z - shift) / scale. Perimeter estimators use
// it to move a body into the frame of a measure's base law.
Body to_standard_frame(Body const& body, ConstPoint shift, double scale);
NamedBody to_standard_frame(NamedBody const& body, ConstPoint shift, double scale);

// Image under z -> shift + scale * z.
Body from_standard_frame(Body const& body, ConstPoint shift, double scale);

}  // namespace maxperim
