#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dgff/errors.hpp"

namespace dgff {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Open axis-aligned rectangle (lo, hi) x (lo, hi).  A degenerate rectangle
// (zero width or height, positive length) is allowed as a hole; it subtracts
// a closed segment, which is how thin slits and crosses are modelled.
struct Rect {
  Vec2 lo;
  Vec2 hi;

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

struct Disc {
  Vec2 center;
  double radius = 0.0;
};

// Simple polygon, vertices in order (either orientation), open interior.
struct Polygon {
  std::vector<Vec2> vertices;
};

using Shape = std::variant<Rect, Disc, Polygon>;

// Bounded open planar domain: a union of open primitive components minus a
// union of closed holes.  Components are expected not to overlap each other
// (they may touch along boundary sets); the exact lattice-membership
// predicate treats a point as deep inside the domain only when a single
// component contains the whole test ball, which is exact for disjoint or
// nested layouts and conservative for overlapping unions.
class ContinuumDomain {
 public:
  ContinuumDomain() = default;
  ContinuumDomain(std::vector<Shape> components, std::vector<Shape> holes = {},
                  double min_boundary_diameter = 1e-6);

  const std::vector<Shape>& components() const { return components_; }
  const std::vector<Shape>& holes() const { return holes_; }

  // Strict membership in the open set.
  bool contains(const Vec2& p) const;

  // Euclidean distance to the complement (0 outside).  Computed from primitive
  // signed distances combined CSG-style; exact for non-overlapping components.
  double dist_to_complement(const Vec2& p) const;

  // Signed distance, positive inside.
  double signed_dist(const Vec2& p) const;

  // Exact predicate: is the l-infinity ball of radius r_num/r_den centered at
  // (px_num/point_den, py_num/point_den) contained in the domain?  With
  // strict=true the closed ball is tested (equivalent to d_inf(p, D^c) > r),
  // with strict=false the open ball (d_inf >= r).  All arithmetic is exact
  // rational over the binary representations of the shape parameters, so ties
  // are decided deterministically.
  bool linf_ball_inside(long long px_num, long long py_num,
                        long long point_den, long long r_num, long long r_den,
                        bool strict) const;

  // Axis-aligned bounding box of the components.
  Rect bounding_box() const;

  double lebesgue_estimate(int samples_per_axis = 512) const;

  bool empty() const { return components_.empty(); }

 private:
  void validate(double min_boundary_diameter) const;

  std::vector<Shape> components_;
  std::vector<Shape> holes_;
};

// Convenience constructors.
ContinuumDomain unit_square();                       // (0,1)^2
ContinuumDomain square(double side, Vec2 lo = {0, 0});
ContinuumDomain rectangle(Vec2 lo, Vec2 hi);
ContinuumDomain disc(Vec2 center, double radius);
ContinuumDomain unit_disc();

// Scale a domain about the origin by lambda > 0 (holes included).
ContinuumDomain scaled(const ContinuumDomain& d, double lambda);
// Translate by a.
ContinuumDomain translated(const ContinuumDomain& d, const Vec2& a);

// Per-shape helpers used across the geometry code.
bool shape_contains(const Shape& s, const Vec2& p);          // open interior
double shape_signed_dist(const Shape& s, const Vec2& p);     // + inside
double shape_dist_to_set(const Shape& s, const Vec2& p);     // to closed set
Rect shape_bounding_box(const Shape& s);

}  // namespace dgff
