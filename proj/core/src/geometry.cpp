#include "dgff/geometry.hpp"

#include <algorithm>
#include <limits>

namespace dgff {

namespace {

double seg_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.norm2();
  if (len2 == 0.0) return (p - a).norm();
  double t = (p - a).dot(ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool rect_degenerate(const Rect& r) {
  return r.width() <= 0.0 || r.height() <= 0.0;
}

double rect_signed_dist(const Rect& r, const Vec2& p) {
  if (rect_degenerate(r)) {
    // Closed segment / point: empty interior, distance is to the set itself.
    const Vec2 c{std::clamp(p.x, r.lo.x, r.hi.x), std::clamp(p.y, r.lo.y, r.hi.y)};
    return -(p - c).norm();
  }
  const double dx = std::max(r.lo.x - p.x, p.x - r.hi.x);
  const double dy = std::max(r.lo.y - p.y, p.y - r.hi.y);
  if (dx <= 0.0 && dy <= 0.0) return -std::max(dx, dy);  // inside
  const double ox = std::max(dx, 0.0);
  const double oy = std::max(dy, 0.0);
  return -std::hypot(ox, oy);
}

double disc_signed_dist(const Disc& d, const Vec2& p) {
  return d.radius - (p - d.center).norm();
}

// Crossing-number parity with on-boundary detection in doubles.  The exact
// rational version lives in geometry_exact.cpp; this one serves approximate
// queries (statistics grids, plotting, quadrature masks).
int polygon_location(const Polygon& poly, const Vec2& p) {
  // returns +1 strictly inside, 0 on boundary (within fp resolution), -1 outside
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = v[j];
    const Vec2& b = v[i];
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross == 0.0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
        std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y)) {
      return 0;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_int = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x_int) inside = !inside;
    }
  }
  return inside ? 1 : -1;
}

double polygon_signed_dist(const Polygon& poly, const Vec2& p) {
  const auto& v = poly.vertices;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    d = std::min(d, seg_dist(p, v[j], v[i]));
  }
  const int loc = polygon_location(poly, p);
  if (loc == 0) return 0.0;
  return loc > 0 ? d : -d;
}

double shape_diameter(const Shape& s) {
  if (const auto* r = std::get_if<Rect>(&s)) return std::hypot(r->width(), r->height());
  if (const auto* d = std::get_if<Disc>(&s)) return 2.0 * d->radius;
  const auto& poly = std::get<Polygon>(s);
  double m = 0.0;
  for (std::size_t i = 0; i < poly.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < poly.vertices.size(); ++j)
      m = std::max(m, (poly.vertices[i] - poly.vertices[j]).norm());
  return m;
}

}  // namespace

bool shape_contains(const Shape& s, const Vec2& p) {
  if (const auto* r = std::get_if<Rect>(&s)) {
    if (rect_degenerate(*r)) return false;
    return p.x > r->lo.x && p.x < r->hi.x && p.y > r->lo.y && p.y < r->hi.y;
  }
  if (const auto* d = std::get_if<Disc>(&s))
    return (p - d->center).norm2() < d->radius * d->radius;
  return polygon_location(std::get<Polygon>(s), p) > 0;
}

double shape_signed_dist(const Shape& s, const Vec2& p) {
  if (const auto* r = std::get_if<Rect>(&s)) return rect_signed_dist(*r, p);
  if (const auto* d = std::get_if<Disc>(&s)) return disc_signed_dist(*d, p);
  return polygon_signed_dist(std::get<Polygon>(s), p);
}

double shape_dist_to_set(const Shape& s, const Vec2& p) {
  // Distance from p to the closed set (0 if inside or on it).
  const double sd = shape_signed_dist(s, p);
  return std::max(-sd, 0.0);
}

Rect shape_bounding_box(const Shape& s) {
  if (const auto* r = std::get_if<Rect>(&s)) return *r;
  if (const auto* d = std::get_if<Disc>(&s))
    return Rect{{d->center.x - d->radius, d->center.y - d->radius},
                {d->center.x + d->radius, d->center.y + d->radius}};
  const auto& poly = std::get<Polygon>(s);
  Rect box{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
           {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const auto& v : poly.vertices) {
    box.lo.x = std::min(box.lo.x, v.x);
    box.lo.y = std::min(box.lo.y, v.y);
    box.hi.x = std::max(box.hi.x, v.x);
    box.hi.y = std::max(box.hi.y, v.y);
  }
  return box;
}

ContinuumDomain::ContinuumDomain(std::vector<Shape> components,
                                 std::vector<Shape> holes,
                                 double min_boundary_diameter)
    : components_(std::move(components)), holes_(std::move(holes)) {
  validate(min_boundary_diameter);
}

void ContinuumDomain::validate(double min_boundary_diameter) const {
  if (components_.empty()) throw InvalidDomain("domain has no components");
  for (const auto& s : components_) {
    if (const auto* r = std::get_if<Rect>(&s)) {
      if (r->width() <= 0.0 || r->height() <= 0.0)
        throw InvalidDomain("rectangle component must have positive area");
    } else if (const auto* d = std::get_if<Disc>(&s)) {
      if (!(d->radius > 0.0)) throw InvalidDomain("disc component needs radius > 0");
    } else {
      const auto& poly = std::get<Polygon>(s);
      if (poly.vertices.size() < 3)
        throw InvalidDomain("polygon component needs at least 3 vertices");
      for (std::size_t i = 0, j = poly.vertices.size() - 1; i < poly.vertices.size(); j = i++)
        if ((poly.vertices[i] - poly.vertices[j]).norm() == 0.0)
          throw InvalidDomain("polygon has a repeated consecutive vertex");
    }
    if (shape_diameter(s) < min_boundary_diameter)
      throw InvalidDomain("component boundary diameter below the minimum");
  }
  for (const auto& h : holes_) {
    if (shape_diameter(h) < min_boundary_diameter)
      throw InvalidDomain("hole boundary diameter below the minimum");
  }
}

bool ContinuumDomain::contains(const Vec2& p) const {
  bool in = false;
  for (const auto& s : components_)
    if (shape_contains(s, p)) {
      in = true;
      break;
    }
  if (!in) return false;
  for (const auto& h : holes_)
    if (shape_signed_dist(h, p) >= 0.0) return false;  // in or on the closed hole
  return true;
}

double ContinuumDomain::signed_dist(const Vec2& p) const {
  double sd = -std::numeric_limits<double>::infinity();
  for (const auto& s : components_) sd = std::max(sd, shape_signed_dist(s, p));
  for (const auto& h : holes_) sd = std::min(sd, -shape_signed_dist(h, p));
  return sd;
}

double ContinuumDomain::dist_to_complement(const Vec2& p) const {
  return std::max(signed_dist(p), 0.0);
}

Rect ContinuumDomain::bounding_box() const {
  Rect box{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
           {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const auto& s : components_) {
    const Rect b = shape_bounding_box(s);
    box.lo.x = std::min(box.lo.x, b.lo.x);
    box.lo.y = std::min(box.lo.y, b.lo.y);
    box.hi.x = std::max(box.hi.x, b.hi.x);
    box.hi.y = std::max(box.hi.y, b.hi.y);
  }
  return box;
}

double ContinuumDomain::lebesgue_estimate(int samples_per_axis) const {
  const Rect box = bounding_box();
  const double hx = (box.hi.x - box.lo.x) / samples_per_axis;
  const double hy = (box.hi.y - box.lo.y) / samples_per_axis;
  long long hits = 0;
  for (int i = 0; i < samples_per_axis; ++i)
    for (int j = 0; j < samples_per_axis; ++j)
      if (contains({box.lo.x + (i + 0.5) * hx, box.lo.y + (j + 0.5) * hy})) ++hits;
  return static_cast<double>(hits) * hx * hy;
}

ContinuumDomain unit_square() { return rectangle({0, 0}, {1, 1}); }

ContinuumDomain square(double side, Vec2 lo) {
  return rectangle(lo, {lo.x + side, lo.y + side});
}

ContinuumDomain rectangle(Vec2 lo, Vec2 hi) {
  return ContinuumDomain({Rect{lo, hi}});
}

ContinuumDomain disc(Vec2 center, double radius) {
  return ContinuumDomain({Disc{center, radius}});
}

ContinuumDomain unit_disc() { return disc({0, 0}, 1.0); }

namespace {

Shape scale_shape(const Shape& s, double lambda) {
  if (const auto* r = std::get_if<Rect>(&s))
    return Rect{{r->lo.x * lambda, r->lo.y * lambda}, {r->hi.x * lambda, r->hi.y * lambda}};
  if (const auto* d = std::get_if<Disc>(&s))
    return Disc{{d->center.x * lambda, d->center.y * lambda}, d->radius * lambda};
  Polygon p = std::get<Polygon>(s);
  for (auto& v : p.vertices) v = v * lambda;
  return p;
}

Shape translate_shape(const Shape& s, const Vec2& a) {
  if (const auto* r = std::get_if<Rect>(&s)) return Rect{r->lo + a, r->hi + a};
  if (const auto* d = std::get_if<Disc>(&s)) return Disc{d->center + a, d->radius};
  Polygon p = std::get<Polygon>(s);
  for (auto& v : p.vertices) v = v + a;
  return p;
}

}  // namespace

ContinuumDomain scaled(const ContinuumDomain& d, double lambda) {
  if (!(lambda > 0.0)) throw InvalidDomain("scale factor must be positive");
  std::vector<Shape> comps, holes;
  for (const auto& s : d.components()) comps.push_back(scale_shape(s, lambda));
  for (const auto& h : d.holes()) holes.push_back(scale_shape(h, lambda));
  return ContinuumDomain(std::move(comps), std::move(holes));
}

ContinuumDomain translated(const ContinuumDomain& d, const Vec2& a) {
  std::vector<Shape> comps, holes;
  for (const auto& s : d.components()) comps.push_back(translate_shape(s, a));
  for (const auto& h : d.holes()) holes.push_back(translate_shape(h, a));
  return ContinuumDomain(std::move(comps), std::move(holes));
}

}  // namespace dgff
