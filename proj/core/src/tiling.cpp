#include "dgff/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dgff {

namespace {

constexpr double kPi = 3.14159265358979323846;

double point_segment_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab{b.x - a.x, b.y - a.y};
  const Vec2 ap{p.x - a.x, p.y - a.y};
  const double len2 = ab.dot(ab);
  double t = len2 > 0 ? std::clamp(ap.dot(ab) / len2, 0.0, 1.0) : 0.0;
  const Vec2 q{a.x + t * ab.x, a.y + t * ab.y};
  return std::hypot(p.x - q.x, p.y - q.y);
}

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = cross(c, d, a), d2 = cross(c, d, b);
  const double d3 = cross(a, b, c), d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on = [](const Vec2& p, const Vec2& q, const Vec2& r, double c) {
    return c == 0 && std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  return on(c, d, a, d1) || on(c, d, b, d2) || on(a, b, c, d3) || on(a, b, d, d4);
}

double segment_segment_dist(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min(std::min(point_segment_dist(a, c, d), point_segment_dist(b, c, d)),
                  std::min(point_segment_dist(c, a, b), point_segment_dist(d, a, b)));
}

bool point_in_triangle(const Vec2& p, const Triangle& t) {
  const double c1 = cross(t.v[0], t.v[1], p);
  const double c2 = cross(t.v[1], t.v[2], p);
  const double c3 = cross(t.v[2], t.v[0], p);
  const bool has_neg = c1 < 0 || c2 < 0 || c3 < 0;
  const bool has_pos = c1 > 0 || c2 > 0 || c3 > 0;
  return !(has_neg && has_pos);
}

double point_triangle_dist(const Vec2& p, const Triangle& t) {
  if (point_in_triangle(p, t)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i)
    d = std::min(d, point_segment_dist(p, t.v[i], t.v[(i + 1) % 3]));
  return d;
}

Triangle shrink_about_centroid(const Triangle& t, double factor) {
  const Vec2 c = t.centroid();
  Triangle s;
  for (int i = 0; i < 3; ++i)
    s.v[i] = {c.x + factor * (t.v[i].x - c.x), c.y + factor * (t.v[i].y - c.y)};
  return s;
}

std::array<Vec2, 4> rect_corners(const Rect& r) {
  return {Vec2{r.lo.x, r.lo.y}, Vec2{r.hi.x, r.lo.y}, Vec2{r.hi.x, r.hi.y},
          Vec2{r.lo.x, r.hi.y}};
}

// Distance between the closed triangle and a closed shape; 0 when they meet.
double triangle_shape_dist(const Triangle& t, const Shape& s) {
  if (const auto* dc = std::get_if<Disc>(&s)) {
    return std::max(0.0, point_triangle_dist(dc->center, t) - dc->radius);
  }
  std::vector<Vec2> ring;
  if (const auto* rc = std::get_if<Rect>(&s)) {
    auto c = rect_corners(*rc);
    ring.assign(c.begin(), c.end());
  } else {
    ring = std::get<Polygon>(s).vertices;
  }
  // Containment in either direction means the sets meet.
  if (point_in_triangle(ring[0], t)) return 0.0;
  if (shape_signed_dist(s, t.v[0]) >= 0.0) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++)
    for (int k = 0; k < 3; ++k)
      d = std::min(d, segment_segment_dist(ring[j], ring[i], t.v[k], t.v[(k + 1) % 3]));
  return d;
}

// Distance from the closed triangle to the complement of the single open
// component it sits in (an underestimate of dist(T, D^c), which is what the
// partition ordering needs).
double triangle_component_dist(const Triangle& t, const Shape& comp) {
  if (const auto* rc = std::get_if<Rect>(&comp)) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : t.v) {
      d = std::min({d, p.x - rc->lo.x, rc->hi.x - p.x, p.y - rc->lo.y, rc->hi.y - p.y});
    }
    return std::max(0.0, d);
  }
  if (const auto* dc = std::get_if<Disc>(&comp)) {
    double far = 0.0;
    for (const auto& p : t.v)
      far = std::max(far, std::hypot(p.x - dc->center.x, p.y - dc->center.y));
    return std::max(0.0, dc->radius - far);
  }
  const auto& ring = std::get<Polygon>(comp).vertices;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++)
    for (int k = 0; k < 3; ++k)
      d = std::min(d, segment_segment_dist(ring[j], ring[i], t.v[k], t.v[(k + 1) % 3]));
  return d;
}

// Open triangle contained in the open component (boundary contact allowed).
bool triangle_in_component(const Triangle& t, const Triangle& t_eps, const Shape& comp,
                           double tol) {
  if (const auto* rc = std::get_if<Rect>(&comp)) {
    for (const auto& p : t.v)
      if (p.x < rc->lo.x - tol || p.x > rc->hi.x + tol || p.y < rc->lo.y - tol ||
          p.y > rc->hi.y + tol)
        return false;
    return true;
  }
  if (const auto* dc = std::get_if<Disc>(&comp)) {
    for (const auto& p : t.v)
      if (std::hypot(p.x - dc->center.x, p.y - dc->center.y) > dc->radius + tol)
        return false;
    return true;
  }
  if (shape_signed_dist(comp, t.centroid()) < 0) return false;
  const auto& ring = std::get<Polygon>(comp).vertices;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++)
    for (int k = 0; k < 3; ++k)
      if (segments_intersect(ring[j], ring[i], t_eps.v[k], t_eps.v[(k + 1) % 3]))
        return false;
  // No boundary edge crosses the slightly shrunk triangle and the centroid is
  // in the closed polygon, so the open triangle lies inside.
  return true;
}

// Closed hole does not meet the open triangle (contact with its edges is OK).
bool triangle_avoids_hole(const Triangle& t_eps, const Shape& hole) {
  return triangle_shape_dist(t_eps, hole) > 0.0;
}

}  // namespace

ContinuumDomain delta_interior(const ContinuumDomain& domain, double delta) {
  if (!(delta > 0.0)) throw InvalidDomain("delta-interior needs delta > 0");
  std::vector<Shape> comps;
  for (const auto& s : domain.components()) {
    if (const auto* r = std::get_if<Rect>(&s)) {
      if (r->width() > 2 * delta && r->height() > 2 * delta)
        comps.push_back(Rect{{r->lo.x + delta, r->lo.y + delta},
                             {r->hi.x - delta, r->hi.y - delta}});
    } else if (const auto* d = std::get_if<Disc>(&s)) {
      if (d->radius > delta) comps.push_back(Disc{d->center, d->radius - delta});
    } else {
      throw UnsupportedShape("delta-interior supports rectangle and disc components");
    }
  }
  if (comps.empty())
    throw EmptyInterior("delta-interior is empty at delta=" + std::to_string(delta));
  std::vector<Shape> holes;
  for (const auto& h : domain.holes()) {
    if (const auto* r = std::get_if<Rect>(&h)) {
      holes.push_back(Rect{{r->lo.x - delta, r->lo.y - delta},
                           {r->hi.x + delta, r->hi.y + delta}});
    } else if (const auto* d = std::get_if<Disc>(&h)) {
      holes.push_back(Disc{d->center, d->radius + delta});
    } else {
      throw UnsupportedShape("delta-interior supports rectangle and disc holes");
    }
  }
  ContinuumDomain result(comps, holes);
  if (!holes.empty()) {
    // Dilated holes may swallow every component; probe for a surviving point.
    const Rect bb = result.bounding_box();
    bool found = false;
    const int grid = 256;
    for (int j = 0; j < grid && !found; ++j)
      for (int i = 0; i < grid && !found; ++i)
        found = result.contains({bb.lo.x + (i + 0.5) * bb.width() / grid,
                                 bb.lo.y + (j + 0.5) * bb.height() / grid});
    if (!found)
      throw EmptyInterior("delta-interior is empty at delta=" + std::to_string(delta));
  }
  return result;
}

std::vector<Vec2> square_tiling_corners(const ContinuumDomain& domain, int level) {
  if (level < 1) throw InvalidDomain("tiling level must be >= 1");
  if (level > 20) throw InvalidDomain("tiling level too fine");
  const long long den = 1LL << level;        // tile side 1/den
  const long long cden = den * 2;            // tile centers at odd/cden
  const Rect bb = domain.bounding_box();
  const long long kx0 = static_cast<long long>(std::floor(bb.lo.x * den)) - 1;
  const long long kx1 = static_cast<long long>(std::ceil(bb.hi.x * den)) + 1;
  const long long ky0 = static_cast<long long>(std::floor(bb.lo.y * den)) - 1;
  const long long ky1 = static_cast<long long>(std::ceil(bb.hi.y * den)) + 1;
  if ((kx1 - kx0 + 1) * (ky1 - ky0 + 1) > 50'000'000LL)
    throw InvalidDomain("tiling level too fine for the domain diameter");
  std::vector<Vec2> corners;
  const double side = 1.0 / static_cast<double>(den);
  for (long long ky = ky0; ky <= ky1; ++ky) {
    for (long long kx = kx0; kx <= kx1; ++kx) {
      // The open tile is the l-infinity ball of radius 1/(2 den) about its
      // center; open containment is the non-strict distance test.
      if (domain.linf_ball_inside(2 * kx + 1, 2 * ky + 1, cden, 1, cden,
                                  /*strict=*/false))
        corners.push_back({static_cast<double>(kx) * side,
                           static_cast<double>(ky) * side});
    }
  }
  return corners;
}

ContinuumDomain square_tiling(const ContinuumDomain& domain, int level) {
  const double side = std::ldexp(1.0, -level);     // 2^-n
  const double margin = std::ldexp(1.0, -2 * level);  // 2^-2n
  if (side - 2 * margin <= 0.0)
    throw EmptyInterior("shrunk tiles are degenerate at level " + std::to_string(level));
  const std::vector<Vec2> corners = square_tiling_corners(domain, level);
  if (corners.empty())
    throw EmptyInterior("no tile of side 2^-" + std::to_string(level) +
                        " fits inside the domain");
  std::vector<Shape> comps;
  comps.reserve(corners.size());
  for (const auto& c : corners)
    comps.push_back(Rect{{c.x + margin, c.y + margin},
                         {c.x + side - margin, c.y + side - margin}});
  return ContinuumDomain(std::move(comps));
}

TriangularPartition triangulate(const ContinuumDomain& domain, int mesh, double delta,
                                double orientation) {
  if (mesh < 1) throw InvalidDomain("triangular mesh parameter must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw InvalidDomain("triangular shrink fraction must lie in (0,1)");

  const double s = 1.0 / mesh;
  const Vec2 u{s * std::cos(orientation), s * std::sin(orientation)};
  const Vec2 w{s * std::cos(orientation + kPi / 3), s * std::sin(orientation + kPi / 3)};

  // Integer ranges: map the (padded) bounding box corners through the inverse
  // of (i, j) -> i u + j w.
  const Rect bb = domain.bounding_box();
  const double det = u.x * w.y - u.y * w.x;
  double imin = std::numeric_limits<double>::infinity(), imax = -imin;
  double jmin = imin, jmax = -imin;
  for (const double px : {bb.lo.x - s, bb.hi.x + s}) {
    for (const double py : {bb.lo.y - s, bb.hi.y + s}) {
      const double i = (px * w.y - py * w.x) / det;
      const double j = (py * u.x - px * u.y) / det;
      imin = std::min(imin, i), imax = std::max(imax, i);
      jmin = std::min(jmin, j), jmax = std::max(jmax, j);
    }
  }
  const long long i0 = static_cast<long long>(std::floor(imin)) - 1;
  const long long i1 = static_cast<long long>(std::ceil(imax)) + 1;
  const long long j0 = static_cast<long long>(std::floor(jmin)) - 1;
  const long long j1 = static_cast<long long>(std::ceil(jmax)) + 1;
  if ((i1 - i0 + 1) * (j1 - j0 + 1) > 50'000'000LL)
    throw InvalidDomain("triangular mesh too fine for the domain diameter");

  const double tol = 1e-12 * std::max(1.0, std::max(std::abs(bb.hi.x) + std::abs(bb.lo.x),
                                                    std::abs(bb.hi.y) + std::abs(bb.lo.y)));
  struct Kept {
    Triangle t;
    double dist;
  };
  std::vector<Kept> kept;

  auto consider = [&](const Triangle& t) {
    const Vec2 c = t.centroid();
    if (!domain.contains(c)) return;
    const Triangle t_eps = shrink_about_centroid(t, 1.0 - 1e-9);
    for (const auto& h : domain.holes())
      if (!triangle_avoids_hole(t_eps, h)) return;
    for (const auto& comp : domain.components()) {
      if (!shape_contains(comp, c)) continue;
      if (!triangle_in_component(t, t_eps, comp, tol)) continue;
      double d = triangle_component_dist(t, comp);
      for (const auto& h : domain.holes()) d = std::min(d, triangle_shape_dist(t, h));
      kept.push_back({t, d});
      return;
    }
  };

  for (long long j = j0; j <= j1; ++j) {
    for (long long i = i0; i <= i1; ++i) {
      const Vec2 p{i * u.x + j * w.x, i * u.y + j * w.y};
      const Vec2 pu{p.x + u.x, p.y + u.y};
      const Vec2 pw{p.x + w.x, p.y + w.y};
      const Vec2 puw{p.x + u.x + w.x, p.y + u.y + w.y};
      consider(Triangle{{p, pu, pw}});
      consider(Triangle{{pu, puw, pw}});
    }
  }
  if (kept.empty())
    throw NoTriangles("no triangle of side 1/" + std::to_string(mesh) +
                      " fits inside the domain");

  std::stable_partition(kept.begin(), kept.end(),
                        [&](const Kept& k) { return k.dist >= delta; });

  TriangularPartition part;
  part.mesh = mesh;
  part.delta = delta;
  part.orientation = orientation;
  part.total_count = kept.size();
  part.triangles.reserve(kept.size());
  part.shrunk.reserve(kept.size());
  part.centers.reserve(kept.size());
  part.boundary_distance.reserve(kept.size());
  for (const auto& k : kept) {
    part.triangles.push_back(k.t);
    part.shrunk.push_back(shrink_about_centroid(k.t, 1.0 - delta));
    part.centers.push_back(k.t.centroid());
    part.boundary_distance.push_back(k.dist);
    if (k.dist >= delta) ++part.interior_count;
  }
  return part;
}

}  // namespace dgff
