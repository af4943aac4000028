// Exact decision of the l-infinity ball containment predicate used by the
// lattice discretization.  All comparisons are carried out in arbitrary
// precision rationals over the binary values of the shape parameters, so
// strict-inequality ties (which do occur: unit square at even N) are decided
// deterministically.  A double-precision distance filter handles the easy
// bulk; only candidates near the tie band reach the rational path.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>

#include "dgff/geometry.hpp"

namespace dgff {

namespace {

using R = boost::multiprecision::cpp_rational;

R rat(double v) { return R(v); }  // exact: doubles are dyadic rationals

struct RBox {
  R xlo, xhi, ylo, yhi;
};

// a < b when strict, a <= b otherwise.
bool lt(const R& a, const R& b, bool strict) { return strict ? a < b : a <= b; }

// ---- segment vs box ------------------------------------------------------

// Liang-Barsky clip of segment [A,B] against the box.  With open_box=false
// any touching counts as intersection; with open_box=true the segment must
// pass through the interior.
bool segment_intersects_box(const R& ax, const R& ay, const R& bx, const R& by,
                            const RBox& box, bool open_box) {
  const R dx = bx - ax;
  const R dy = by - ay;
  R t0 = 0, t1 = 1;
  auto clip = [&](const R& p, const R& q) -> bool {
    if (p == 0) return q >= 0;
    const R t = q / p;
    if (p < 0) {
      if (t > t1) return false;
      if (t > t0) t0 = t;
    } else {
      if (t < t0) return false;
      if (t < t1) t1 = t;
    }
    return true;
  };
  if (!clip(-dx, ax - box.xlo)) return false;
  if (!clip(dx, box.xhi - ax)) return false;
  if (!clip(-dy, ay - box.ylo)) return false;
  if (!clip(dy, box.yhi - ay)) return false;
  if (t0 > t1) return false;
  if (!open_box) return true;
  if (t0 == t1) return false;  // single touch point lies on the box boundary
  if (dx == 0 && (ax == box.xlo || ax == box.xhi)) return false;
  if (dy == 0 && (ay == box.ylo || ay == box.yhi)) return false;
  return true;
}

// ---- point vs polygon ----------------------------------------------------

// +1 strictly inside, 0 on the boundary, -1 outside.
int polygon_location(const Polygon& poly, const R& px, const R& py) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const R ax = rat(v[j].x), ay = rat(v[j].y);
    const R bx = rat(v[i].x), by = rat(v[i].y);
    const R cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    if (cross == 0 && std::min(ax, bx) <= px && px <= std::max(ax, bx) &&
        std::min(ay, by) <= py && py <= std::max(ay, by))
      return 0;
    if ((ay > py) != (by > py)) {
      const R x_int = ax + (py - ay) * (bx - ax) / (by - ay);
      if (px < x_int) inside = !inside;
    }
  }
  return inside ? 1 : -1;
}

// ---- ball inside a component ----------------------------------------------

// strict=true: closed ball inside the open shape; strict=false: open ball.
bool ball_inside_shape(const Shape& s, const R& px, const R& py, const R& r,
                       const RBox& box, bool strict) {
  if (const auto* rc = std::get_if<Rect>(&s)) {
    return lt(rat(rc->lo.x), box.xlo, strict) && lt(box.xhi, rat(rc->hi.x), strict) &&
           lt(rat(rc->lo.y), box.ylo, strict) && lt(box.yhi, rat(rc->hi.y), strict);
  }
  if (const auto* dc = std::get_if<Disc>(&s)) {
    R dx = abs(px - rat(dc->center.x)) + r;
    R dy = abs(py - rat(dc->center.y)) + r;
    return lt(dx * dx + dy * dy, rat(dc->radius) * rat(dc->radius), strict);
  }
  const auto& poly = std::get<Polygon>(s);
  if (polygon_location(poly, px, py) <= 0) return false;
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    // Closed ball must avoid the boundary entirely; the open ball only needs
    // the boundary out of its interior.
    if (segment_intersects_box(rat(v[j].x), rat(v[j].y), rat(v[i].x), rat(v[i].y),
                               box, /*open_box=*/!strict))
      return false;
  }
  return true;
}

// ---- ball vs hole ----------------------------------------------------------

// True when the ball (closed if strict, open otherwise) misses the closed hole.
bool ball_avoids_hole(const Shape& h, const R& px, const R& py, const RBox& box,
                      bool strict) {
  if (const auto* rc = std::get_if<Rect>(&h)) {
    return lt(box.xhi, rat(rc->lo.x), strict) || lt(rat(rc->hi.x), box.xlo, strict) ||
           lt(box.yhi, rat(rc->lo.y), strict) || lt(rat(rc->hi.y), box.ylo, strict);
  }
  if (const auto* dc = std::get_if<Disc>(&h)) {
    const R cx = rat(dc->center.x), cy = rat(dc->center.y);
    R dx = 0, dy = 0;
    if (cx < box.xlo) dx = box.xlo - cx;
    else if (cx > box.xhi) dx = cx - box.xhi;
    if (cy < box.ylo) dy = box.ylo - cy;
    else if (cy > box.yhi) dy = cy - box.yhi;
    const R rr = rat(dc->radius) * rat(dc->radius);
    return strict ? dx * dx + dy * dy > rr : dx * dx + dy * dy >= rr;
  }
  const auto& poly = std::get<Polygon>(h);
  if (polygon_location(poly, px, py) >= 0) return false;  // center in closed hole
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if (segment_intersects_box(rat(v[j].x), rat(v[j].y), rat(v[i].x), rat(v[i].y),
                               box, /*open_box=*/!strict))
      return false;
  }
  return true;
}

}  // namespace

bool ContinuumDomain::linf_ball_inside(long long px_num, long long py_num,
                                       long long point_den, long long r_num,
                                       long long r_den, bool strict) const {
  if (point_den <= 0 || r_den <= 0 || r_num <= 0)
    throw InvalidDomain("linf_ball_inside needs positive denominators and radius");

  // Double filter: d_inf is sandwiched between d_2/sqrt(2) and d_2, so points
  // far from the tie band are decided without rational arithmetic.
  const double pxd = static_cast<double>(px_num) / static_cast<double>(point_den);
  const double pyd = static_cast<double>(py_num) / static_cast<double>(point_den);
  const double rd = static_cast<double>(r_num) / static_cast<double>(r_den);
  const double sd = signed_dist({pxd, pyd});
  constexpr double kMargin = 1e-7;
  if (sd > M_SQRT2 * rd + kMargin) return true;
  if (sd < rd - kMargin) return false;

  const R px(px_num, point_den);
  const R py(py_num, point_den);
  const R r(r_num, r_den);
  const RBox box{px - r, px + r, py - r, py + r};
  for (const auto& h : holes_)
    if (!ball_avoids_hole(h, px, py, box, strict)) return false;
  for (const auto& c : components_)
    if (ball_inside_shape(c, px, py, r, box, strict)) return true;
  return false;
}

}  // namespace dgff
