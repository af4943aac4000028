#include "dgff/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace dgff {

namespace {

bool row_major_less(const LatticePoint& a, const LatticePoint& b) {
  if (a.y != b.y) return a.y < b.y;
  return a.x < b.x;
}

}  // namespace

LatticeDomain LatticeDomain::from_points(std::vector<LatticePoint> points, int scale) {
  if (scale < 1) throw InvalidDomain("lattice scale must be >= 1");
  if (points.empty()) throw EmptyDiscretization("lattice domain has no vertices");
  std::sort(points.begin(), points.end(), row_major_less);
  points.erase(std::unique(points.begin(), points.end()), points.end());
  LatticeDomain d;
  d.scale_ = scale;
  d.vertices_ = std::move(points);
  d.build_index_and_boundary();
  return d;
}

void LatticeDomain::build_index_and_boundary() {
  index_.clear();
  index_.reserve(vertices_.size() * 2);
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    index_.emplace(key(vertices_[i].x, vertices_[i].y), i);

  inner_boundary_.clear();
  outer_boundary_.clear();
  std::unordered_set<std::uint64_t> outer_seen;
  for (const auto& v : vertices_) {
    bool on_boundary = false;
    for (const auto& d : kNeighborOffsets) {
      const int nx = v.x + d.x, ny = v.y + d.y;
      if (is_vertex(nx, ny)) continue;
      on_boundary = true;
      if (outer_seen.insert(key(nx, ny)).second) outer_boundary_.push_back({nx, ny});
    }
    if (on_boundary) inner_boundary_.push_back(v);
  }
  std::sort(outer_boundary_.begin(), outer_boundary_.end(), row_major_less);
}

std::optional<std::size_t> LatticeDomain::vertex_index(LatticePoint p) const {
  auto it = index_.find(key(p.x, p.y));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t LatticeDomain::require_index(LatticePoint p) const {
  auto idx = vertex_index(p);
  if (!idx)
    throw VertexOutsideDomain("(" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                              ") is not a vertex of the lattice domain");
  return *idx;
}

LatticeBounds LatticeDomain::bounds() const {
  LatticeBounds b;
  if (vertices_.empty()) return b;
  b.xmin = b.xmax = vertices_.front().x;
  b.ymin = vertices_.front().y;
  b.ymax = vertices_.back().y;  // row-major order
  for (const auto& v : vertices_) {
    b.xmin = std::min(b.xmin, v.x);
    b.xmax = std::max(b.xmax, v.x);
  }
  return b;
}

LatticeDomain discretize(const ContinuumDomain& domain, int scale) {
  if (scale < 1) throw InvalidDomain("discretization scale must be >= 1");
  if (domain.empty()) throw InvalidDomain("cannot discretize an empty domain");
  const Rect bb = domain.bounding_box();
  const double n = static_cast<double>(scale);
  const long long x0 = static_cast<long long>(std::floor(bb.lo.x * n)) - 1;
  const long long x1 = static_cast<long long>(std::ceil(bb.hi.x * n)) + 1;
  const long long y0 = static_cast<long long>(std::floor(bb.lo.y * n)) - 1;
  const long long y1 = static_cast<long long>(std::ceil(bb.hi.y * n)) + 1;
  if (x1 - x0 > std::numeric_limits<int>::max() || y1 - y0 > std::numeric_limits<int>::max())
    throw InvalidDomain("discretization candidate window overflows int coordinates");

  std::vector<LatticePoint> pts;
  for (long long iy = y0; iy <= y1; ++iy) {
    for (long long ix = x0; ix <= x1; ++ix) {
      if (domain.linf_ball_inside(ix, iy, scale, 1, scale, /*strict=*/true))
        pts.push_back({static_cast<int>(ix), static_cast<int>(iy)});
    }
  }
  if (pts.empty())
    throw EmptyDiscretization("discretization is empty at scale N=" + std::to_string(scale));
  return LatticeDomain::from_points(std::move(pts), scale);
}

LatticeDomain lattice_rectangle(int x0, int x1, int y0, int y1, int scale) {
  if (x1 < x0 || y1 < y0) throw InvalidDomain("lattice rectangle has empty index range");
  std::vector<LatticePoint> pts;
  pts.reserve(static_cast<std::size_t>(x1 - x0 + 1) * static_cast<std::size_t>(y1 - y0 + 1));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) pts.push_back({x, y});
  return LatticeDomain::from_points(std::move(pts), scale);
}

}  // namespace dgff
