#pragma once

// Interior approximations of a continuum domain: the delta-interior, dyadic
// square tilings with shrunk tiles, and equilateral triangular partitions.

#include <array>
#include <cstddef>
#include <vector>

#include "dgff/errors.hpp"
#include "dgff/geometry.hpp"

namespace dgff {

// {x in D : dist(x, D^c) > delta}.  Exact for rectangle and disc components
// and disc holes; rectangle holes are dilated in l-infinity, which removes
// slightly more than the Euclidean dilation (the result is still contained in
// the true delta-interior).  Polygon components/holes are not supported.
// Throws EmptyInterior when nothing remains.
ContinuumDomain delta_interior(const ContinuumDomain& domain, double delta);

// Corners x_i in 2^-n Z^2 of the open side-2^-n squares contained in the
// domain, in row-major order.
std::vector<Vec2> square_tiling_corners(const ContinuumDomain& domain, int level);

// Union of the shrunk tiles x_i + (2^-2n, 2^-n - 2^-2n)^2 over the corners
// above.  Throws EmptyInterior when no tile fits or when the shrunk tile is
// degenerate (level 1).
ContinuumDomain square_tiling(const ContinuumDomain& domain, int level);

struct Triangle {
  std::array<Vec2, 3> v{};
  Vec2 centroid() const {
    return {(v[0].x + v[1].x + v[2].x) / 3.0, (v[0].y + v[1].y + v[2].y) / 3.0};
  }
};

// Equilateral triangles of side 1/K from the rotated triangular grid that lie
// entirely inside the domain.  Triangles at Euclidean distance >= delta from
// the complement come first; shrunk triangles have side (1-delta)/K and share
// their parent's centroid.
struct TriangularPartition {
  int mesh = 1;             // K: triangles have side 1/K
  double delta = 0.0;       // shrink fraction and interior-distance cutoff
  double orientation = 0.0; // grid rotation angle in radians

  std::vector<Triangle> triangles;
  std::vector<Triangle> shrunk;
  std::vector<Vec2> centers;
  std::vector<double> boundary_distance;  // dist(triangle, D^c), per triangle

  std::size_t interior_count = 0;  // leading triangles with distance >= delta
  std::size_t total_count = 0;
};

// Throws NoTriangles when no grid triangle fits inside the domain.
TriangularPartition triangulate(const ContinuumDomain& domain, int mesh,
                                double delta, double orientation);

}  // namespace dgff
