#pragma once

// Lattice discretization of continuum domains.  A LatticeDomain is a finite
// subset of Z^2 together with an index map; the scale N records that vertex
// (x, y) represents the continuum point (x/N, y/N).

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dgff/errors.hpp"
#include "dgff/geometry.hpp"

namespace dgff {

struct LatticePoint {
  int x = 0;
  int y = 0;
  bool operator==(const LatticePoint&) const = default;
};

// Nearest-neighbour offsets of the square lattice.
inline constexpr std::array<LatticePoint, 4> kNeighborOffsets{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

struct LatticeBounds {
  int xmin = 0, xmax = 0, ymin = 0, ymax = 0;
};

class LatticeDomain {
 public:
  LatticeDomain() = default;

  // Builds a domain from an explicit vertex set (sorted and deduplicated).
  static LatticeDomain from_points(std::vector<LatticePoint> points, int scale);

  int scale() const { return scale_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }

  // Vertices in row-major order: sorted by y, then x.
  const std::vector<LatticePoint>& vertices() const { return vertices_; }

  bool is_vertex(int x, int y) const { return index_.count(key(x, y)) != 0; }
  std::optional<std::size_t> vertex_index(LatticePoint p) const;
  // Index of p; throws VertexOutsideDomain when p is not a vertex.
  std::size_t require_index(LatticePoint p) const;

  // Vertices with at least one nearest neighbour outside the domain.
  const std::vector<LatticePoint>& inner_boundary() const { return inner_boundary_; }
  // Points of Z^2 \ domain adjacent to the domain.
  const std::vector<LatticePoint>& outer_boundary() const { return outer_boundary_; }

  LatticeBounds bounds() const;

  // Continuum position x/N of a vertex.
  Vec2 embed(LatticePoint p) const {
    const double n = static_cast<double>(scale_);
    return {p.x / n, p.y / n};
  }

 private:
  static std::uint64_t key(int x, int y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y)) << 32) |
           static_cast<std::uint32_t>(x);
  }
  void build_index_and_boundary();

  int scale_ = 1;
  std::vector<LatticePoint> vertices_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<LatticePoint> inner_boundary_;
  std::vector<LatticePoint> outer_boundary_;
};

// The scale-N interior discretization: all x in Z^2 whose l-infinity distance
// from x/N to the complement of the domain exceeds 1/N.  Throws
// EmptyDiscretization when no lattice point qualifies.
LatticeDomain discretize(const ContinuumDomain& domain, int scale);

// Full integer rectangle [x0, x1] x [y0, y1] as a lattice domain.
LatticeDomain lattice_rectangle(int x0, int x1, int y0, int y1, int scale);

}  // namespace dgff
