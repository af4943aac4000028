#pragma once

// Centered extremal statistics of a lattice field: the centering sequence
// m_N, r-local maxima with centered heights, level sets, and the argmax.

#include <cstdint>
#include <optional>
#include <vector>

#include "dgff/errors.hpp"
#include "dgff/fields.hpp"
#include "dgff/lattice.hpp"

namespace dgff {

// m_N = 2 sqrt(g) ln N - (3/4) sqrt(g) ln ln N with g = 2/pi.  At N = 2 the
// correction term has ln ln N < 0; the raw value is still returned, with the
// warning flag set.
struct CenteringValue {
  double value = 0.0;
  bool loglog_negative = false;
};

CenteringValue centering(int scale);  // DomainError when scale < 2
// Same, but refuses the degenerate N = 2 case outright.
double centering_strict(int scale);   // DomainError when ln ln N <= 0

// Default local-maximum radius schedule r_N = floor(N^{1/4}).
int default_extraction_radius(int scale);

enum class BallNorm { euclidean, linf };

// Lattice offsets z with |z| <= radius in the chosen norm, origin included,
// sorted by increasing Euclidean length.
std::vector<LatticePoint> ball_offsets(double radius,
                                       BallNorm norm = BallNorm::euclidean);

struct ExtremalAtom {
  LatticePoint vertex;
  Vec2 position;           // vertex / N
  double centered_height;  // h - m_N
};

struct ExtremalPointSet {
  std::vector<ExtremalAtom> atoms;  // row-major vertex order
  int scale = 0;                    // N
  double radius = 0.0;              // r
  double centering_value = 0.0;     // m_N
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

struct LocalMaxima {
  ExtremalPointSet points;
  LatticePoint argmax{};            // first row-major vertex attaining the max
  double max_value = 0.0;           // uncentered field maximum
  std::optional<double> threshold;  // t of the level set, if requested
  std::vector<LatticePoint> level_set;  // {x : h(x) >= m_N - t}, row-major
};

// Vertices whose height attains the maximum of the field over the ball of
// the given radius around them (intersected with the domain).  All members
// of an exact tie are reported; ties have probability zero for a Gaussian
// field.  Requires radius >= 1 and a lattice field.
LocalMaxima extract_local_maxima(const FieldSample& sample, double radius,
                                 std::optional<double> threshold = std::nullopt,
                                 BallNorm norm = BallNorm::euclidean);

}  // namespace dgff
