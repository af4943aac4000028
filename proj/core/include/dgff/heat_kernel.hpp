#pragma once

// Truncated Green kernels G_t of the quarter-Laplacian killed at the domain
// boundary:
//
//   G_t(x, y) = int_{e^{-2t}}^infty  p_s(x, y) ds,
//
// where p_s is the transition kernel of exp(s Delta / 4).  As t -> infty
// this increases to the Green kernel of (-Delta/4)^{-1}, i.e. the continuum
// Green function with the g = 2/pi short-distance normalization.
//
// Rectangles and discs use exact Dirichlet eigen-expansions with certified
// tail bounds.  Other shapes (domains with holes or slits) fall back to a
// lattice semigroup approximation (I - P)^{-1} exp(-tau (I - P)) evaluated
// by a Chebyshev expansion of the matrix exponential.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "dgff/errors.hpp"
#include "dgff/geometry.hpp"

namespace dgff {

struct TruncatedKernel {
  std::vector<Vec2> grid;
  double t = 0.0;
  Eigen::MatrixXd matrix;
};

enum class TruncatedGreenMethod {
  automatic,         // exact series when the shape admits one, else lattice
  rectangle_series,  // single axis-aligned rectangle, no holes
  disc_series,       // single disc, no holes
  lattice_semigroup, // any discretizable shape
};

struct TruncatedGreenOptions {
  TruncatedGreenMethod method = TruncatedGreenMethod::automatic;
  // Certified bound on the dropped series tail (series methods).
  double tail_tolerance = 1e-8;
  // Lattice mesh for the semigroup method.
  int lattice_scale = 256;
  // SeriesNotConverged when a series needs more terms than this.
  std::size_t max_terms = 80'000'000;
};

TruncatedKernel truncated_green(const ContinuumDomain& domain,
                                const std::vector<Vec2>& grid, double t,
                                const TruncatedGreenOptions& options = {});

// First `count` positive zeros of the Bessel function J_order.
std::vector<double> bessel_zeros(int order, int count);

// J_order(x) for order >= 0 and x >= 0, stable at large order.
double bessel_j(int order, double x);

}  // namespace dgff
