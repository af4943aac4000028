#pragma once

// Potential kernels of the simple random walks on the square and triangular
// lattices: the unique function with a(0) = 0, a(x) >= 0, whose mean over the
// neighbours of x equals a(x) + 1{x=0}.  Asymptotically a(x) ~ g log|x| + c0
// on the square lattice and ~ tau log|x| + const on the triangular one.

#include "dgff/geometry.hpp"

namespace dgff {

// Square lattice.  Exact rational recursion for max(|x|,|y|) <= 64, a reduced
// one-dimensional integral up to |x| <= 1e6, and the fitted log asymptotic
// beyond.
double potential_kernel(int x, int y);

// The constant c0 in a(x) = g log|x| + c0 + O(|x|^-2), fitted once from
// integral values at radii in [1e3, 1e4].
double potential_kernel_c0();

// Triangular lattice in integer coordinates w.r.t. the basis u = (1,0),
// v = (1/2, sqrt(3)/2); each vertex has the six neighbours +-u, +-v, +-(v-u).
double triangular_potential_kernel(int m, int n);

// Euclidean embedding of the triangular-lattice vertex m u + n v.
Vec2 triangular_embed(int m, int n);

}  // namespace dgff
