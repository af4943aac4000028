#pragma once

#include <cmath>

namespace dgff {

// Coupling constants of the planar lattice free field in the normalization
// where the single-step variance of the walk fixes g = 2/pi.  The constant
// alpha = 2/sqrt(g) = sqrt(2*pi) governs the exponential intensity of the
// extremal process.  c_star is a convention: the true multiplicative constant
// in front of the conformal-radius density is unknown, so all statistics that
// touch it are ratios.
struct Constants {
  double g = 2.0 / M_PI;
  double alpha = std::sqrt(2.0 * M_PI);
  double c_star_convention = 1.0;
};

inline Constants constants() { return Constants{}; }

}  // namespace dgff
