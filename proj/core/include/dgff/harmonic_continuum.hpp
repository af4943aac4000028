#pragma once

// Continuum potential theory: harmonic measure (exit distribution of Brownian
// motion), the continuum Green function, the two-domain binding covariance,
// the conformal radius, and the location density psi = rad^2 (with the
// overall constant normalized to 1).

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <vector>

#include "dgff/errors.hpp"
#include "dgff/geometry.hpp"

namespace dgff {

class DirichletSolver;  // green.hpp
class LatticeDomain;

// Discretized measure on the domain boundary: atoms and weights, sum 1.
struct BoundarySample {
  std::vector<Vec2> points;
  std::vector<double> weights;
};

enum class HarmonicMeasureMethod {
  automatic,      // disc_analytic for a plain disc, lattice_limit otherwise
  disc_analytic,  // Poisson kernel on the circle, spectral quadrature
  lattice_limit,  // exit distribution of the SRW at lattice scale N
};

// Caches the (possibly expensive) machinery for one domain so many source
// points can be evaluated with one factorization.
class HarmonicMeasureEngine {
 public:
  HarmonicMeasureEngine(ContinuumDomain domain,
                        HarmonicMeasureMethod method = HarmonicMeasureMethod::automatic,
                        int lattice_scale = 512, int circle_nodes = 512);
  ~HarmonicMeasureEngine();
  HarmonicMeasureEngine(HarmonicMeasureEngine&&) noexcept;

  const ContinuumDomain& domain() const { return domain_; }
  HarmonicMeasureMethod resolved_method() const { return method_; }
  int lattice_scale() const { return lattice_scale_; }

  // Exit distribution from x.  Throws PointOutsideDomain.
  BoundarySample measure(const Vec2& x) const;

  // Integral of log|z - y| under the exit distribution from x.
  double log_integral(const Vec2& x, const Vec2& y) const;

 private:
  ContinuumDomain domain_;
  HarmonicMeasureMethod method_;
  int lattice_scale_;
  int circle_nodes_;
  Disc disc_{};  // disc_analytic only
  std::unique_ptr<DirichletSolver> solver_;  // lattice_limit only
};

BoundarySample continuum_harmonic_measure(
    const ContinuumDomain& domain, const Vec2& x,
    HarmonicMeasureMethod method = HarmonicMeasureMethod::automatic,
    int lattice_scale = 512);

// Checks the N vs 2N lattice consistency of the quadrature on the functional
// z -> log|z - probe| and throws QuadratureUnconverged beyond the tolerance.
void check_harmonic_quadrature(const ContinuumDomain& domain, const Vec2& x,
                               const Vec2& probe, int lattice_scale = 512,
                               double tolerance = 1e-2);

// G^D(x,y) = -g log|y-x| + g Int Pi^D(x,dz) log|z-y|; requires x != y.
double continuum_green(const ContinuumDomain& domain, const Vec2& x, const Vec2& y,
                       HarmonicMeasureMethod method = HarmonicMeasureMethod::automatic,
                       int lattice_scale = 512);

// C^{D,Dt}(x,y) = g Int Pi^D(x,dz) log|z-y| - g Int Pi^Dt(x,dz) log|z-y| for
// x, y in Dt; both integrals are regular, including at x = y.
double binding_covariance(const HarmonicMeasureEngine& outer,
                          const HarmonicMeasureEngine& inner, const Vec2& x,
                          const Vec2& y);
double binding_covariance(const ContinuumDomain& outer, const ContinuumDomain& inner,
                          const Vec2& x, const Vec2& y,
                          HarmonicMeasureMethod method = HarmonicMeasureMethod::automatic,
                          int lattice_scale = 512);

// Matrix of the binding covariance over a point list (factorizations shared).
Eigen::MatrixXd binding_cov_matrix(const ContinuumDomain& outer,
                                   const ContinuumDomain& inner,
                                   const std::vector<Vec2>& points,
                                   HarmonicMeasureMethod method =
                                       HarmonicMeasureMethod::automatic,
                                   int lattice_scale = 512);

// rad_D(x) = exp Int Pi^D(x,dz) log|z-x|.
double conformal_radius(const HarmonicMeasureEngine& engine, const Vec2& x);
double conformal_radius(const ContinuumDomain& domain, const Vec2& x,
                        HarmonicMeasureMethod method = HarmonicMeasureMethod::automatic,
                        int lattice_scale = 512);

// psi^D(x) = rad_D(x)^2 inside D and 0 outside (normalizing constant := 1).
double psi_density_at(const HarmonicMeasureEngine& engine, const Vec2& x);

struct DensityField {
  std::vector<Vec2> centers;   // row-major over the grid
  std::vector<double> values;  // psi at the centers, 0 outside the domain
  double cell_area = 0.0;
  int nx = 0, ny = 0;
  Rect box{};
};

DensityField psi_density(const ContinuumDomain& domain, const Rect& box, int nx,
                         int ny,
                         HarmonicMeasureMethod method = HarmonicMeasureMethod::automatic,
                         int lattice_scale = 512);

// Disc automorphism f(z) = e^{i theta} (z - a) / (1 - conj(a) z).
class MobiusMap {
 public:
  MobiusMap(std::complex<double> a, double theta);
  std::complex<double> operator()(std::complex<double> z) const;
  std::complex<double> derivative(std::complex<double> z) const;
  Vec2 map(const Vec2& p) const;
  double derivative_abs(const Vec2& p) const;

 private:
  std::complex<double> a_;
  std::complex<double> phase_;
};

MobiusMap mobius(const Vec2& a, double theta);  // ParameterOutOfDisc if |a| >= 1

// Image of a circle under a Mobius map (circumcircle of three image points).
Disc mobius_image_disc(const MobiusMap& f, const Disc& d);

}  // namespace dgff
