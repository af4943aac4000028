#include <cmath>
#include <complex>
#include <vector>

#include "dgff/harmonic_continuum.hpp"
#include "dgff/geometry.hpp"
#include "doctest.h"

using namespace dgff;

TEST_SUITE_BEGIN("continuum");

namespace {
constexpr double kG = 2.0 / M_PI;
// Conformal radius of the unit square at its center: 4*sqrt(pi)/Gamma(1/4)^2.
constexpr double kSquareCenterRadius = 0.5393526011883794;
}  // namespace

TEST_CASE("disc harmonic measure matches the Poisson kernel") {
  const HarmonicMeasureEngine engine(unit_disc(),
                                     HarmonicMeasureMethod::disc_analytic);
  CHECK(engine.resolved_method() == HarmonicMeasureMethod::disc_analytic);

  const BoundarySample from_center = engine.measure({0.0, 0.0});
  double sum = 0.0, max_w = 0.0, min_w = 1.0;
  for (std::size_t k = 0; k < from_center.points.size(); ++k) {
    CHECK(from_center.points[k].norm() == doctest::Approx(1.0));
    sum += from_center.weights[k];
    max_w = std::max(max_w, from_center.weights[k]);
    min_w = std::min(min_w, from_center.weights[k]);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_w == doctest::Approx(min_w).epsilon(1e-10));  // rotation-invariant

  // log-integral identity on the disc: Int Pi(x,dz) log|z-y| = log|1 - x*conj(y)|.
  const std::complex<double> x(0.3, 0.1), y(-0.4, 0.25);
  const double expected = std::log(std::abs(1.0 - x * std::conj(y)));
  CHECK(engine.log_integral({x.real(), x.imag()}, {y.real(), y.imag()}) ==
        doctest::Approx(expected).epsilon(1e-10));
  CHECK_THROWS_AS((void)engine.measure({1.5, 0.0}), PointOutsideDomain);
}

TEST_CASE("continuum Green function of the disc is exact") {
  const std::complex<double> x(0.3, 0.1), y(-0.2, 0.4);
  const double exact =
      kG * std::log(std::abs(1.0 - x * std::conj(y)) / std::abs(x - y));
  const double got = continuum_green(unit_disc(), {x.real(), x.imag()},
                                     {y.real(), y.imag()});
  CHECK(got == doctest::Approx(exact).epsilon(1e-10));
  // Symmetry.
  const double swapped = continuum_green(unit_disc(), {y.real(), y.imag()},
                                         {x.real(), x.imag()});
  CHECK(got == doctest::Approx(swapped).epsilon(1e-10));
}

TEST_CASE("conformal radius closed forms") {
  const HarmonicMeasureEngine disc_engine(disc({0.0, 0.0}, 0.75),
                                          HarmonicMeasureMethod::disc_analytic);
  // rad(x) = r - |x - c|^2 / r for a disc.
  CHECK(conformal_radius(disc_engine, {0.0, 0.0}) == doctest::Approx(0.75));
  CHECK(conformal_radius(disc_engine, {0.3, 0.0}) ==
        doctest::Approx(0.75 - 0.09 / 0.75).epsilon(1e-10));
  // Unit square at the center, via the lattice quadrature.
  CHECK(conformal_radius(unit_square(), {0.5, 0.5},
                         HarmonicMeasureMethod::automatic, 256) ==
        doctest::Approx(kSquareCenterRadius).epsilon(0.01));
}

TEST_CASE("binding covariance of the concentric disc pair") {
  const HarmonicMeasureEngine outer(unit_disc(),
                                    HarmonicMeasureMethod::disc_analytic);
  const HarmonicMeasureEngine inner(disc({0.0, 0.0}, 0.5),
                                    HarmonicMeasureMethod::disc_analytic);
  // C(0,0) = g (log rad_outer(0) - log rad_inner(0)) = g log 2.
  CHECK(binding_covariance(outer, inner, {0.0, 0.0}, {0.0, 0.0}) ==
        doctest::Approx(kG * std::log(2.0)).epsilon(1e-10));
  // Symmetric in its arguments.
  const Vec2 a{0.1, -0.05}, b{-0.2, 0.1};
  CHECK(binding_covariance(outer, inner, a, b) ==
        doctest::Approx(binding_covariance(outer, inner, b, a)).epsilon(1e-10));
}

TEST_CASE("location density is the squared conformal radius") {
  const DensityField psi = psi_density(unit_disc(), Rect{{-1, -1}, {1, 1}}, 10,
                                       10, HarmonicMeasureMethod::disc_analytic);
  CHECK(psi.nx == 10);
  CHECK(psi.ny == 10);
  CHECK(psi.cell_area == doctest::Approx(0.04));
  REQUIRE(psi.centers.size() == 100);
  REQUIRE(psi.values.size() == 100);
  // Row-major centers.
  CHECK(psi.centers[0].x == doctest::Approx(-0.9));
  CHECK(psi.centers[0].y == doctest::Approx(-0.9));
  CHECK(psi.centers[1].x == doctest::Approx(-0.7));
  // Corner cells sit outside the disc; central cells carry (1-|x|^2)^2.
  CHECK(psi.values[0] == 0.0);
  const std::size_t c = 4 * 10 + 4;  // center (-0.1, -0.1)
  const double r2 = 0.02;
  CHECK(psi.values[c] == doctest::Approx((1.0 - r2) * (1.0 - r2)).epsilon(1e-8));
}

TEST_CASE("Mobius maps are disc automorphisms") {
  CHECK_THROWS_AS(mobius({1.0, 0.0}, 0.3), ParameterOutOfDisc);
  const MobiusMap f = mobius({0.3, 0.1}, 0.8);
  // Circle to circle.
  for (const double t : {0.0, 1.0, 2.5, 4.0}) {
    const std::complex<double> z = std::polar(1.0, t);
    CHECK(std::abs(f(z)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Derivative against a central difference.
  const std::complex<double> z0(0.2, -0.3), h(1e-6, 0.0);
  const std::complex<double> fd = (f(z0 + h) - f(z0 - h)) / (2.0 * h);
  CHECK(std::abs(fd - f.derivative(z0)) < 1e-8);
  CHECK(f.derivative_abs({z0.real(), z0.imag()}) ==
        doctest::Approx(std::abs(f.derivative(z0))).epsilon(1e-12));
  // Vec2 interface agrees with the complex one.
  const Vec2 m = f.map({z0.real(), z0.imag()});
  const std::complex<double> fc = f(z0);
  CHECK(m.x == doctest::Approx(fc.real()));
  CHECK(m.y == doctest::Approx(fc.imag()));

  // The image of an interior circle is the circumcircle of its image points.
  const Disc d{{0.2, 0.0}, 0.4};
  const Disc img = mobius_image_disc(f, d);
  for (const double t : {0.3, 2.0, 3.9, 5.5}) {
    const std::complex<double> z =
        std::complex<double>(d.center.x, d.center.y) + std::polar(d.radius, t);
    const std::complex<double> w = f(z);
    CHECK(std::hypot(w.real() - img.center.x, w.imag() - img.center.y) ==
          doctest::Approx(img.radius).epsilon(1e-10));
  }
}

TEST_SUITE_END();
