#include <cmath>
#include <vector>

#include "dgff/geometry.hpp"
#include "dgff/heat_kernel.hpp"
#include "doctest.h"

using namespace dgff;

TEST_SUITE_BEGIN("heat_kernel");

namespace {
constexpr double kG = 2.0 / M_PI;
}

TEST_CASE("rectangle series reproduces the eigen-expansion values") {
  // Reference values from a 30-digit evaluation of
  //   G_t(x,y) = sum 4/(pi^2 (m^2+n^2)) exp(-e^{-2t} pi^2 (m^2+n^2)/4)
  //              * 2 sin(m pi x1) sin(n pi x2) * 2 sin(m pi y1) sin(n pi y2)
  // on the unit square.
  const std::vector<Vec2> grid = {{0.5, 0.5}, {0.25, 0.5}, {0.3, 0.4}, {0.6, 0.5}};
  TruncatedGreenOptions opts;
  opts.method = TruncatedGreenMethod::rectangle_series;

  const TruncatedKernel k2 = truncated_green(unit_square(), grid, 2.0, opts);
  CHECK(k2.t == 2.0);
  REQUIRE(k2.grid.size() == 4);
  CHECK(k2.matrix(0, 0) == doctest::Approx(1.0639330246647683).epsilon(1e-9));
  CHECK(k2.matrix(0, 1) == doctest::Approx(0.48408584623355796).epsilon(1e-9));
  CHECK(k2.matrix(2, 3) == doctest::Approx(0.38278503557471762).epsilon(1e-9));
  CHECK((k2.matrix - k2.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  const TruncatedKernel k6 = truncated_green(unit_square(), grid, 6.0, opts);
  CHECK(k6.matrix(0, 0) == doctest::Approx(3.6104121141350937).epsilon(1e-9));

  // The diagonal grows linearly in t with slope g once the heat scale clears
  // the boundary distance.
  CHECK((k6.matrix(0, 0) - k2.matrix(0, 0)) / 4.0 ==
        doctest::Approx(kG).epsilon(1e-5));

  // Monotone in t, entrywise (the truncation window only grows).
  CHECK(((k6.matrix - k2.matrix).array() >= -1e-12).all());

  // The automatic method resolves to the same series on a rectangle.
  const TruncatedKernel ka = truncated_green(unit_square(), grid, 2.0);
  CHECK((ka.matrix - k2.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("disc series reproduces the Bessel expansion values") {
  // Reference values from a 30-digit Bessel-series evaluation on the unit
  // disc.
  const std::vector<Vec2> grid = {{0.0, 0.0}, {0.3, 0.0}, {-0.2, 0.1}};
  TruncatedGreenOptions opts;
  opts.method = TruncatedGreenMethod::disc_series;

  const TruncatedKernel k2 = truncated_green(unit_disc(), grid, 2.0, opts);
  CHECK(k2.matrix(0, 0) == doctest::Approx(1.4569729973334707).epsilon(1e-8));
  CHECK(k2.matrix(1, 1) == doctest::Approx(1.3969329540366571).epsilon(1e-8));
  CHECK(k2.matrix(1, 2) == doctest::Approx(0.46613684735086947).epsilon(1e-8));
  CHECK((k2.matrix - k2.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  const TruncatedKernel k4 = truncated_green(unit_disc(), grid, 4.0, opts);
  CHECK(k4.matrix(0, 0) == doctest::Approx(2.7302125420686334).epsilon(1e-8));
}

TEST_CASE("lattice semigroup tracks the exact series") {
  const std::vector<Vec2> grid = {{0.5, 0.5}, {0.25, 0.5}, {0.3, 0.4}};
  TruncatedGreenOptions series;
  series.method = TruncatedGreenMethod::rectangle_series;
  TruncatedGreenOptions lattice;
  lattice.method = TruncatedGreenMethod::lattice_semigroup;
  lattice.lattice_scale = 128;
  const TruncatedKernel a = truncated_green(unit_square(), grid, 2.0, series);
  const TruncatedKernel b = truncated_green(unit_square(), grid, 2.0, lattice);
  CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("invalid requests are rejected") {
  const std::vector<Vec2> inside = {{0.5, 0.5}};
  CHECK_THROWS_AS((void)truncated_green(unit_disc(), inside, 2.0,
                                        TruncatedGreenOptions{
                                            TruncatedGreenMethod::rectangle_series}),
                  UnsupportedDomainShape);
  const std::vector<Vec2> outside = {{1.5, 0.5}};
  CHECK_THROWS_AS((void)truncated_green(unit_square(), outside, 2.0),
                  PointOutsideDomain);
}

TEST_CASE("Bessel utilities match tabled values") {
  const std::vector<double> z0 = bessel_zeros(0, 3);
  REQUIRE(z0.size() == 3);
  CHECK(z0[0] == doctest::Approx(2.404825557695773).epsilon(1e-12));
  CHECK(z0[1] == doctest::Approx(5.520078110286311).epsilon(1e-12));
  const std::vector<double> z1 = bessel_zeros(1, 1);
  CHECK(z1[0] == doctest::Approx(3.8317059702075125).epsilon(1e-12));
  CHECK(std::abs(bessel_j(0, z0[0])) < 1e-10);
  CHECK(bessel_j(1, 1.0) == doctest::Approx(0.44005058574493355).epsilon(1e-12));
  CHECK(bessel_j(0, 0.0) == doctest::Approx(1.0));
}

TEST_SUITE_END();
