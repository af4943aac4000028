#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "dgff/green.hpp"
#include "dgff/lattice.hpp"
#include "dgff/potential_kernel.hpp"
#include "doctest.h"

using namespace dgff;

TEST_SUITE_BEGIN("green_potential");

namespace {
constexpr double kG = 2.0 / M_PI;             // asymptotic slope g
constexpr double kC0 = 1.0293737056545709;    // (2*gamma + ln 8) / pi
}  // namespace

TEST_CASE("two-site Green matrix is exact") {
  const LatticeDomain domino = LatticeDomain::from_points({{0, 0}, {1, 0}}, 2);
  const Eigen::MatrixXd G = green_matrix(domino).matrix();
  Eigen::MatrixXd expected(2, 2);
  expected << 16.0, 4.0, 4.0, 16.0;
  expected /= 15.0;
  CHECK((G - expected).cwiseAbs().maxCoeff() < 1e-12);

  const LatticeDomain site = LatticeDomain::from_points({{5, 5}}, 2);
  CHECK(green_matrix(site).matrix()(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("direct and boundary-representation Green agree") {
  // L-shaped domain: 6x6 block minus a 3x3 corner bite.
  std::vector<LatticePoint> pts;
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 6; ++x)
      if (!(x >= 3 && y >= 3)) pts.push_back({x, y});
  const LatticeDomain dom = LatticeDomain::from_points(pts, 8);
  const Eigen::MatrixXd direct = green_matrix(dom, GreenMode::direct_solve).matrix();
  const Eigen::MatrixXd walk =
      green_matrix(dom, GreenMode::boundary_representation).matrix();
  CHECK((direct - walk).cwiseAbs().maxCoeff() < 1e-10);
  // Symmetry and positive definiteness of the direct solve.
  CHECK((direct - direct.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(direct);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("negative control: corrupted boundary kernel is detected") {
  // Rebuild the boundary representation by hand with the boundary argument
  // shifted one site; the cross-check against the direct solve must see it.
  const LatticeDomain dom = lattice_rectangle(0, 4, 0, 4, 8);
  const Eigen::MatrixXd direct = green_matrix(dom).matrix();
  const std::size_t n = dom.size();
  const DirichletSolver solver(dom);

  Eigen::MatrixXd good(n, n), bad(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const LatticePoint x = dom.vertices()[i];
    const HarmonicMeasureRow row = harmonic_measure_discrete(solver, x);
    for (std::size_t j = 0; j < n; ++j) {
      const LatticePoint y = dom.vertices()[j];
      double sg = 0.0, sb = 0.0;
      for (std::size_t k = 0; k < row.boundary.size(); ++k) {
        const LatticePoint z = row.boundary[k];
        sg += row.probabilities[k] * potential_kernel(y.x - z.x, y.y - z.y);
        sb += row.probabilities[k] * potential_kernel(y.x - z.x + 1, y.y - z.y);
      }
      good(i, j) = -potential_kernel(x.x - y.x, x.y - y.y) + sg;
      bad(i, j) = -potential_kernel(x.x - y.x, x.y - y.y) + sb;
    }
  }
  CHECK((good - direct).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((bad - direct).cwiseAbs().maxCoeff() > 1e-8);
}

TEST_CASE("harmonic measure of the two-site domain is exact") {
  const LatticeDomain domino = LatticeDomain::from_points({{0, 0}, {1, 0}}, 2);
  const HarmonicMeasureRow row = harmonic_measure_discrete(domino, {0, 0});
  REQUIRE(row.boundary.size() == 6);
  double sum = 0.0;
  for (std::size_t k = 0; k < row.boundary.size(); ++k) {
    const LatticePoint z = row.boundary[k];
    // Neighbours of (0,0) leave with probability 4/15 each, neighbours of
    // (1,0) with 1/15.
    const bool near_source = std::abs(z.x) + std::abs(z.y) == 1;
    CHECK(row.probabilities[k] ==
          doctest::Approx(near_source ? 4.0 / 15.0 : 1.0 / 15.0));
    sum += row.probabilities[k];
  }
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("harmonic measure rows are probability vectors") {
  std::vector<LatticePoint> pts;
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 7; ++x)
      if (x != 3 || y > 4) pts.push_back({x, y});
  const LatticeDomain dom = LatticeDomain::from_points(pts, 8);
  const DirichletSolver solver(dom);
  for (const LatticePoint src : {LatticePoint{0, 0}, LatticePoint{5, 2}}) {
    const HarmonicMeasureRow row = harmonic_measure_discrete(solver, src);
    double sum = 0.0;
    for (const double p : row.probabilities) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("square potential kernel matches the classical exact values") {
  CHECK(potential_kernel(0, 0) == 0.0);
  CHECK(potential_kernel(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(potential_kernel(1, 1) == doctest::Approx(4.0 / M_PI).epsilon(1e-12));
  CHECK(potential_kernel(2, 0) ==
        doctest::Approx(4.0 - 8.0 / M_PI).epsilon(1e-12));
  // Full dihedral symmetry.
  CHECK(potential_kernel(3, 2) == doctest::Approx(potential_kernel(2, 3)));
  CHECK(potential_kernel(3, 2) == doctest::Approx(potential_kernel(-3, 2)));
  CHECK(potential_kernel(3, 2) == doctest::Approx(potential_kernel(2, -3)));
}

TEST_CASE("potential kernel solves the defining mean-value equation") {
  auto neighbour_mean = [](int x, int y) {
    return 0.25 * (potential_kernel(x + 1, y) + potential_kernel(x - 1, y) +
                   potential_kernel(x, y + 1) + potential_kernel(x, y - 1));
  };
  CHECK(neighbour_mean(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& [x, y] : std::vector<std::pair<int, int>>{
           {1, 0}, {5, 3}, {40, 17}, {63, 0}, {70, 30}, {200, 150}}) {
    CHECK(neighbour_mean(x, y) ==
          doctest::Approx(potential_kernel(x, y)).epsilon(1e-8));
  }
}

TEST_CASE("potential kernel asymptotics carry the exact constant") {
  CHECK(potential_kernel_c0() == doctest::Approx(kC0).epsilon(1e-5));
  for (const double r : {400.0, 1000.0, 4000.0}) {
    const int x = static_cast<int>(r);
    CHECK(potential_kernel(x, 0) ==
          doctest::Approx(kG * std::log(r) + kC0).epsilon(1e-6));
  }
  // Off-axis, |x| enters through the Euclidean norm.
  CHECK(potential_kernel(300, 400) ==
        doctest::Approx(kG * std::log(500.0) + kC0).epsilon(1e-6));
}

TEST_CASE("triangular potential kernel mean-value equation and symmetry") {
  auto mean6 = [](int m, int n) {
    double s = 0.0;
    s += triangular_potential_kernel(m + 1, n);
    s += triangular_potential_kernel(m - 1, n);
    s += triangular_potential_kernel(m, n + 1);
    s += triangular_potential_kernel(m, n - 1);
    s += triangular_potential_kernel(m + 1, n - 1);
    s += triangular_potential_kernel(m - 1, n + 1);
    return s / 6.0;
  };
  CHECK(triangular_potential_kernel(0, 0) == 0.0);
  CHECK(mean6(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  for (const auto& [m, n] :
       std::vector<std::pair<int, int>>{{1, 0}, {4, 2}, {10, -3}}) {
    CHECK(mean6(m, n) ==
          doctest::Approx(triangular_potential_kernel(m, n)).epsilon(1e-8));
  }
  CHECK(triangular_potential_kernel(2, 1) ==
        doctest::Approx(triangular_potential_kernel(1, 2)));
  CHECK(triangular_potential_kernel(2, 1) ==
        doctest::Approx(triangular_potential_kernel(-2, -1)));
  // The embedding is norm-compatible with the kernel's symmetry.
  const Vec2 a = triangular_embed(2, 1), b = triangular_embed(1, 2);
  CHECK(a.norm() == doctest::Approx(b.norm()));
}

TEST_SUITE_END();
