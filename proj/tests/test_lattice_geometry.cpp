#include <algorithm>
#include <cmath>
#include <vector>

#include "dgff/geometry.hpp"
#include "dgff/lattice.hpp"
#include "doctest.h"

using namespace dgff;

TEST_SUITE_BEGIN("lattice_geometry");

TEST_CASE("continuum membership and distances") {
  const ContinuumDomain sq = unit_square();
  CHECK(sq.contains({0.5, 0.5}));
  CHECK_FALSE(sq.contains({0.0, 0.5}));   // boundary is not inside (open set)
  CHECK_FALSE(sq.contains({1.2, 0.5}));
  CHECK(sq.dist_to_complement({0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(sq.dist_to_complement({0.25, 0.5}) == doctest::Approx(0.25));
  CHECK(sq.dist_to_complement({-0.1, 0.5}) == 0.0);

  const ContinuumDomain d = disc({1.0, -2.0}, 0.5);
  CHECK(d.contains({1.0, -2.0}));
  CHECK(d.signed_dist({1.0, -2.0}) == doctest::Approx(0.5));
  CHECK(d.signed_dist({1.0, -1.0}) == doctest::Approx(-0.5));

  const Rect bb = d.bounding_box();
  CHECK(bb.lo.x == doctest::Approx(0.5));
  CHECK(bb.hi.y == doctest::Approx(-1.5));
  CHECK(d.lebesgue_estimate() == doctest::Approx(M_PI * 0.25).epsilon(0.01));
}

TEST_CASE("degenerate rectangle holes model slits") {
  // Vertical slit x = 0.5, y in [0.25, 0.75] removed from the unit square.
  const ContinuumDomain slit({Rect{{0, 0}, {1, 1}}},
                             {Rect{{0.5, 0.25}, {0.5, 0.75}}});
  CHECK_FALSE(slit.contains({0.5, 0.5}));   // on the slit
  CHECK(slit.contains({0.5, 0.1}));         // below the slit
  CHECK(slit.contains({0.45, 0.5}));        // beside the slit
  CHECK(slit.dist_to_complement({0.45, 0.5}) == doctest::Approx(0.05));
}

TEST_CASE("exact ball predicate decides ties deterministically") {
  const ContinuumDomain sq = unit_square();
  // Center (1/2, 1/2): the l-infinity distance to the complement is 1/2.
  CHECK(sq.linf_ball_inside(1, 1, 2, 1, 4, true));    // closed ball r=1/4
  CHECK_FALSE(sq.linf_ball_inside(1, 1, 2, 1, 2, true));  // tie, closed ball
  CHECK(sq.linf_ball_inside(1, 1, 2, 1, 2, false));       // tie, open ball
}

TEST_CASE("lattice rectangle layout and boundaries") {
  const LatticeDomain r = lattice_rectangle(0, 3, 0, 3, 4);
  CHECK(r.size() == 16);
  CHECK(r.scale() == 4);
  // Row-major: sorted by y then x.
  CHECK(r.vertices().front() == LatticePoint{0, 0});
  CHECK(r.vertices()[1] == LatticePoint{1, 0});
  CHECK(r.vertices().back() == LatticePoint{3, 3});
  CHECK(r.inner_boundary().size() == 12);  // perimeter of a 4x4 block
  CHECK(r.outer_boundary().size() == 16);  // 4 per side, no diagonal corners
  CHECK(r.is_vertex(2, 2));
  CHECK_FALSE(r.is_vertex(4, 0));
  CHECK(r.require_index({1, 0}) == 1);
  CHECK_FALSE(r.vertex_index({-1, 0}).has_value());
  CHECK_THROWS_AS((void)r.require_index({9, 9}), VertexOutsideDomain);
  const Vec2 e = r.embed({2, 3});
  CHECK(e.x == doctest::Approx(0.5));
  CHECK(e.y == doctest::Approx(0.75));
}

TEST_CASE("from_points sorts and deduplicates") {
  const LatticeDomain d = LatticeDomain::from_points(
      {{2, 1}, {0, 0}, {1, 0}, {2, 1}, {0, 1}}, 4);
  CHECK(d.size() == 4);
  CHECK(d.vertices()[0] == LatticePoint{0, 0});
  CHECK(d.vertices()[1] == LatticePoint{1, 0});
  CHECK(d.vertices()[2] == LatticePoint{0, 1});
  CHECK(d.vertices()[3] == LatticePoint{2, 1});
}

TEST_CASE("discretization keeps the deep interior only") {
  const LatticeDomain d = discretize(unit_square(), 16);
  // x/16 must be farther than 1/16 from the complement: x, y in [2, 14].
  CHECK(d.size() == 13 * 13);
  LatticeBounds b = d.bounds();
  CHECK(b.xmin == 2);
  CHECK(b.xmax == 14);
  CHECK(b.ymin == 2);
  CHECK(b.ymax == 14);
  CHECK_THROWS_AS((void)discretize(unit_square(), 2), EmptyDiscretization);
}

TEST_CASE("dilated squares discretize to the same index set") {
  // The side-K square at scale N and the unit square at scale N*K describe
  // the same set of integer vertices, exactly.
  for (const int k : {2, 3, 5}) {
    const int n = 16;
    const LatticeDomain big = discretize(square(static_cast<double>(k)), n);
    const LatticeDomain fine = discretize(unit_square(), n * k);
    REQUIRE(big.size() == fine.size());
    for (std::size_t i = 0; i < big.size(); ++i)
      CHECK(big.vertices()[i] == fine.vertices()[i]);
  }
}

TEST_CASE("scaled and translated domains move membership accordingly") {
  const ContinuumDomain d = scaled(unit_square(), 2.0);
  CHECK(d.contains({1.5, 1.5}));
  CHECK_FALSE(d.contains({2.5, 0.5}));
  const ContinuumDomain t = translated(unit_disc(), {3.0, 0.0});
  CHECK(t.contains({3.0, 0.0}));
  CHECK_FALSE(t.contains({0.0, 0.0}));
  // Scaling preserves holes.
  const ContinuumDomain slit({Rect{{0, 0}, {1, 1}}},
                             {Rect{{0.5, 0.25}, {0.5, 0.75}}});
  const ContinuumDomain slit2 = scaled(slit, 2.0);
  CHECK_FALSE(slit2.contains({1.0, 1.0}));
  CHECK(slit2.contains({1.0, 0.25}));
}

TEST_SUITE_END();
