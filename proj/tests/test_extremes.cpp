#include <algorithm>
#include <cmath>
#include <vector>

#include "dgff/extremes.hpp"
#include "dgff/fields.hpp"
#include "dgff/lattice.hpp"
#include "doctest.h"

using namespace dgff;

TEST_SUITE_BEGIN("extremes");

TEST_CASE("centering sequence hits the closed form") {
  CHECK(centering(256).value == doctest::Approx(7.823783464326383).epsilon(1e-14));
  CHECK(centering(512).value == doctest::Approx(8.859403382535975).epsilon(1e-14));
  CHECK(centering(1024).value == doctest::Approx(9.9024571034304).epsilon(1e-14));
  CHECK(centering(65536).value ==
        doctest::Approx(16.257817828751833).epsilon(1e-14));
  CHECK_FALSE(centering(256).loglog_negative);

  // At N = 2 the ln ln N correction flips sign; the value is still defined
  // but flagged, and the strict variant refuses it.
  const CenteringValue tiny = centering(2);
  CHECK(tiny.loglog_negative);
  CHECK(tiny.value == doctest::Approx(1.3254291179657904).epsilon(1e-14));
  CHECK(centering_strict(512) == doctest::Approx(8.859403382535975));
  CHECK_THROWS_AS((void)centering_strict(2), DomainError);
  CHECK_THROWS_AS((void)centering(1), DomainError);
}

TEST_CASE("default extraction radius is the fourth-root floor") {
  CHECK(default_extraction_radius(256) == 4);
  CHECK(default_extraction_radius(512) == 4);
  CHECK(default_extraction_radius(1024) == 5);
  CHECK(default_extraction_radius(81) == 3);
  CHECK(default_extraction_radius(65536) == 16);
}

TEST_CASE("ball offsets enumerate the lattice ball") {
  const auto b1 = ball_offsets(1.0);
  CHECK(b1.size() == 5);
  CHECK(b1.front() == LatticePoint{0, 0});  // sorted by length, origin first
  CHECK(ball_offsets(2.0).size() == 13);
  CHECK(ball_offsets(2.5).size() == 21);
  CHECK(ball_offsets(1.0, BallNorm::linf).size() == 9);
  CHECK(ball_offsets(2.0, BallNorm::linf).size() == 25);
  CHECK_THROWS_AS((void)ball_offsets(-1.0), DomainError);
}

namespace {
// A 16x16 field with a strictly increasing micro-background (so the top
// corner is the only background local maximum) plus planted peaks.
FieldSample planted_field(const std::vector<std::pair<LatticePoint, double>>& peaks) {
  FieldSample s;
  s.lattice = lattice_rectangle(0, 15, 0, 15, 16);
  s.points.reserve(s.lattice.size());
  s.values.resize(static_cast<Eigen::Index>(s.lattice.size()));
  for (std::size_t i = 0; i < s.lattice.size(); ++i) {
    const LatticePoint p = s.lattice.vertices()[i];
    s.points.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
    s.values[static_cast<Eigen::Index>(i)] = 1e-9 * (p.x + 16.0 * p.y);
  }
  for (const auto& [p, v] : peaks)
    s.values[static_cast<Eigen::Index>(s.lattice.require_index(p))] = v;
  return s;
}
}  // namespace

TEST_CASE("local maxima extraction finds the planted peaks") {
  const FieldSample s = planted_field({{{3, 3}, 2.0}, {{12, 12}, 4.0}});
  const double m16 = centering(16).value;

  const LocalMaxima r4 = extract_local_maxima(s, 4.0);
  // Peaks are 9*sqrt(2) apart (> 4); the background corner (15,15) is
  // Euclidean distance sqrt(18) > 4 from the nearest peak, so it survives.
  REQUIRE(r4.points.atoms.size() == 3);
  CHECK(r4.points.atoms[0].vertex == LatticePoint{3, 3});
  CHECK(r4.points.atoms[1].vertex == LatticePoint{12, 12});
  CHECK(r4.points.atoms[2].vertex == LatticePoint{15, 15});
  CHECK(r4.points.atoms[0].centered_height == doctest::Approx(2.0 - m16));
  CHECK(r4.points.atoms[1].position.x == doctest::Approx(12.0 / 16.0));
  CHECK(r4.points.scale == 16);
  CHECK(r4.points.radius == 4.0);
  CHECK(r4.points.centering_value == doctest::Approx(m16));
  CHECK(r4.argmax == LatticePoint{12, 12});
  CHECK(r4.max_value == doctest::Approx(4.0));
  CHECK(r4.level_set.empty());  // no threshold requested

  // In l-infinity the corner is within radius 4 of the (12,12) peak and is
  // absorbed.
  const LocalMaxima l4 =
      extract_local_maxima(s, 4.0, std::nullopt, BallNorm::linf);
  REQUIRE(l4.points.atoms.size() == 2);
  CHECK(l4.points.atoms[0].vertex == LatticePoint{3, 3});
  CHECK(l4.points.atoms[1].vertex == LatticePoint{12, 12});

  // A radius-14 ball sees both peaks from almost everywhere: only the
  // global maximum remains.
  const LocalMaxima r14 = extract_local_maxima(s, 14.0);
  REQUIRE(r14.points.atoms.size() == 1);
  CHECK(r14.points.atoms[0].vertex == LatticePoint{12, 12});

  // Pairwise separation invariant in the chosen norm.
  for (std::size_t i = 0; i < r4.points.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < r4.points.atoms.size(); ++j) {
      const LatticePoint a = r4.points.atoms[i].vertex;
      const LatticePoint b = r4.points.atoms[j].vertex;
      CHECK(std::hypot(a.x - b.x, a.y - b.y) > 4.0);
    }
}

TEST_CASE("level sets and exact ties") {
  const FieldSample s = planted_field({{{3, 3}, 2.0}, {{12, 12}, 4.0}});
  const double m16 = centering(16).value;
  const LocalMaxima r = extract_local_maxima(s, 4.0, m16 - 3.0);
  REQUIRE(r.threshold.has_value());
  // Level set {h >= 3.0} contains only the taller peak.
  REQUIRE(r.level_set.size() == 1);
  CHECK(r.level_set[0] == LatticePoint{12, 12});

  // An exact tie within one ball: both members are reported.
  const FieldSample tied = planted_field({{{5, 5}, 7.0}, {{5, 6}, 7.0}});
  const LocalMaxima t = extract_local_maxima(tied, 2.0);
  REQUIRE(t.points.atoms.size() == 3);  // both tie members plus the corner
  CHECK(t.points.atoms[0].vertex == LatticePoint{5, 5});
  CHECK(t.points.atoms[1].vertex == LatticePoint{5, 6});
  CHECK(t.points.atoms[2].vertex == LatticePoint{15, 15});
  CHECK(t.max_value == doctest::Approx(7.0));
}

TEST_CASE("extraction rejects invalid inputs") {
  const FieldSample s = planted_field({});
  CHECK_THROWS_AS((void)extract_local_maxima(s, 0.5), DomainError);
  FieldSample cloud;  // no lattice: point-cloud samples are not extractable
  cloud.points = {{0.0, 0.0}};
  cloud.values.resize(1);
  cloud.values[0] = 1.0;
  CHECK_THROWS_AS((void)extract_local_maxima(cloud, 2.0), DomainError);
}

TEST_SUITE_END();
