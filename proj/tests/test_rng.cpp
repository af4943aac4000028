#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "dgff/rng.hpp"
#include "doctest.h"

using namespace dgff;

TEST_SUITE_BEGIN("rng");

TEST_CASE("streams are reproducible and order-independent") {
  RngStream a(42, 7);
  std::vector<std::uint64_t> first;
  for (int i = 0; i < 64; ++i) first.push_back(a.next_u64());

  RngStream b(42, 7);
  for (int i = 0; i < 64; ++i) CHECK(b.next_u64() == first[i]);

  // Interleaving another stream must not disturb the sequence.
  RngStream c(42, 7);
  RngStream other(42, 8);
  for (int i = 0; i < 64; ++i) {
    other.next_u64();
    CHECK(c.next_u64() == first[i]);
  }
}

TEST_CASE("distinct stream ids and seeds give distinct sequences") {
  RngStream a(42, 0), b(42, 1), c(43, 0);
  int equal_ab = 0, equal_ac = 0;
  for (int i = 0; i < 256; ++i) {
    const std::uint64_t va = a.next_u64();
    if (va == b.next_u64()) ++equal_ab;
    if (va == c.next_u64()) ++equal_ac;
  }
  CHECK(equal_ab == 0);
  CHECK(equal_ac == 0);
}

TEST_CASE("uniform draws live strictly inside (0,1)") {
  RngStream r(1, 2);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
  // Mean of n uniforms: SE = 1/sqrt(12 n); allow 5 SE.
  CHECK(std::abs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

TEST_CASE("normal draws match the first four moments") {
  RngStream r(9, 4);
  const int n = 200000;
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.next_normal();
    m1 += z;
    m2 += z * z;
    m3 += z * z * z;
    m4 += z * z * z * z;
  }
  m1 /= n; m2 /= n; m3 /= n; m4 /= n;
  const double se = 1.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(m1) < 5 * se);                    // Var = 1
  CHECK(std::abs(m2 - 1.0) < 5 * se * std::sqrt(2.0));
  CHECK(std::abs(m3) < 5 * se * std::sqrt(15.0));
  CHECK(std::abs(m4 - 3.0) < 5 * se * std::sqrt(96.0));
}

TEST_CASE("inverse normal cdf hits tabled quantiles") {
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.84134474606854293) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(inverse_normal_cdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
}

TEST_SUITE_END();
