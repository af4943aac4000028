#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "dgff/fields.hpp"
#include "dgff/green.hpp"
#include "dgff/lattice.hpp"
#include "doctest.h"

using namespace dgff;

TEST_SUITE_BEGIN("fields");

namespace {

// Worst entrywise z-score of an empirical covariance against its target.
double worst_z(const CovKernel& emp, const Eigen::MatrixXd& target,
               std::size_t replicas) {
  const Eigen::MatrixXd& s = emp.matrix();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = i; j < s.cols(); ++j) {
      const double var =
          target(i, i) * target(j, j) + target(i, j) * target(i, j);
      const double se = std::sqrt(var / static_cast<double>(replicas));
      worst = std::max(worst, std::abs(s(i, j) - target(i, j)) / se);
    }
  return worst;
}

double covariance_check(const DgffSampler& sampler, const Eigen::MatrixXd& target,
                        std::size_t replicas, std::uint64_t seed) {
  const FieldSample first = sampler.sample(seed, 0);
  CovarianceAccumulator acc(first.points);
  acc.add(first);
  for (std::size_t r = 1; r < replicas; ++r) acc.add(sampler.sample(seed, r));
  return worst_z(acc.finalize(), target, replicas);
}

}  // namespace

TEST_CASE("samples are reproducible functions of (seed, stream)") {
  const LatticeDomain box = lattice_rectangle(0, 5, 0, 5, 8);
  const DgffSampler sampler(box, SamplerMethod::sine_transform);
  const FieldSample a = sampler.sample(7, 11);
  const FieldSample b = sampler.sample(7, 11);
  const FieldSample c = sampler.sample(7, 12);
  REQUIRE(a.values.size() == b.values.size());
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.values - c.values).cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.master_seed == 7);
  CHECK(a.stream_id == 11);
  // One-shot wrapper draws the same field.
  RngStream rng(7, 11);
  const FieldSample d = sample_dgff(box, SamplerMethod::sine_transform, rng);
  CHECK((a.values - d.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sine transform dimensions and zero-mean structure") {
  RngStream rng(3, 5);
  const Eigen::VectorXd v = sine_rectangle_sample(6, 4, rng);
  CHECK(v.size() == 24);
  RngStream rng2(3, 5);
  const Eigen::VectorXd w = sine_rectangle_sample(6, 4, rng2);
  CHECK((v - w).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sampler covariances agree with the Green matrix") {
  const std::size_t replicas = 30000;
  const LatticeDomain box = lattice_rectangle(0, 5, 0, 5, 8);
  const Eigen::MatrixXd G = green_matrix(box).matrix();
  CHECK(covariance_check(DgffSampler(box, SamplerMethod::cholesky), G, replicas,
                         101) < 5.0);
  CHECK(covariance_check(DgffSampler(box, SamplerMethod::sine_transform), G,
                         replicas, 202) < 5.0);

  // Non-rectangular domain through the Gibbs-Markov path.
  std::vector<LatticePoint> pts;
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 6; ++x)
      if (!(x >= 3 && y >= 3)) pts.push_back({x, y});
  const LatticeDomain ell = LatticeDomain::from_points(pts, 8);
  const Eigen::MatrixXd Gell = green_matrix(ell).matrix();
  CHECK(covariance_check(DgffSampler(ell, SamplerMethod::gibbs_markov), Gell,
                         replicas, 303) < 5.0);
}

TEST_CASE("sine transform requires a full rectangle") {
  std::vector<LatticePoint> pts;
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x)
      if (x != 2 || y != 2) pts.push_back({x, y});
  const LatticeDomain holey = LatticeDomain::from_points(pts, 8);
  CHECK_THROWS_AS(DgffSampler(holey, SamplerMethod::sine_transform),
                  MethodUnsupported);
}

TEST_CASE("Gibbs-Markov split reconstructs the field") {
  const LatticeDomain box = lattice_rectangle(0, 9, 0, 9, 10);
  const LatticeDomain inner = lattice_rectangle(3, 6, 3, 6, 10);
  const DgffSampler sampler(box, SamplerMethod::sine_transform);
  const FieldSample h = sampler.sample(99, 1);
  const GibbsMarkovSplit split = gibbs_markov_decompose(h, inner);

  REQUIRE(split.phi.values.size() == static_cast<Eigen::Index>(box.size()));
  REQUIRE(split.bulk.values.size() == static_cast<Eigen::Index>(inner.size()));

  for (std::size_t i = 0; i < box.size(); ++i) {
    const LatticePoint p = box.vertices()[i];
    const double phi = split.phi.values[static_cast<Eigen::Index>(i)];
    const auto j = inner.vertex_index(p);
    if (j) {
      // phi + bulk literally reassembles h on the subdomain.
      const double bulk = split.bulk.values[static_cast<Eigen::Index>(*j)];
      CHECK(phi + bulk ==
            doctest::Approx(h.values[static_cast<Eigen::Index>(i)])
                .epsilon(1e-10));
      // phi is discrete-harmonic at interior vertices of the subdomain
      // (values off the big box count as zero).
      double nb = 0.0;
      for (const LatticePoint o : kNeighborOffsets) {
        const auto k = box.vertex_index({p.x + o.x, p.y + o.y});
        if (k) nb += split.phi.values[static_cast<Eigen::Index>(*k)];
      }
      CHECK(phi == doctest::Approx(nb / 4.0).epsilon(1e-10));
    } else {
      // Outside the subdomain phi agrees with h.
      CHECK(phi == doctest::Approx(h.values[static_cast<Eigen::Index>(i)]));
    }
  }
}

TEST_CASE("covariance accumulator rejects mismatched point lists") {
  const LatticeDomain box = lattice_rectangle(0, 3, 0, 3, 4);
  const DgffSampler sampler(box, SamplerMethod::cholesky);
  const FieldSample s = sampler.sample(1, 0);
  CovarianceAccumulator good(s.points);
  good.add(s);
  CHECK(good.count() == 1);
  CHECK_THROWS_AS(good.finalize(), InsufficientSamples);  // needs >= 2

  std::vector<Vec2> shifted = s.points;
  shifted[0].x += 0.5;
  CovarianceAccumulator bad(shifted);
  CHECK_THROWS_AS(bad.add(s), DomainError);
}

TEST_CASE("binding field sampler matches its kernel") {
  const std::vector<Vec2> pts = {{0.0, 0.0}, {0.2, 0.1}, {-0.1, 0.15}};
  const BindingFieldSampler sampler(unit_disc(), disc({0.0, 0.0}, 0.5), pts,
                                    HarmonicMeasureMethod::disc_analytic);
  const Eigen::MatrixXd direct = binding_cov_matrix(
      unit_disc(), disc({0.0, 0.0}, 0.5), pts, HarmonicMeasureMethod::disc_analytic);
  CHECK((sampler.kernel().matrix() - direct).cwiseAbs().maxCoeff() < 1e-10);
  const FieldSample a = sampler.sample(5, 3);
  const FieldSample b = sampler.sample(5, 3);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.lattice.empty());
  REQUIRE(a.points.size() == pts.size());
}

TEST_CASE("triangular patch sampler has the rescaled walk covariance") {
  const TriangularDomain patch = triangular_patch(5);
  CHECK(patch.size() == 21);  // (s+1)(s+2)/2 for side s = 5
  const Vec2 u = patch.embed({1, 0}), v = patch.embed({0, 1});
  CHECK(u.x == doctest::Approx(1.0));
  CHECK(u.y == doctest::Approx(0.0));
  CHECK(v.x == doctest::Approx(0.5));
  CHECK(v.y == doctest::Approx(std::sqrt(3.0) / 2.0));

  const TriangularSampler sampler(patch);
  const Eigen::MatrixXd target = (2.0 / std::sqrt(3.0)) * sampler.green();
  CHECK((sampler.green() - sampler.green().transpose()).cwiseAbs().maxCoeff() <
        1e-10);
  const std::size_t replicas = 30000;
  const FieldSample first = sampler.sample(404, 0);
  CovarianceAccumulator acc(first.points);
  acc.add(first);
  for (std::size_t r = 1; r < replicas; ++r) acc.add(sampler.sample(404, r));
  CHECK(worst_z(acc.finalize(), target, replicas) < 5.0);
}

TEST_SUITE_END();
