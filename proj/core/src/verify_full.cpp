#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "dgff/constants.hpp"
#include "dgff/errors.hpp"
#include "dgff/extremes.hpp"
#include "dgff/fields.hpp"
#include "dgff/green.hpp"
#include "dgff/harmonic_continuum.hpp"
#include "dgff/heat_kernel.hpp"
#include "dgff/lattice.hpp"
#include "dgff/lqg.hpp"
#include "dgff/parallel.hpp"
#include "dgff/rng.hpp"
#include "dgff/stats.hpp"
#include "dgff/verify.hpp"
#include "verify_internal.hpp"

namespace dgff {
namespace {

using verify_internal::guarded;
using verify_internal::strf;

// Replica streams are partitioned as (criterion << 40) + (bank << 32) + i,
// so every Monte-Carlo bank in the suite is independent and reproducible.
constexpr std::uint64_t stream_base(int criterion, int bank = 0) {
  return (static_cast<std::uint64_t>(criterion) << 40) +
         (static_cast<std::uint64_t>(bank) << 32);
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

// Largest |S - expected| / SE over the upper triangle of an empirical
// covariance.
double worst_covariance_z(const EmpiricalCovariance& emp,
                          const Eigen::MatrixXd& expected) {
  const Eigen::MatrixXd& s = emp.kernel.matrix();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = i; j < s.cols(); ++j) {
      const double se = emp.standard_errors(i, j);
      if (se > 0.0)
        worst = std::max(worst, std::abs(s(i, j) - expected(i, j)) / se);
    }
  }
  return worst;
}

// Criterion 6: empirical covariances of the exact samplers match their
// target kernels entrywise within 4 Monte-Carlo standard errors.
CriterionResult criterion_sampler_covariances(std::uint64_t seed, int threads,
                                              std::ostream* live) {
  (void)threads;
  return guarded(6, "sampler_covariance_agreement", live,
                 [&](bool* pass, std::string* detail) {
    const std::size_t replicas = 100000;
    const LatticeDomain box = lattice_rectangle(0, 7, 0, 7, 8);
    const Eigen::MatrixXd G = green_matrix(box).matrix();

    // Seed each accumulator from the sampler's own point list so the point
    // convention always matches the samples it will receive.
    auto square_bank = [&](SamplerMethod method, int bank) {
      const DgffSampler sampler(box, method);
      const FieldSample first = sampler.sample(seed, stream_base(6, bank));
      CovarianceAccumulator acc(first.points);
      acc.add(first);
      for (std::size_t r = 1; r < replicas; ++r)
        acc.add(sampler.sample(seed, stream_base(6, bank) + r));
      return worst_covariance_z(acc.finalize(), G);
    };
    const double z_chol = square_bank(SamplerMethod::cholesky, 0);
    const double z_sine = square_bank(SamplerMethod::sine_transform, 1);

    const TriangularDomain patch = triangular_patch(8);
    const TriangularSampler tri(patch);
    const Eigen::MatrixXd target = (2.0 / std::sqrt(3.0)) * tri.green();
    const FieldSample tri_first = tri.sample(seed, stream_base(6, 2));
    CovarianceAccumulator tri_acc(tri_first.points);
    tri_acc.add(tri_first);
    for (std::size_t r = 1; r < replicas; ++r)
      tri_acc.add(tri.sample(seed, stream_base(6, 2) + r));
    const double z_tri = worst_covariance_z(tri_acc.finalize(), target);

    *pass = z_chol <= 4.0 && z_sine <= 4.0 && z_tri <= 4.0;
    *detail = strf(
        "8x8 box, 1e5 replicas: worst |S-G|/SE cholesky=%.2f, "
        "sine_transform=%.2f; triangular patch vs (2/sqrt3)G: %.2f "
        "(all <= 4)",
        z_chol, z_sine, z_tri);
  });
}

// Criterion 7: Monte-Carlo variance of the lattice binding field
// phi^{V,U}(0) for the disc pair at N = 512 against (2/pi) ln 2.
CriterionResult criterion_binding_field_variance(std::uint64_t seed,
                                                 int threads,
                                                 std::ostream* live) {
  (void)threads;
  return guarded(7, "binding_field_variance", live,
                 [&](bool* pass, std::string* detail) {
    const int scale = 512;
    // w = harmonic measure of the inner disc from its center; the binding
    // value phi(0) = sum_z w(z) h_V(z) is Gaussian with variance w^T G_V w.
    const LatticeDomain inner = discretize(disc({0, 0}, 0.5), scale);
    const DirichletSolver inner_solver(inner);
    const HarmonicMeasureRow row = harmonic_measure_discrete(inner_solver, {0, 0});
    const LatticeDomain outer = discretize(unit_disc(), scale);
    const DirichletSolver outer_solver(outer);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outer.size()));
    for (std::size_t k = 0; k < row.boundary.size(); ++k)
      w[static_cast<Eigen::Index>(outer.require_index(row.boundary[k]))] =
          row.probabilities[k];
    const double sigma2 = w.dot(outer_solver.solve(w));
    const double sigma = std::sqrt(sigma2);

    // phi(0) is exactly N(0, sigma^2): the Monte-Carlo step reduces to
    // scalar draws, whose sample variance is compared to the continuum
    // value (2/pi) ln 2.
    const std::size_t replicas = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t r = 0; r < replicas; ++r) {
      RngStream rng(seed, stream_base(7) + r);
      const double x = sigma * rng.next_normal();
      sum += x;
      sumsq += x * x;
    }
    const double n = static_cast<double>(replicas);
    const double var = (sumsq - sum * sum / n) / (n - 1.0);
    const double target = constants().g * std::log(2.0);
    const double err = std::abs(var - target);
    *pass = err < 0.05;
    *detail = strf(
        "N=512 disc pair: lattice variance %.6f, sample variance %.6f "
        "(1e5 replicas) vs (2/pi)ln2=%.6f, |diff|=%.4f (tol 0.05)",
        sigma2, var, target, err);
  });
}

// Shared extremal banks for criteria 8-11.
struct MaxBank {
  std::vector<double> maxima;          // centered maxima, one per replica
  std::vector<Vec2> argmax;            // argmax location in [0,1]^2
  std::vector<double> window_heights;  // pooled local-maxima heights in [-1, 1.5]
};

MaxBank collect_max_bank(int scale, std::size_t replicas, std::uint64_t seed,
                         std::uint64_t base, int threads, bool with_atoms) {
  const LatticeDomain box =
      lattice_rectangle(1, scale - 1, 1, scale - 1, scale);
  const DgffSampler sampler(box, SamplerMethod::sine_transform);
  const double m_n = centering(scale).value;
  MaxBank bank;
  bank.maxima.assign(replicas, 0.0);
  bank.argmax.assign(replicas, Vec2{});
  std::vector<std::vector<double>> window(with_atoms ? replicas : 0);
  const double radius = static_cast<double>(default_extraction_radius(scale));
  parallel_for(replicas, threads, [&](std::size_t r) {
    const FieldSample h = sampler.sample(seed, base + r);
    if (with_atoms) {
      const LocalMaxima lm = extract_local_maxima(h, radius);
      bank.maxima[r] = lm.max_value - m_n;
      bank.argmax[r] = box.embed(lm.argmax);
      for (const ExtremalAtom& atom : lm.points.atoms)
        if (atom.centered_height >= -1.0 && atom.centered_height <= 1.5)
          window[r].push_back(atom.centered_height);
    } else {
      std::size_t arg = 0;
      double best = h.values[0];
      for (std::size_t i = 1; i < h.values.size(); ++i)
        if (h.values[i] > best) { best = h.values[i]; arg = i; }
      bank.maxima[r] = best - m_n;
      bank.argmax[r] = h.points[arg];
    }
  });
  for (auto& w : window)
    bank.window_heights.insert(bank.window_heights.end(), w.begin(), w.end());
  return bank;
}

// Criterion 8: stability of the law of the centered maximum across scales.
CriterionResult criterion_max_centering(const MaxBank& b128, const MaxBank& b256,
                                        const MaxBank& b512, std::ostream* live) {
  return guarded(8, "max_centering_stability", live,
                 [&](bool* pass, std::string* detail) {
    const std::size_t n = 10000;
    const std::vector<double> head512(b512.maxima.begin(),
                                      b512.maxima.begin() + n);
    const double m1 = mean_se(b128.maxima).mean;
    const double m2 = mean_se(b256.maxima).mean;
    const double m3 = mean_se(head512).mean;
    const double spread = std::max({std::abs(m1 - m2), std::abs(m1 - m3),
                                    std::abs(m2 - m3)});
    const StatReport ks = max_law_stability(b256.maxima, head512, 0.05);
    *pass = spread <= 0.5 && ks.pass;
    *detail = strf(
        "centered-max means N=128/256/512: %.4f / %.4f / %.4f (1e4 replicas, "
        "max pairwise gap %.4f, tol 0.5); KS(256,512)=%.4f (bound 0.05)",
        m1, m2, m3, spread, ks.estimate);
  });
}

// Criterion 9: flatness of the Gumbel-type upper tail ratio at N = 512.
CriterionResult criterion_max_tail(const MaxBank& b512, std::ostream* live) {
  return guarded(9, "max_upper_tail_ratio", live,
                 [&](bool* pass, std::string* detail) {
    const double alpha = constants().alpha;
    const std::vector<StatReport> ratios =
        tail_ratio(b512.maxima, {1.5, 2.0, 2.5}, alpha);
    const StatReport flat = tail_ratio_flatness(ratios, 1.5);
    *pass = flat.pass;
    *detail = strf(
        "t^-1 e^{alpha t} P(max > m_N + t) at t=1.5/2/2.5: %.4f / %.4f / "
        "%.4f; max/min=%.3f (bound 1.5, 2e5 replicas)",
        ratios[0].estimate, ratios[1].estimate, ratios[2].estimate,
        flat.estimate);
  });
}

// Criterion 10: exponential intensity of pooled local-maxima heights.
CriterionResult criterion_intensity(const MaxBank& b512, std::ostream* live) {
  return guarded(10, "local_maxima_intensity", live,
                 [&](bool* pass, std::string* detail) {
    const double alpha = constants().alpha;
    const StatReport fit =
        intensity_profile(b512.window_heights, -1.0, 1.5, alpha, 0.10, 1000);
    *pass = fit.pass;
    double count = 0;
    for (const auto& [key, value] : fit.params)
      if (key == "count") count = value;
    *detail = strf(
        "pooled heights in [-1,1.5] at N=512: fitted rate %.4f vs "
        "alpha=%.4f (rel err %.3f, tol 0.10, %g samples)",
        fit.estimate, alpha, std::abs(fit.estimate - alpha) / alpha, count);
  });
}

// Criterion 11: argmax spatial density against psi, corner vs center,
// conditionally on a high maximum.
CriterionResult criterion_argmax_density(const MaxBank& b512,
                                         std::ostream* live) {
  return guarded(11, "argmax_density_ratio", live,
                 [&](bool* pass, std::string* detail) {
    std::vector<Vec2> events;
    for (std::size_t r = 0; r < b512.maxima.size(); ++r)
      if (b512.maxima[r] > 1.5) events.push_back(b512.argmax[r]);
    const DensityField psi16 =
        psi_density(unit_square(), Rect{{0, 0}, {1, 1}}, 16, 16,
                    HarmonicMeasureMethod::automatic, 512);
    const DensityField psi4 = aggregate_density(psi16, 4);
    const StatReport ratio =
        argmax_corner_center_ratio(events, psi4, 1, 2, 0.25, 1000);
    *pass = ratio.pass;
    *detail = strf(
        "%zu events with centered max > 1.5: (corner rate/density)/(center "
        "rate/density)=%.3f vs 1 (tol 0.25)",
        events.size(), ratio.estimate);
  });
}

// Criterion 12: resampling consistency of the Gibbs-Markov decomposition on
// the square-minus-cross geometry at N = 256; the law of extremal
// functionals must agree between the direct field and the recomposed one.
CriterionResult criterion_gm_consistency(std::uint64_t seed, int threads,
                                         std::ostream* live) {
  return guarded(12, "gibbs_markov_resampling", live,
                 [&](bool* pass, std::string* detail) {
    const int scale = 256;
    const ContinuumDomain square = unit_square();
    const ContinuumDomain crossed(
        {Shape{Rect{{0, 0}, {1, 1}}}},
        {Shape{Rect{{0.5, 0.0}, {0.5, 1.0}}},
         Shape{Rect{{0.0, 0.5}, {1.0, 0.5}}}});
    const LatticeDomain full = discretize(square, scale);
    const LatticeDomain cross = discretize(crossed, scale);
    const DirichletSolver cross_solver(cross);
    const DgffSampler direct(full, SamplerMethod::sine_transform);

    std::vector<std::size_t> region;  // vertices of K = [0.6, 0.9]^2
    const std::vector<LatticePoint>& verts = full.vertices();
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const Vec2 x = full.embed(verts[i]);
      if (x.x >= 0.6 && x.x <= 0.9 && x.y >= 0.6 && x.y <= 0.9)
        region.push_back(i);
    }
    const double m_n = centering(scale).value;
    auto functionals = [&](const FieldSample& h, double* count, double* kmax) {
      const LocalMaxima lm = extract_local_maxima(h, 4.0);
      int c = 0;
      for (const ExtremalAtom& a : lm.points.atoms)
        if (a.position.x >= 0.6 && a.position.x <= 0.9 && a.position.y >= 0.6 &&
            a.position.y <= 0.9 && a.centered_height > -2.0)
          ++c;
      double best = -1e300;
      for (std::size_t i : region) best = std::max(best, h.values[i]);
      *count = c;
      *kmax = best - m_n;
    };

    const std::size_t replicas = 500;
    std::vector<double> count_a(replicas), kmax_a(replicas);
    std::vector<double> count_b(replicas), kmax_b(replicas);
    parallel_for(replicas, threads, [&](std::size_t r) {
      const FieldSample h = direct.sample(seed, stream_base(12, 0) + r);
      functionals(h, &count_a[r], &kmax_a[r]);
    });
    parallel_for(replicas, threads, [&](std::size_t r) {
      // phi^{V,U} from one independent draw, bulk h^U from another: the
      // recomposition has the full-domain law exactly when both pieces do.
      const FieldSample donor = direct.sample(seed, stream_base(12, 1) + r);
      const FieldSample fresh = direct.sample(seed, stream_base(12, 2) + r);
      const GibbsMarkovSplit phi_part = gibbs_markov_decompose(donor, cross_solver);
      const GibbsMarkovSplit bulk_part = gibbs_markov_decompose(fresh, cross_solver);
      FieldSample composed = phi_part.phi;
      const std::vector<LatticePoint>& bulk_verts = bulk_part.bulk.lattice.vertices();
      for (std::size_t i = 0; i < bulk_verts.size(); ++i)
        composed.values[full.require_index(bulk_verts[i])] +=
            bulk_part.bulk.values[i];
      functionals(composed, &count_b[r], &kmax_b[r]);
    });

    const StatReport ks_count =
        two_sample_ks(count_a, count_b, 0.01, "atom_count");
    const StatReport ks_max = two_sample_ks(kmax_a, kmax_b, 0.01, "region_max");
    *pass = ks_count.pass && ks_max.pass;
    *detail = strf(
        "square-minus-cross, 500+500 replicas at N=256: KS(atom count in "
        "[0.6,0.9]^2 above -2)=%.4f, KS(region max)=%.4f (significance 0.01)",
        ks_count.estimate, ks_max.estimate);
  });
}

// Criterion 13: Girsanov tilt identity for the Laplace functional of the
// normalized measure at t = 2 across a grid of points and lambdas.
CriterionResult criterion_girsanov(std::uint64_t seed, int threads,
                                   std::ostream* live) {
  (void)threads;
  return guarded(13, "girsanov_tilt_identity", live,
                 [&](bool* pass, std::string* detail) {
    const ContinuumDomain square = unit_square();
    const DensityField psi =
        psi_density(square, Rect{{0, 0}, {1, 1}}, 24, 24,
                    HarmonicMeasureMethod::automatic, 256);
    TruncatedGreenOptions options;
    options.method = TruncatedGreenMethod::rectangle_series;
    const TruncatedKernel kernel = truncated_green(square, psi.centers, 2.0, options);
    const GirsanovTester tester(kernel, psi);

    const double lambdas[3] = {0.1, 0.5, 2.0};
    std::vector<GirsanovTester::Config> configs;
    for (int k = 0; k < 20; ++k) {
      GirsanovTester::Config c;
      c.point_index = static_cast<std::size_t>((k + 0.5) * 576.0 / 20.0);
      c.lambda = lambdas[k % 3];
      configs.push_back(c);
    }
    const std::vector<StatReport> reports =
        tester.check(configs, 200000, seed, stream_base(13, 0),
                     stream_base(13, 1), 4.0);
    double worst = 0.0;
    int beyond3 = 0;
    bool all4 = true;
    for (const StatReport& r : reports) {
      worst = std::max(worst, std::abs(r.estimate));
      if (std::abs(r.estimate) > 3.0) ++beyond3;
      all4 = all4 && r.pass;
    }
    *pass = all4 && beyond3 <= 1;
    *detail = strf(
        "20 (point, lambda) configs at t=2, 2e5 replicas/side: worst "
        "|z|=%.2f (bound 4), %d configs with |z|>3 (allow <= 1)",
        worst, beyond3);
  });
}

// Criterion 14: variance growth Var(phi_t) ~ g t of the truncated kernel,
// and vanishing of the truncation error of the binding kernel
// C_t = G_t^{Dtilde} - G_t^{D} against the exact lattice difference.
CriterionResult criterion_kernel_convergence(std::uint64_t, std::ostream* live) {
  return guarded(14, "truncated_kernel_convergence", live,
                 [&](bool* pass, std::string* detail) {
    const double g = constants().g;
    const ContinuumDomain square = unit_square();

    // Variance growth at deep truncation time, away from the boundary.
    const std::vector<Vec2> interior = {
        {0.5, 0.5}, {0.42, 0.38}, {0.6, 0.58}, {0.35, 0.5}};
    TruncatedGreenOptions series;
    series.method = TruncatedGreenMethod::rectangle_series;
    const TruncatedKernel deep = truncated_green(square, interior, 6.0, series);
    double var_err = 0.0;
    for (Eigen::Index i = 0; i < deep.matrix.rows(); ++i)
      var_err = std::max(var_err, std::abs(deep.matrix(i, i) / 6.0 - g) / g);

    // Matched-lattice evaluation of the binding-kernel limit on the
    // square/slit pair: both semigroup kernels and the exact Green
    // difference live on the same mesh, so discretization bias cancels.
    const ContinuumDomain slit({Shape{Rect{{0, 0}, {1, 1}}}},
                               {Shape{Rect{{0.5, 0.25}, {0.5, 0.75}}}});
    const int mesh = 256;
    const std::vector<Vec2> probes = {
        {0.6, 0.5}, {0.535, 0.5}, {0.3, 0.3}, {0.75, 0.6}, {0.25, 0.7}};
    const int n = static_cast<int>(probes.size());
    const LatticeDomain lat_square = discretize(square, mesh);
    const LatticeDomain lat_slit = discretize(slit, mesh);
    const DirichletSolver solver_square(lat_square);
    const DirichletSolver solver_slit(lat_slit);
    auto nearest = [](const LatticeDomain& dom, const Vec2& p) {
      const int cx = static_cast<int>(std::lround(p.x * dom.scale()));
      const int cy = static_cast<int>(std::lround(p.y * dom.scale()));
      double best = 1e300;
      LatticePoint out{};
      for (int dx = -3; dx <= 3; ++dx) {
        for (int dy = -3; dy <= 3; ++dy) {
          const LatticePoint q{cx + dx, cy + dy};
          if (!dom.is_vertex(q.x, q.y)) continue;
          const double ex = q.x - p.x * dom.scale();
          const double ey = q.y - p.y * dom.scale();
          if (ex * ex + ey * ey < best) {
            best = ex * ex + ey * ey;
            out = q;
          }
        }
      }
      return out;
    };
    std::vector<LatticePoint> v_square(n), v_slit(n);
    for (int i = 0; i < n; ++i) {
      v_square[i] = nearest(lat_square, probes[i]);
      v_slit[i] = nearest(lat_slit, probes[i]);
    }
    Eigen::MatrixXd exact(n, n);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd e_sq =
          Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lat_square.size()));
      e_sq[static_cast<Eigen::Index>(lat_square.require_index(v_square[i]))] = 1.0;
      const Eigen::VectorXd g_sq = solver_square.solve(e_sq);
      Eigen::VectorXd e_sl =
          Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lat_slit.size()));
      e_sl[static_cast<Eigen::Index>(lat_slit.require_index(v_slit[i]))] = 1.0;
      const Eigen::VectorXd g_sl = solver_slit.solve(e_sl);
      for (int j = 0; j < n; ++j)
        exact(i, j) = g_sq[static_cast<Eigen::Index>(
                          lat_square.require_index(v_square[j]))] -
                      g_sl[static_cast<Eigen::Index>(
                          lat_slit.require_index(v_slit[j]))];
    }
    exact = 0.5 * (exact + exact.transpose()).eval();

    TruncatedGreenOptions semigroup;
    semigroup.method = TruncatedGreenMethod::lattice_semigroup;
    semigroup.lattice_scale = mesh;
    double eps[3] = {0, 0, 0};
    const double times[3] = {2.0, 3.0, 4.0};
    for (int k = 0; k < 3; ++k) {
      const TruncatedKernel g_sq = truncated_green(square, probes, times[k], semigroup);
      const TruncatedKernel g_sl = truncated_green(slit, probes, times[k], semigroup);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          eps[k] = std::max(eps[k], std::abs(g_sq.matrix(i, j) -
                                             g_sl.matrix(i, j) - exact(i, j)));
    }

    // Cross-check of the exact lattice difference against the continuum
    // binding kernel at the first probe (reported, not gated).
    const HarmonicMeasureEngine outer_engine(square,
                                             HarmonicMeasureMethod::automatic, 512);
    const HarmonicMeasureEngine inner_engine(slit,
                                             HarmonicMeasureMethod::automatic, 512);
    const double continuum =
        g * std::log(conformal_radius(outer_engine, probes[0]) /
                     conformal_radius(inner_engine, probes[0]));

    const bool decreasing = eps[0] > eps[1] && eps[1] > eps[2];
    *pass = var_err <= 0.10 && decreasing && eps[2] < 0.05;
    *detail = strf(
        "Var(phi_6)/6 within %.3f of g at 4 interior points (tol 0.10); "
        "binding truncation eps(t)=%.4f/%.4f/%.4f at t=2/3/4 (decreasing, "
        "eps(4)<0.05); lattice C(x0,x0)=%.4f vs continuum %.4f",
        var_err, eps[0], eps[1], eps[2], exact(0, 0), continuum);
  });
}

// Criterion 15: Laplace-tail estimates of the normalized measure flatten in
// lambda and are additive in A; synthetic Cauchy-tail control.
CriterionResult criterion_tail_estimators(std::uint64_t seed, int threads,
                                          std::ostream* live) {
  return guarded(15, "laplace_cauchy_tails", live,
                 [&](bool* pass, std::string* detail) {
    const ContinuumDomain square = unit_square();
    const DensityField psi =
        psi_density(square, Rect{{0, 0}, {1, 1}}, 48, 48,
                    HarmonicMeasureMethod::automatic, 256);
    TruncatedGreenOptions options;
    options.method = TruncatedGreenMethod::rectangle_series;
    const TruncatedKernel kernel = truncated_green(square, psi.centers, 3.0, options);
    const PhiSampler sampler(kernel);

    std::vector<std::size_t> half;  // A = left half {x < 1/2}
    double psi_d = 0.0, psi_h = 0.0;
    for (std::size_t i = 0; i < psi.centers.size(); ++i) {
      psi_d += psi.values[i] * psi.cell_area;
      if (psi.centers[i].x < 0.5) {
        half.push_back(i);
        psi_h += psi.values[i] * psi.cell_area;
      }
    }

    const std::size_t replicas = 20000;
    std::vector<double> mass_d(replicas), mass_h(replicas);
    parallel_for(replicas, threads, [&](std::size_t r) {
      const FieldSample phi = sampler.sample(seed, stream_base(15, 0) + r);
      const GridMeasure gm = seneta_heyde_measure(phi, kernel, psi);
      double d = 0.0, h = 0.0;
      for (double v : gm.masses) d += v;
      for (std::size_t k : half) h += gm.masses[k];
      mass_d[r] = d;
      mass_h[r] = h;
    });

    const double est_d1 = laplace_tail(mass_d, mass_d, 1e-2).estimate;
    const double est_d2 = laplace_tail(mass_d, mass_d, 1e-3).estimate;
    const double est_h1 = laplace_tail(mass_h, mass_d, 1e-2).estimate;
    const double est_h2 = laplace_tail(mass_h, mass_d, 1e-3).estimate;
    const double flat_d = est_d2 / est_d1;
    const double flat_h = est_h2 / est_h1;
    const double a_ratio = est_d2 / est_h2;
    const double psi_ratio = psi_d / psi_h;
    const bool ok_flat = std::abs(flat_d - 1.0) <= 0.35 &&
                         std::abs(flat_h - 1.0) <= 0.35;
    const bool ok_ratio = std::abs(a_ratio / psi_ratio - 1.0) <= 0.25;

    // Synthetic control with an exactly planted Cauchy tail P(M > u) = c/u.
    const double c = 0.7;
    const std::size_t draws = 100000;
    std::vector<double> planted(draws);
    for (std::size_t r = 0; r < draws; ++r) {
      RngStream rng(seed, stream_base(15, 1) + r);
      planted[r] = c / rng.next_uniform();
    }
    const StatReport cauchy = cauchy_tail(planted, 10.0 * c);
    const double cauchy_err = std::abs(cauchy.estimate - c);
    const bool ok_cauchy = cauchy_err <= 3.0 * cauchy.standard_error;

    *pass = ok_flat && ok_ratio && ok_cauchy;
    *detail = strf(
        "t=3, 48^2 grid, 2e4 samples: est(1e-3)/est(1e-2)=%.3f (A=D) %.3f "
        "(A=half, tol 0.35); A-ratio %.3f vs psi-ratio %.3f (tol 25%%); "
        "planted Cauchy c=0.7: %.4f +- %.4f (3 SE)",
        flat_d, flat_h, a_ratio, psi_ratio, cauchy.estimate,
        cauchy.standard_error);
  });
}

// Criterion 16: Kahane comparison direction on ordered kernel pairs, and
// the one-point Laplace moment against deterministic quadrature.
CriterionResult criterion_kahane(std::uint64_t seed, int threads,
                                 std::ostream* live) {
  (void)threads;
  return guarded(16, "kahane_comparison", live,
                 [&](bool* pass, std::string* detail) {
    const ContinuumDomain square = unit_square();
    TruncatedGreenOptions options;
    options.method = TruncatedGreenMethod::rectangle_series;

    int fixtures_passed = 0;
    double worst_margin = 1e300;  // estimate / SE, most negative is worst
    for (int k = 0; k < 10; ++k) {
      const int side = 2 + (k % 2);
      std::vector<Vec2> pts;
      for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
          pts.push_back({0.3 + 0.4 * i / (side - 1.0),
                         0.3 + 0.4 * j / (side - 1.0)});
      const TruncatedKernel base = truncated_green(square, pts, 1.0, options);
      RngStream fixture(seed, stream_base(16, 31) + static_cast<std::uint64_t>(k));
      const Eigen::Index n = base.matrix.rows();
      Eigen::VectorXd v(n);
      std::vector<double> sigma(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = 0.2 + 0.8 * fixture.next_uniform();
        sigma[static_cast<std::size_t>(i)] = 0.4 + 0.6 * fixture.next_uniform();
      }
      const double s = 0.1 + 0.4 * k / 9.0;
      const Eigen::MatrixXd hi_matrix = base.matrix + s * v * v.transpose();
      const CovKernel lo(pts, base.matrix, 1e-8);
      const CovKernel hi(pts, hi_matrix, 1e-8);
      const StatReport report =
          kahane_check(hi, lo, sigma, 30000, seed,
                       stream_base(16, 2 * k), stream_base(16, 2 * k + 1));
      fixtures_passed += report.pass ? 1 : 0;
      if (report.standard_error > 0.0)
        worst_margin = std::min(worst_margin,
                                report.estimate / report.standard_error);
    }

    // One-point check: E exp(-e^{X - v/2}), X ~ N(0, v), Monte Carlo vs
    // quadrature at v = 1, 2.
    bool one_point_ok = true;
    double quad[2] = {0, 0}, mc[2] = {0, 0}, mc_se[2] = {0, 0};
    const double variances[2] = {1.0, 2.0};
    for (int k = 0; k < 2; ++k) {
      const double v = variances[k];
      quad[k] = lognormal_laplace_moment(1.0, v);
      RngStream rng(seed, stream_base(16, 30) + static_cast<std::uint64_t>(k));
      const std::size_t draws = 100000;
      double sum = 0.0, sumsq = 0.0;
      for (std::size_t r = 0; r < draws; ++r) {
        const double x = std::sqrt(v) * rng.next_normal();
        const double y = std::exp(-std::exp(x - v / 2.0));
        sum += y;
        sumsq += y * y;
      }
      const double nd = static_cast<double>(draws);
      mc[k] = sum / nd;
      mc_se[k] = std::sqrt((sumsq - sum * sum / nd) / (nd - 1.0) / nd);
      one_point_ok = one_point_ok && std::abs(mc[k] - quad[k]) <= 3.0 * mc_se[k];
    }

    *pass = fixtures_passed == 10 && one_point_ok;
    *detail = strf(
        "%d/10 ordered fixtures keep E exp larger under the larger kernel "
        "(worst margin %.2f SE); one-point MC vs quadrature: v=1 %.5f vs "
        "%.5f, v=2 %.5f vs %.5f (3 SE)",
        fixtures_passed, worst_margin, mc[0], quad[0], mc[1], quad[1]);
  });
}

}  // namespace

std::vector<CriterionResult> full_criteria(std::uint64_t seed, int threads,
                                           std::ostream* live) {
  std::vector<CriterionResult> results;
  results.push_back(criterion_sampler_covariances(seed, threads, live));
  results.push_back(criterion_binding_field_variance(seed, threads, live));

  const MaxBank b512 =
      collect_max_bank(512, 200000, seed, stream_base(8, 0), threads, true);
  const MaxBank b128 =
      collect_max_bank(128, 10000, seed, stream_base(8, 1), threads, false);
  const MaxBank b256 =
      collect_max_bank(256, 10000, seed, stream_base(8, 2), threads, false);
  results.push_back(criterion_max_centering(b128, b256, b512, live));
  results.push_back(criterion_max_tail(b512, live));
  results.push_back(criterion_intensity(b512, live));
  results.push_back(criterion_argmax_density(b512, live));

  results.push_back(criterion_gm_consistency(seed, threads, live));
  results.push_back(criterion_girsanov(seed, threads, live));
  results.push_back(criterion_kernel_convergence(seed, live));
  results.push_back(criterion_tail_estimators(seed, threads, live));
  results.push_back(criterion_kahane(seed, threads, live));
  return results;
}

}  // namespace dgff
