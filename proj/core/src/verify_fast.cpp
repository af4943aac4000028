#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "dgff/constants.hpp"
#include "dgff/errors.hpp"
#include "dgff/green.hpp"
#include "dgff/harmonic_continuum.hpp"
#include "dgff/lattice.hpp"
#include "dgff/potential_kernel.hpp"
#include "dgff/quadrature.hpp"
#include "dgff/rng.hpp"
#include "dgff/verify.hpp"
#include "verify_internal.hpp"

namespace dgff {
namespace {

using verify_internal::guarded;
using verify_internal::strf;

// Least-squares slope of y against x.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

// Criterion 1: the two Green-matrix constructions agree on random
// subdomains of a 24 x 24 box, and the two-vertex domino matches its exact
// rational Green matrix.
CriterionResult criterion_green_constructions(std::uint64_t seed,
                                              std::ostream* live) {
  return guarded(1, "green_function_constructions", live,
                 [&](bool* pass, std::string* detail) {
    RngStream rng(seed, 1ull << 40);
    const int box = 24;
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const int w = 3 + static_cast<int>(rng.next_u64() % 18);
      const int h = 3 + static_cast<int>(rng.next_u64() % 18);
      const int x0 = static_cast<int>(rng.next_u64() % (box - w + 1));
      const int y0 = static_cast<int>(rng.next_u64() % (box - h + 1));
      const bool bite = rng.next_uniform() < 0.5;
      const int corner = static_cast<int>(rng.next_u64() % 4);
      std::vector<LatticePoint> points;
      for (int x = x0; x < x0 + w; ++x) {
        for (int y = y0; y < y0 + h; ++y) {
          if (bite) {
            const bool in_x = (corner % 2 == 0) ? (x < x0 + w / 2)
                                                : (x >= x0 + w - w / 2);
            const bool in_y = (corner / 2 == 0) ? (y < y0 + h / 2)
                                                : (y >= y0 + h - h / 2);
            if (in_x && in_y) continue;
          }
          points.push_back({x, y});
        }
      }
      const LatticeDomain domain = LatticeDomain::from_points(points, box);
      const Eigen::MatrixXd direct =
          green_matrix(domain, GreenMode::direct_solve).matrix();
      const Eigen::MatrixXd boundary =
          green_matrix(domain, GreenMode::boundary_representation).matrix();
      worst = std::max(worst, (direct - boundary).cwiseAbs().maxCoeff());
    }

    const LatticeDomain domino =
        LatticeDomain::from_points({{0, 0}, {1, 0}}, 2);
    const Eigen::MatrixXd gd =
        green_matrix(domino, GreenMode::direct_solve).matrix();
    Eigen::MatrixXd expected(2, 2);
    expected << 16.0 / 15.0, 4.0 / 15.0, 4.0 / 15.0, 16.0 / 15.0;
    const double domino_err = (gd - expected).cwiseAbs().maxCoeff();

    *pass = worst < 1e-8 && domino_err < 1e-10;
    *detail = strf(
        "10 subdomains max|direct-boundary|=%.3e (tol 1e-8); "
        "domino max|G-[[16,4],[4,16]]/15|=%.3e (tol 1e-10)",
        worst, domino_err);
  });
}

// Criterion 2: Gibbs-Markov covariance identity G_V = G_U + Cov(phi^{V,U})
// on nested boxes, with the binding covariance evaluated through discrete
// harmonic measure.
CriterionResult criterion_gibbs_markov_identity(std::uint64_t,
                                                std::ostream* live) {
  return guarded(2, "gibbs_markov_covariance_identity", live,
                 [&](bool* pass, std::string* detail) {
    const int scale = 16;
    const LatticeDomain V = lattice_rectangle(0, 15, 0, 15, scale);
    const LatticeDomain U = lattice_rectangle(4, 11, 4, 11, scale);
    const Eigen::MatrixXd GV = green_matrix(V).matrix();
    const Eigen::MatrixXd GU = green_matrix(U).matrix();

    const DirichletSolver solver(U);
    const std::vector<LatticePoint>& uverts = U.vertices();
    const std::size_t n = uverts.size();

    // Harmonic-measure rows, all against a common boundary ordering.
    const HarmonicMeasureRow first = harmonic_measure_discrete(solver, uverts[0]);
    const std::vector<LatticePoint> boundary = first.boundary;
    std::map<std::pair<int, int>, std::size_t> bindex;
    for (std::size_t j = 0; j < boundary.size(); ++j)
      bindex[{boundary[j].x, boundary[j].y}] = j;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, boundary.size());
    for (std::size_t i = 0; i < n; ++i) {
      const HarmonicMeasureRow row =
          (i == 0) ? first : harmonic_measure_discrete(solver, uverts[i]);
      for (std::size_t j = 0; j < row.boundary.size(); ++j)
        H(i, bindex.at({row.boundary[j].x, row.boundary[j].y})) =
            row.probabilities[j];
    }

    // G_V restricted to U and to the outer boundary of U.
    Eigen::VectorXi uidx(n), bidx(boundary.size());
    for (std::size_t i = 0; i < n; ++i)
      uidx[static_cast<int>(i)] = static_cast<int>(V.require_index(uverts[i]));
    for (std::size_t j = 0; j < boundary.size(); ++j)
      bidx[static_cast<int>(j)] = static_cast<int>(V.require_index(boundary[j]));
    Eigen::MatrixXd GV_uu(n, n), GV_bb(boundary.size(), boundary.size());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        GV_uu(i, j) = GV(uidx[static_cast<int>(i)], uidx[static_cast<int>(j)]);
    for (std::size_t i = 0; i < boundary.size(); ++i)
      for (std::size_t j = 0; j < boundary.size(); ++j)
        GV_bb(i, j) = GV(bidx[static_cast<int>(i)], bidx[static_cast<int>(j)]);

    const Eigen::MatrixXd residual = GV_uu - GU - H * GV_bb * H.transpose();
    const double err = residual.cwiseAbs().maxCoeff();
    *pass = err < 1e-8;
    *detail = strf(
        "nested 16x16/8x8 boxes: max|G_V - G_U - H G_V|_boundary H^T|=%.3e "
        "(tol 1e-8)",
        err);
  });
}

// Criterion 3: potential-kernel normalization and logarithmic growth, on
// the square and triangular lattices.
CriterionResult criterion_potential_kernel(std::uint64_t, std::ostream* live) {
  return guarded(3, "potential_kernel_asymptotics", live,
                 [&](bool* pass, std::string* detail) {
    const double g = constants().g;
    const double diag = potential_kernel(1, 1);
    const double diag_target = 4.0 / M_PI;
    const double diag_err = std::abs(diag - diag_target);

    std::vector<double> lnr, asq, atri;
    for (int k = 0; k <= 10; ++k) {
      const int r = static_cast<int>(std::lround(100.0 * std::pow(10.0, k / 10.0)));
      lnr.push_back(std::log(static_cast<double>(r)));
      asq.push_back(potential_kernel(r, 0));
      atri.push_back(triangular_potential_kernel(r, 0));
    }
    const double slope_sq = lsq_slope(lnr, asq);
    const double slope_tri = lsq_slope(lnr, atri);
    const double tau = std::sqrt(3.0) / M_PI;

    const bool ok_diag = diag_err < 1e-9;
    const bool ok_sq = std::abs(slope_sq - g) < 0.01 * g;
    const bool ok_tri = std::abs(slope_tri - tau) < 0.02 * tau;
    *pass = ok_diag && ok_sq && ok_tri;
    *detail = strf(
        "a(1,1)=%.12f vs 4/pi (err %.2e, tol 1e-9); square slope %.6f vs "
        "g=%.6f (tol 1%%); triangular slope %.6f vs sqrt(3)/pi=%.6f (tol 2%%)",
        diag, diag_err, slope_sq, g, slope_tri, tau);
  });
}

// Criterion 4: conformal radius identities -- exact value on the disc,
// Mobius covariance of rad and invariance of the binding kernel, and the
// fourth-power dilation law of the psi integral.
CriterionResult criterion_conformal_radius(std::uint64_t, std::ostream* live) {
  return guarded(4, "conformal_radius_identities", live,
                 [&](bool* pass, std::string* detail) {
    const HarmonicMeasureEngine disc_engine(unit_disc(),
                                            HarmonicMeasureMethod::disc_analytic);
    const double rad_half = conformal_radius(disc_engine, {0.5, 0.0});
    const double rad_err = std::abs(rad_half - 0.75);

    const MobiusMap f = mobius({0.3, 0.1}, 0.8);
    const std::vector<Vec2> probes = {
        {0.0, 0.0}, {0.3, 0.2}, {-0.5, 0.1}, {0.2, -0.6}, {-0.1, -0.3}};
    double mobius_err = 0.0;
    for (const Vec2& x : probes) {
      const double lhs = conformal_radius(disc_engine, f.map(x));
      const double rhs = conformal_radius(disc_engine, x) * f.derivative_abs(x);
      mobius_err = std::max(mobius_err, std::abs(lhs - rhs));
    }

    // Binding-kernel invariance: C^{D,U}(x,y) = C^{fD,fU}(f(x),f(y)).
    const Disc inner{{0.0, 0.0}, 0.5};
    const Disc image = mobius_image_disc(f, inner);
    const HarmonicMeasureEngine inner_engine(disc({0.0, 0.0}, inner.radius),
                                             HarmonicMeasureMethod::disc_analytic);
    const HarmonicMeasureEngine image_engine(disc(image.center, image.radius),
                                             HarmonicMeasureMethod::disc_analytic);
    const std::vector<std::pair<Vec2, Vec2>> pairs = {
        {{0.1, 0.0}, {0.2, 0.1}},
        {{-0.2, 0.2}, {0.1, -0.1}},
        {{0.0, 0.0}, {0.25, 0.0}}};
    double binding_err = 0.0;
    for (const auto& [x, y] : pairs) {
      const double lhs = binding_covariance(disc_engine, inner_engine, x, y);
      const double rhs =
          binding_covariance(disc_engine, image_engine, f.map(x), f.map(y));
      binding_err = std::max(binding_err, std::abs(lhs - rhs));
    }

    // Dilation: int_{lambda D} rad^2 scales as lambda^4.
    const GaussLegendre& rule = gauss_legendre(32);
    auto psi_integral = [&](double lambda) {
      const HarmonicMeasureEngine engine(disc({0.0, 0.0}, lambda),
                                         HarmonicMeasureMethod::disc_analytic);
      return gl_integrate(rule, 0.0, lambda, [&](double r) {
        const double rad = conformal_radius(engine, {r, 0.0});
        return 2.0 * M_PI * r * rad * rad;
      });
    };
    const double base = psi_integral(1.0);
    double dilation_err = 0.0;
    for (const double lambda : {0.5, 2.0}) {
      const double scaled = psi_integral(lambda);
      const double target = std::pow(lambda, 4.0) * base;
      dilation_err = std::max(dilation_err,
                              std::abs(scaled - target) / std::abs(target));
    }

    *pass = rad_err < 1e-3 && mobius_err < 1e-3 && binding_err < 1e-2 &&
            dilation_err < 1e-6;
    *detail = strf(
        "rad_disc(0.5)=%.9f (err %.2e, tol 1e-3); Mobius rad covariance "
        "max err %.2e (tol 1e-3); binding-kernel invariance max err %.2e "
        "(tol 1e-2); dilation lambda^4 rel err %.2e (tol 1e-6)",
        rad_half, rad_err, mobius_err, binding_err, dilation_err);
  });
}

// Criterion 5: the disc/half-disc binding kernel value at the center, plus
// symmetry and the mean-value (harmonicity) property in each argument.
CriterionResult criterion_binding_kernel_disc(std::uint64_t,
                                              std::ostream* live) {
  return guarded(5, "binding_kernel_disc_pair", live,
                 [&](bool* pass, std::string* detail) {
    const HarmonicMeasureEngine outer(unit_disc(),
                                      HarmonicMeasureMethod::disc_analytic);
    const HarmonicMeasureEngine inner(disc({0.0, 0.0}, 0.5),
                                      HarmonicMeasureMethod::disc_analytic);
    const double g = constants().g;
    const double center = binding_covariance(outer, inner, {0, 0}, {0, 0});
    const double target = g * std::log(2.0);
    const double center_err = std::abs(center - target);

    const std::vector<std::pair<Vec2, Vec2>> pairs = {
        {{0.1, 0.05}, {-0.1, 0.2}}, {{0.3, 0.0}, {0.0, 0.3}}};
    double sym_err = 0.0;
    for (const auto& [x, y] : pairs) {
      sym_err = std::max(sym_err,
                         std::abs(binding_covariance(outer, inner, x, y) -
                                  binding_covariance(outer, inner, y, x)));
    }

    const Vec2 x0{0.1, 0.1}, y0{-0.2, 0.05};
    const double rho = 0.06;
    const int nodes = 16;
    double mean_x = 0.0, mean_y = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const double angle = 2.0 * M_PI * (k + 0.5) / nodes;
      const Vec2 dx{rho * std::cos(angle), rho * std::sin(angle)};
      mean_x += binding_covariance(outer, inner,
                                   {x0.x + dx.x, x0.y + dx.y}, y0);
      mean_y += binding_covariance(outer, inner, x0,
                                   {y0.x + dx.x, y0.y + dx.y});
    }
    const double cxy = binding_covariance(outer, inner, x0, y0);
    const double harm_err = std::max(std::abs(mean_x / nodes - cxy),
                                     std::abs(mean_y / nodes - cxy));

    *pass = center_err < 1e-3 && sym_err < 1e-8 && harm_err < 1e-6;
    *detail = strf(
        "C(0,0)=%.9f vs (2/pi)ln2=%.9f (err %.2e, tol 1e-3); symmetry max "
        "err %.2e (tol 1e-8); mean-value err %.2e (tol 1e-6)",
        center, target, center_err, sym_err, harm_err);
  });
}

}  // namespace

std::vector<CriterionResult> fast_criteria(std::uint64_t seed, int threads,
                                           std::ostream* live) {
  (void)threads;  // the fast criteria are all single-solve numerics
  std::vector<CriterionResult> results;
  results.push_back(criterion_green_constructions(seed, live));
  results.push_back(criterion_gibbs_markov_identity(seed, live));
  results.push_back(criterion_potential_kernel(seed, live));
  results.push_back(criterion_conformal_radius(seed, live));
  results.push_back(criterion_binding_kernel_disc(seed, live));
  return results;
}

}  // namespace dgff
