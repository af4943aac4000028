#pragma once

// Estimators over Monte-Carlo ensembles of extremal data: exponential
// intensity fits, Gumbel-type tail ratios, argmax location densities,
// distributional stability checks, and two-sample Kolmogorov-Smirnov tests.
// Every estimator returns a StatReport carrying its tolerance and verdict.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dgff/errors.hpp"
#include "dgff/geometry.hpp"
#include "dgff/harmonic_continuum.hpp"
#include "dgff/lattice.hpp"

namespace dgff {

struct StatReport {
  std::string estimator;
  std::vector<std::pair<std::string, double>> params;  // insertion-ordered
  double estimate = 0.0;
  double standard_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Maximum-likelihood rate of an exponential law truncated to the window
// [t0, t1], fitted to the centered heights falling inside the window.  The
// verdict compares the fitted rate against target_rate at the given relative
// tolerance.  Throws WindowEmpty when fewer than min_count samples land in
// the window.
StatReport intensity_profile(const std::vector<double>& centered_heights,
                             double t0, double t1, double target_rate,
                             double rel_tolerance = 0.10,
                             std::size_t min_count = 1000);

// Right-tail ratio e^{alpha_rate * t} P(X > t) / t of centered maxima at one
// threshold.  Throws InsufficientExceedances when fewer than min_exceedances
// samples exceed the threshold.  The report itself carries no verdict
// (pass is set, with infinite tolerance); flatness across thresholds is
// judged by tail_ratio_flatness.
StatReport tail_ratio(const std::vector<double>& centered_maxima,
                      double threshold, double alpha_rate,
                      std::size_t min_exceedances = 100);
std::vector<StatReport> tail_ratio(const std::vector<double>& centered_maxima,
                                   const std::vector<double>& thresholds,
                                   double alpha_rate,
                                   std::size_t min_exceedances = 100);

// max/min of the tail-ratio point estimates; passes when below the bound.
StatReport tail_ratio_flatness(const std::vector<StatReport>& ratios,
                               double max_over_min_bound = 1.5);

// Per-cell ratio of the empirical argmax histogram to the normalized cell
// masses of the density field (both normalized to probability).  One report
// per cell that received at least one hit; cells are judged at the given
// relative tolerance only when their expected count is at least
// min_expected_hits.
std::vector<StatReport> argmax_density(const std::vector<Vec2>& positions,
                                       const DensityField& psi,
                                       double rel_tolerance = 0.5,
                                       double min_expected_hits = 25.0);

// Sums factor x factor blocks of a density field into a coarser field whose
// per-cell integrals match the fine ones.  nx and ny must be divisible by
// factor.
DensityField aggregate_density(const DensityField& psi, int factor);

// Pooled comparison between the four corner blocks and one centered block of
// cells: estimates (corner rate / corner density) / (center rate / center
// density), which should be 1.  corner_cells and center_cells are the block
// side lengths in cells.
StatReport argmax_corner_center_ratio(const std::vector<Vec2>& positions,
                                      const DensityField& psi,
                                      int corner_cells, int center_cells,
                                      double rel_tolerance = 0.25,
                                      std::size_t min_events = 200);

// Kolmogorov-Smirnov distance between the empirical laws of two samples.
double ks_distance(std::vector<double> a, std::vector<double> b);

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value; passes
// when p >= significance.
StatReport two_sample_ks(const std::vector<double>& a,
                         const std::vector<double>& b,
                         double significance = 0.01,
                         const std::string& name = "two_sample_ks");

// Distributional stability of the centered maximum across consecutive
// scales: KS distance plus mean shift, passing when the KS distance is below
// ks_bound.
StatReport max_law_stability(const std::vector<double>& coarse,
                             const std::vector<double>& fine,
                             double ks_bound = 0.05);

// Fraction of replicas whose point list contains a pair at intermediate
// lattice separation r < |x - y| < N/r (Euclidean).  Diagnostic: passes when
// the fraction is at most bound.
StatReport separation_probability(
    const std::vector<std::vector<LatticePoint>>& replicas, double r, int scale,
    double bound = 1.0);

// Mean and standard error of the level-set sizes (diagnostic; passes when
// the mean is at most bound).
StatReport level_set_size(const std::vector<std::size_t>& sizes,
                          double bound);

}  // namespace dgff
