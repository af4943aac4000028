#pragma once

// Critical multiplicative-chaos measures built from truncated Green kernels:
// smooth Gaussian fields phi_t, the square-root-normalized measure
//
//   M_t(dx) = sqrt(t) exp{ alpha phi_t(x) - alpha^2 Var phi_t(x) / 2 } psi(x) dx,
//
// the Girsanov tilt identity for its Laplace functional, Laplace/Cauchy tail
// estimators, the derivative-martingale construction on triangular
// partitions with truncation events, and Kahane's convexity inequality.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dgff/covkernel.hpp"
#include "dgff/errors.hpp"
#include "dgff/fields.hpp"
#include "dgff/harmonic_continuum.hpp"
#include "dgff/heat_kernel.hpp"
#include "dgff/rng.hpp"
#include "dgff/stats.hpp"
#include "dgff/tiling.hpp"

namespace dgff {

struct GridMeasure {
  std::vector<Vec2> centers;
  std::vector<double> masses;
  double t = 0.0;
  double cell_area = 0.0;  // 0 when cells are not uniform squares
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  double total() const;
};

// Gaussian field phi_t with covariance G_t over the kernel grid.
class PhiSampler {
 public:
  explicit PhiSampler(const TruncatedKernel& kernel);

  const TruncatedKernel& kernel() const { return kernel_; }
  const Eigen::VectorXd& variances() const { return variances_; }

  FieldSample sample(RngStream& rng) const;
  FieldSample sample(std::uint64_t master_seed, std::uint64_t stream_id) const;

 private:
  TruncatedKernel kernel_;
  CovKernel cov_;
  Eigen::VectorXd variances_;
};

FieldSample sample_phi_t(const TruncatedKernel& kernel, RngStream& rng);

// Seneta-Heyde normalized measure of one field draw.  phi must live on the
// kernel grid (GridMismatch otherwise); psi supplies the density value and
// cell area by locating each grid point in its cell.  Each cell mass has
// exact expectation sqrt(t) psi dx.
GridMeasure seneta_heyde_measure(const FieldSample& phi,
                                 const TruncatedKernel& kernel,
                                 const DensityField& psi);

// Convergence diagnostic: empirical mean of M_t(D) against the exact
// expectation sqrt(t) sum psi dx over a ladder of t values.
struct LadderDiagnostic {
  std::vector<double> t_values;
  std::vector<double> mean_total;
  std::vector<double> expected_total;
  std::vector<double> ratio;  // mean / expected, 1 in expectation
};

LadderDiagnostic seneta_heyde_ladder(const ContinuumDomain& domain,
                                     const DensityField& psi,
                                     const std::vector<double>& t_values,
                                     std::size_t replicas,
                                     std::uint64_t master_seed,
                                     const TruncatedGreenOptions& options = {});

// Girsanov tilt identity for the Laplace functional: for every x and
// lambda >= 0,
//
//   E[ W(x) e^{-lambda M(D)} ] = E[ exp{-lambda sum_y e^{alpha^2 G_t(x,y)} m(y)} ],
//
// with W(x) = e^{alpha phi(x) - alpha^2 Var(x)/2} the normalized tilt and
// m(y) the cell masses.  Both sides are estimated on independent replica
// banks shared across all requested configurations; each report carries the
// z-score of the difference.
class GirsanovTester {
 public:
  GirsanovTester(TruncatedKernel kernel, DensityField psi);

  struct Config {
    std::size_t point_index = 0;
    double lambda = 0.0;
  };

  std::vector<StatReport> check(const std::vector<Config>& configs,
                                std::size_t replicas_per_side,
                                std::uint64_t master_seed,
                                std::uint64_t lhs_stream_base = 0,
                                std::uint64_t rhs_stream_base = 1u << 20,
                                double z_bound = 4.0) const;

  const PhiSampler& sampler() const { return sampler_; }
  const std::vector<double>& psi_values() const { return psi_values_; }
  double cell_area() const { return cell_area_; }

 private:
  PhiSampler sampler_;
  std::vector<double> psi_values_;  // psi at the grid points
  double cell_area_ = 0.0;
};

// E[ M(A) e^{-lambda M(D)} ] / log(1/lambda) from per-replica mass pairs;
// approaches a multiple of int_A psi as lambda -> 0.
StatReport laplace_tail(const std::vector<double>& mass_a,
                        const std::vector<double>& mass_d, double lambda,
                        std::size_t min_samples = 10000);

// threshold * P(M > threshold), the Cauchy-type tail constant.
StatReport cauchy_tail(const std::vector<double>& masses, double threshold,
                       std::size_t min_samples = 100000,
                       std::size_t min_exceedances = 30);

// Derivative-martingale measure on a triangular partition: per interior
// triangle T with shrunk core T',
//
//   mass(T) = 1_{A_T} int_{T'} alpha (alpha Var Phi - Phi)
//             e^{alpha Phi - alpha^2 Var Phi / 2} psi dx,
//
// where Phi is the binding field of the triangulation (covariance
// C^{D, union of triangles}) and the truncation event A_T requires the
// oscillation of Phi on T' to stay below osc_bound and its maximum below
// 2 sqrt(g) log K - max_shift.  Integrals use a degree-5 7-point rule,
// refined fourfold when the observed oscillation approaches the bound; all
// refined nodes take part in the single joint Gaussian draw.
struct DerivativeMartingaleOptions {
  double osc_bound = 6.0;
  double max_shift = 6.0;
  double refine_margin = 0.1;
  HarmonicMeasureMethod method = HarmonicMeasureMethod::automatic;
  int lattice_scale = 512;
  std::size_t dense_limit = 20000;  // PartitionTooFine beyond this many nodes
  // Slack for the quadrature-built covariance: eigenvalues above
  // -psd_tolerance are clamped to zero, lower ones raise KernelNotPSD.
  double psd_tolerance = 0.05;
};

class DerivativeMartingale {
 public:
  DerivativeMartingale(const ContinuumDomain& domain,
                       const TriangularPartition& partition,
                       const DerivativeMartingaleOptions& options = {});

  std::size_t triangle_count() const { return triangle_count_; }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  const CovKernel& kernel() const { return *kernel_; }

  struct Sample {
    GridMeasure measure;           // centers are triangle centroids
    std::size_t active = 0;        // triangles whose truncation event held
    std::size_t refined = 0;       // triangles evaluated on the refined rule
    std::size_t negative_nodes = 0;  // active-triangle nodes with negative integrand
  };

  Sample sample(RngStream& rng) const;
  Sample sample(std::uint64_t master_seed, std::uint64_t stream_id) const;

 private:
  std::size_t triangle_count_ = 0;
  int mesh_ = 1;
  DerivativeMartingaleOptions options_;
  std::vector<Vec2> centroids_;
  std::vector<Vec2> nodes_;            // 35 nodes per triangle (7 + 4 x 7)
  std::vector<double> node_weights_;   // quadrature weight x area, per node
  std::vector<double> psi_nodes_;
  std::unique_ptr<CovKernel> kernel_;  // binding covariance over the nodes
  Eigen::VectorXd variances_;
};

// E exp(- sum_i sigma_i e^{X_i - Var_i / 2}) is larger under the entrywise
// larger covariance; checks the direction on independent replica banks.
// Throws CovarianceNotOrdered unless hi >= lo entrywise (1e-10 slack).
StatReport kahane_check(const CovKernel& hi, const CovKernel& lo,
                        const std::vector<double>& sigma,
                        std::size_t replicas, std::uint64_t master_seed,
                        std::uint64_t hi_stream_base = 0,
                        std::uint64_t lo_stream_base = 1u << 20);

// Deterministic 1-D quadrature of E exp(-sigma e^{X - v/2}), X ~ N(0, v).
double lognormal_laplace_moment(double sigma, double variance);

}  // namespace dgff
