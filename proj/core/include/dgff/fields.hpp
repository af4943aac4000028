#pragma once

// Exact samplers for the lattice free field: sparse Cholesky coloring, the
// sine eigenbasis on rectangles, the Gibbs-Markov decomposition for general
// domains, the continuum binding field, and the triangular-lattice field.
// Every sampler is an exact (non-approximate, non-MCMC) Gaussian draw.

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <vector>

#include "dgff/covkernel.hpp"
#include "dgff/errors.hpp"
#include "dgff/geometry.hpp"
#include "dgff/green.hpp"
#include "dgff/harmonic_continuum.hpp"
#include "dgff/lattice.hpp"
#include "dgff/rng.hpp"

namespace dgff {

// One realization of a Gaussian field with its seed provenance.  Lattice
// fields carry the LatticeDomain and the (integer) vertex coordinates as
// points; point-cloud fields (binding field, triangular field) leave the
// lattice empty and store the continuum evaluation points.
struct FieldSample {
  LatticeDomain lattice;     // empty for point-cloud fields
  std::vector<Vec2> points;  // one per value
  Eigen::VectorXd values;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

enum class SamplerMethod {
  cholesky,        // sparse Cholesky coloring; vertex count capped
  sine_transform,  // explicit sine eigenbasis; full rectangles only
  gibbs_markov,    // rectangle sample minus harmonic extension; any domain
};

// Exact draw of the rectangle field (covariance (I-P)^{-1}) via the sine
// eigenbasis of I - P, evaluated with a fast RODFT00 transform.  Values are
// row-major (y outer, x inner); the normal draws are consumed over frequency
// pairs (ky = 1..height, kx = 1..width), ky outer.
Eigen::VectorXd sine_rectangle_sample(int width, int height, RngStream& rng);

// Field sampler with cached factorizations.  sample() is const and
// thread-safe, so replicas with distinct stream ids can run concurrently
// against one shared sampler.
class DgffSampler {
 public:
  DgffSampler(LatticeDomain domain, SamplerMethod method,
              std::size_t dense_limit = 10000);

  const LatticeDomain& domain() const { return domain_; }
  SamplerMethod method() const { return method_; }

  FieldSample sample(RngStream& rng) const;
  FieldSample sample(std::uint64_t master_seed, std::uint64_t stream_id) const;

 private:
  LatticeDomain domain_;
  SamplerMethod method_;
  std::vector<Vec2> point_cache_;
  int rect_width_ = 0, rect_height_ = 0;  // sine path (domain or hull)
  bool domain_is_rectangle_ = false;
  LatticeDomain hull_;  // gibbs_markov: full rectangle on the bounding box
  std::unique_ptr<const DirichletSolver> solver_;
};

// One-shot convenience wrapper (builds the factorization each call).
FieldSample sample_dgff(const LatticeDomain& domain, SamplerMethod method,
                        RngStream& rng, std::size_t dense_limit = 10000);

// Split of a field on V along a subdomain U: phi agrees with h off U and is
// the discrete-harmonic extension of those values inside U; bulk = h - phi
// restricted to U has the law of the field on U and is independent of phi.
struct GibbsMarkovSplit {
  FieldSample phi;   // on the full domain of h
  FieldSample bulk;  // on the subdomain
};

GibbsMarkovSplit gibbs_markov_decompose(const FieldSample& h,
                                        const LatticeDomain& inner);
// Same with a prebuilt solver for the subdomain (reused across draws).
GibbsMarkovSplit gibbs_markov_decompose(const FieldSample& h,
                                        const DirichletSolver& inner_solver);

// Gaussian field on continuum points with the two-domain binding covariance
// (the difference of the boundary log-integrals of the outer and inner
// domains).  The covariance matrix is assembled once and factorized; a
// KernelNotPSD error signals that the harmonic-measure quadrature must be
// refined.
class BindingFieldSampler {
 public:
  BindingFieldSampler(const ContinuumDomain& outer, const ContinuumDomain& inner,
                      std::vector<Vec2> points,
                      HarmonicMeasureMethod method = HarmonicMeasureMethod::automatic,
                      int lattice_scale = 512);

  const CovKernel& kernel() const { return kernel_; }
  FieldSample sample(RngStream& rng) const;
  FieldSample sample(std::uint64_t master_seed, std::uint64_t stream_id) const;

 private:
  CovKernel kernel_;
};

FieldSample sample_binding_field(const ContinuumDomain& outer,
                                 const ContinuumDomain& inner,
                                 const std::vector<Vec2>& points, RngStream& rng,
                                 HarmonicMeasureMethod method = HarmonicMeasureMethod::automatic,
                                 int lattice_scale = 512);

// Triangular lattice: integer coordinates (m, n) stand for m*u + n*v with
// u = (1, 0) and v = (1/2, sqrt(3)/2); each site has six nearest neighbours.
inline constexpr std::array<LatticePoint, 6> kTriangularOffsets{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}};

class TriangularDomain {
 public:
  TriangularDomain() = default;

  static TriangularDomain from_points(std::vector<LatticePoint> points, int mesh = 1);

  int mesh() const { return mesh_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  // Vertices sorted by n, then m.
  const std::vector<LatticePoint>& vertices() const { return vertices_; }
  bool is_vertex(int m, int n) const;
  std::optional<std::size_t> vertex_index(LatticePoint p) const;

  // Continuum position (m*u + n*v) / mesh.
  Vec2 embed(LatticePoint p) const;

 private:
  int mesh_ = 1;
  std::vector<LatticePoint> vertices_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

// The patch {(m, n) : m >= 0, n >= 0, m + n <= side}.
TriangularDomain triangular_patch(int side, int mesh = 1);

// Field on a triangular-lattice region with covariance (2/sqrt(3)) * G,
// where G = (I - P)^{-1} and P is the kernel of the six-neighbour walk
// killed on exiting the region (dense factorization).
class TriangularSampler {
 public:
  explicit TriangularSampler(TriangularDomain domain,
                             std::size_t dense_limit = 10000);

  const TriangularDomain& domain() const { return domain_; }
  // The unscaled Green matrix G (the sampler covariance is (2/sqrt(3)) G).
  Eigen::MatrixXd green() const;

  FieldSample sample(RngStream& rng) const;
  FieldSample sample(std::uint64_t master_seed, std::uint64_t stream_id) const;

 private:
  TriangularDomain domain_;
  std::vector<Vec2> point_cache_;
  Eigen::LLT<Eigen::MatrixXd> llt_;  // of I - P
};

FieldSample sample_triangular_field(const TriangularDomain& domain, RngStream& rng,
                                    std::size_t dense_limit = 10000);

// Unbiased sample covariance with per-entry Monte Carlo standard errors
// (normal-theory formula: Var(S_ij) ~ (S_ii S_jj + S_ij^2) / (n - 1)).
struct EmpiricalCovariance {
  CovKernel kernel;
  Eigen::MatrixXd standard_errors;
  std::size_t sample_count = 0;
};

// Streaming accumulator so large replica sets need not be stored.
class CovarianceAccumulator {
 public:
  explicit CovarianceAccumulator(std::vector<Vec2> points);

  void add(const Eigen::VectorXd& values);
  void add(const FieldSample& sample);  // checks the point list matches
  std::size_t count() const { return count_; }

  EmpiricalCovariance finalize() const;  // InsufficientSamples if count < 2

 private:
  std::vector<Vec2> points_;
  Eigen::VectorXd sum_;
  Eigen::MatrixXd sumsq_;  // lower triangle
  std::size_t count_ = 0;
};

EmpiricalCovariance empirical_covariance(const std::vector<FieldSample>& samples);

}  // namespace dgff
