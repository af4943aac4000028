#pragma once

// Green function of the simple random walk killed on exiting a lattice
// domain, and the discrete harmonic measure (exit distribution).

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <vector>

#include "dgff/covkernel.hpp"
#include "dgff/lattice.hpp"

namespace dgff {

enum class GreenMode { direct_solve, boundary_representation };

// Sparse factorization of I - P on a lattice domain (P the SRW kernel killed
// outside).  Shareable and thread-safe after construction.
class DirichletSolver {
 public:
  explicit DirichletSolver(LatticeDomain domain);

  const LatticeDomain& domain() const { return domain_; }
  const Eigen::SparseMatrix<double>& system() const { return system_; }

  // (I - P)^-1 rhs.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  // x with Cov(x) = (I - P)^-1 for iid standard normal z.
  Eigen::VectorXd color(const Eigen::VectorXd& z) const;

 private:
  LatticeDomain domain_;
  Eigen::SparseMatrix<double> system_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

// The sparse system I - P itself.
Eigen::SparseMatrix<double> lattice_system(const LatticeDomain& domain);

// Full Green matrix G = (I - P)^-1.  direct_solve inverts the sparse system;
// boundary_representation evaluates
//   G(x,y) = -a(x-y) + sum_{z in outer boundary} H(x,z) a(y-z)
// with a the potential kernel and H the harmonic measure.  Throws
// DenseLimitExceeded above the dense limit.
CovKernel green_matrix(const LatticeDomain& domain,
                       GreenMode mode = GreenMode::direct_solve,
                       std::size_t dense_limit = 8192);

// Selected rows of the Green matrix (one sparse solve per source).
Eigen::MatrixXd green_rows(const DirichletSolver& solver,
                           const std::vector<LatticePoint>& sources);

struct HarmonicMeasureRow {
  LatticePoint source;
  std::vector<LatticePoint> boundary;   // outer boundary, row-major order
  std::vector<double> probabilities;    // sum to 1
};

// Exit distribution of the SRW from `source` over the outer boundary, via the
// adjoint identity H(x,z) = (1/4) sum_{y in L, y ~ z} G(x,y).
HarmonicMeasureRow harmonic_measure_discrete(const LatticeDomain& domain,
                                             LatticePoint source);
HarmonicMeasureRow harmonic_measure_discrete(const DirichletSolver& solver,
                                             LatticePoint source);

}  // namespace dgff
