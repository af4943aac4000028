#pragma once

// Symmetric positive-semidefinite covariance kernel over an ordered point
// list, with a cached factor F such that F F^T reproduces the matrix.

#include <Eigen/Dense>

#include <vector>

#include "dgff/errors.hpp"
#include "dgff/geometry.hpp"

namespace dgff {

class CovKernel {
 public:
  // psd_tolerance < 0 selects the default 1e-8 * trace + 1e-12 * n.  Throws
  // KernelNotPSD when the matrix is asymmetric beyond 1e-12 or has an
  // eigenvalue below -psd_tolerance.
  CovKernel(std::vector<Vec2> points, Eigen::MatrixXd matrix,
            double psd_tolerance = -1.0);

  std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }
  const std::vector<Vec2>& points() const { return points_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  double psd_tolerance() const { return psd_tolerance_; }

  // Lower-triangular when the Cholesky factorization succeeds; otherwise the
  // eigenvalue-clamped symmetric square root.
  const Eigen::MatrixXd& factor() const { return factor_; }

  // factor() * z, the sampling map for iid standard normal z.
  Eigen::VectorXd color(const Eigen::VectorXd& z) const { return factor_ * z; }

 private:
  std::vector<Vec2> points_;
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd factor_;
  double psd_tolerance_ = 0.0;
};

}  // namespace dgff
