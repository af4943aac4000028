#include "dgff/covkernel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <utility>

namespace dgff {

CovKernel::CovKernel(std::vector<Vec2> points, Eigen::MatrixXd matrix,
                     double psd_tolerance)
    : points_(std::move(points)), matrix_(std::move(matrix)) {
  const auto n = matrix_.rows();
  if (n != matrix_.cols() || static_cast<std::size_t>(n) != points_.size())
    throw KernelNotPSD("kernel matrix shape does not match the point list");
  const double asym = (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12)
    throw KernelNotPSD("kernel matrix asymmetry " + std::to_string(asym) +
                       " exceeds 1e-12");
  // Exact symmetrization so downstream factorizations see a symmetric matrix.
  matrix_ = 0.5 * (matrix_ + matrix_.transpose()).eval();

  psd_tolerance_ = psd_tolerance >= 0
                       ? psd_tolerance
                       : 1e-8 * matrix_.trace() + 1e-12 * static_cast<double>(n);

  Eigen::LLT<Eigen::MatrixXd> llt(matrix_);
  if (llt.info() == Eigen::Success) {
    factor_ = llt.matrixL();
    return;
  }
  // Semi-definite or round-off-indefinite input: clamp the spectrum.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix_);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -psd_tolerance_)
    throw KernelNotPSD("smallest eigenvalue " + std::to_string(min_eig) +
                       " is below -tolerance " + std::to_string(psd_tolerance_));
  Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  factor_ = eig.eigenvectors() * clamped.asDiagonal();
}

}  // namespace dgff
