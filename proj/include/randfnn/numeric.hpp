#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "randfnn/dataset.hpp"

namespace randfnn {

/// A decomposition produced a non-finite solution.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Minimum-Euclidean-norm least-squares solve of design * beta ~= rhs via a
/// rank-revealing complete orthogonal decomposition. Rank deficiency is not
/// an error: diagonal entries below max(N,m) * eps relative to the largest
/// are treated as zero and the minimum-norm solution is returned. One step of
/// iterative refinement tightens residual orthogonality.
inline Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& design,
                                           const Eigen::VectorXd& rhs) {
  if (design.rows() < 1 || design.cols() < 1)
    throw std::invalid_argument("solve_least_squares: empty system");
  if (design.rows() != rhs.size())
    throw std::invalid_argument("solve_least_squares: row count mismatch");
  if (!design.allFinite() || !rhs.allFinite())
    throw std::invalid_argument("solve_least_squares: non-finite entry");

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(static_cast<double>(std::max(design.rows(), design.cols())) *
                   Eigen::NumTraits<double>::epsilon());
  cod.compute(design);
  Eigen::VectorXd beta = cod.solve(rhs);
  beta += cod.solve(rhs - design * beta);
  if (!beta.allFinite())
    throw SolverError("solve_least_squares: decomposition produced non-finite solution");
  return beta;
}

/// Affine model y = slopes . x + intercept fitted to a neighborhood.
struct HyperplaneFit {
  Eigen::VectorXd slopes;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

/// Least-squares affine fit over the anchor and all k members (k+1 points) on
/// the augmented design [X | 1]. Collinear or constant neighborhoods yield the
/// minimum-norm fit; a flat local model is the correct answer there, not an
/// error.
inline HyperplaneFit fit_hyperplane(const Neighborhood& nb) {
  const Index k = nb.members.rows();
  const Index n = nb.members.cols();
  if (k < n)
    throw std::invalid_argument("fit_hyperplane: fewer than n+1 points");

  Eigen::MatrixXd design(k + 1, n + 1);
  Eigen::VectorXd rhs(k + 1);
  design.row(0).head(n) = nb.anchor.transpose();
  design(0, n) = 1.0;
  rhs(0) = nb.anchor_target;
  design.block(1, 0, k, n) = nb.members;
  design.col(n).tail(k).setOnes();
  rhs.tail(k) = nb.member_targets;

  const Eigen::VectorXd coef = solve_least_squares(design, rhs);
  HyperplaneFit fit;
  fit.slopes = coef.head(n);
  fit.intercept = coef(n);
  fit.residual_rms =
      std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(k + 1));
  return fit;
}

}  // namespace randfnn
