#pragma once

#include <Eigen/Core>

#include "ubcov/data.hpp"
#include "ubcov/uniform_block.hpp"

namespace ubcov {

/// Exact finite-sample (co)variances of the block-mean estimators and of
/// theta-tilde for Gaussian data. Every formula carries the Wishart degrees
/// of freedom `size.dof` in the denominator; the std::size_t overloads take
/// a sample size n and use dof = n - 1 (mean-centered regime).

/// Per-parameter variances of theta-tilde, canonical order, from the closed
/// forms var(a_kk), var(b_kk), var(b_kk').
Eigen::VectorXd exact_variance_theta(const UniformBlockCoords& theta, SampleSize size);
Eigen::VectorXd exact_variance_theta(const UniformBlockCoords& theta, std::size_t n);

/// q x q covariance of the block means psi = (alpha_11..alpha_KK, beta_11,
/// beta_12, ..., beta_KK), built entry by entry from the case table over the
/// index overlap of the two parameters.
Eigen::MatrixXd block_mean_covariance(const UniformBlockCoords& theta, SampleSize size);

/// Linear map Phi_p with theta-tilde = Phi_p psi-tilde. Per community the
/// (a_kk, b_kk) rows are (1/(p_k - 1)) [[p_k, -p_k], [-1, p_k]] against
/// (alpha_kk, beta_kk); off-diagonal b_kk' = beta_kk'.
Eigen::MatrixXd moment_transform(const PartitionVector& p);

/// Phi_p cov(psi) Phi_p^T.
Eigen::MatrixXd exact_covariance_matrix(const UniformBlockCoords& theta, SampleSize size);
Eigen::MatrixXd exact_covariance_matrix(const UniformBlockCoords& theta, std::size_t n);

/// psi as a vector (alpha then upper-triangular beta) for given coordinates.
Eigen::VectorXd block_mean_vector(const UniformBlockCoords& theta);

}  // namespace ubcov
