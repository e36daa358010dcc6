#pragma once

#include <Eigen/Core>

#include "ubcov/uniform_block.hpp"

namespace ubcov {

/// ||N(x) - N(y)||_F from coordinates alone:
///   sum_k p_k (d_alpha_k)^2 + sum_k p_k (p_k - 1) (d_b_kk)^2
///     + sum_{k != k'} p_k p_k' (d_b_kk')^2,
/// where alpha_k = a_kk + b_kk is the common diagonal value of block k.
double frobenius_ub(const UniformBlockCoords& x, const UniformBlockCoords& y);

/// Squared version; cheaper inside resampling loops.
double frobenius_ub_squared(const UniformBlockCoords& x, const UniformBlockCoords& y);

/// ||N(x) - N(y)||_S = max |eigenvalue| of the coordinate difference.
double spectral_ub(const UniformBlockCoords& x, const UniformBlockCoords& y);

double frobenius_dense(const Eigen::MatrixXd& m);

/// Spectral norm of a symmetric matrix (max |eigenvalue|).
double spectral_dense_sym(const Eigen::MatrixXd& m);

}  // namespace ubcov
