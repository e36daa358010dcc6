#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "ubcov/data.hpp"
#include "ubcov/dense.hpp"
#include "ubcov/partition.hpp"
#include "ubcov/uniform_block.hpp"

namespace ubcov {

/// Per-block summaries of a sample covariance: tr(S_kk) and sum(S_kk').
/// These are sufficient for every estimator in this library.
struct BlockStats {
    SampleSize size;
    PartitionVector partition;
    Eigen::VectorXd trace_diag;
    Eigen::MatrixXd block_sum;
};

/// Aggregates a dense p x p sample covariance.
BlockStats block_stats(const DenseSymMatrix& s, const PartitionVector& p, SampleSize size);
/// Convenience overload: `n` is the sample size of a mean-centered S (dof n - 1).
BlockStats block_stats(const DenseSymMatrix& s, const PartitionVector& p, std::size_t n);

/// Same statistics computed directly from data in O(n p + n K^2), without
/// forming S. Uses per-observation block row sums.
BlockStats block_stats_from_data(const DataMatrix& x, const PartitionVector& p, bool centered);

/// Estimated coordinates with their block-mean parameterization and the
/// exact finite-sample covariance evaluated at the estimate.
///
///   alpha_kk = tr(S_kk) / p_k         (mean of block diagonal)
///   beta_kk' = sum(S_kk') / (p_k p_k') (mean of all block entries)
///
/// Parameter order for cov_theta and se is
/// (a_11, ..., a_KK, b_11, b_12, ..., b_1K, b_22, ..., b_KK).
struct ThetaEstimate {
    UniformBlockCoords coords;
    Eigen::VectorXd alpha;
    Eigen::MatrixXd beta;
    SampleSize size;
    Eigen::MatrixXd cov_theta;
    Eigen::VectorXd se;
};

ThetaEstimate estimate_theta(const BlockStats& stats);

/// Coordinates only (no covariance). Used inside resampling loops.
UniformBlockCoords estimate_coords(const BlockStats& stats);

/// Wraps coordinates that were produced elsewhere (e.g. thresholding) into a
/// ThetaEstimate, recomputing alpha, beta, and the plug-in covariance.
ThetaEstimate theta_from_coords(const UniformBlockCoords& coords, SampleSize size);

UniformBlockCoords plugin_covariance(const ThetaEstimate& theta);

/// (A^{-1}, -Delta^{-1} B A^{-1}) at the estimate. Throws
/// NotPositiveDefiniteError when A or Delta has a non-positive eigenvalue.
UniformBlockCoords plugin_precision(const ThetaEstimate& theta);

/// Correlation-matrix variant: standardize columns, then estimate. The
/// estimates satisfy a_kk + b_kk = 1 up to rounding.
ThetaEstimate estimate_correlation_mode(const DataMatrix& x, const PartitionVector& p);

/// Full pipeline: sample covariance -> block stats -> theta.
ThetaEstimate estimate_from_data(const DataMatrix& x, const PartitionVector& p, bool centered);

/// theta as a q-vector in the canonical order.
Eigen::VectorXd theta_vector(const UniformBlockCoords& coords);
/// Inverse of theta_vector.
UniformBlockCoords coords_from_theta(const Eigen::VectorXd& theta, const PartitionVector& p);
/// "a_1_1", ..., "b_1_2", ... (1-based) in the canonical order.
std::vector<std::string> theta_names(std::size_t communities);
/// Index of b_kl (k <= l expected, either order accepted) inside theta.
std::size_t theta_index_b(std::size_t communities, std::size_t k, std::size_t l);

}  // namespace ubcov
