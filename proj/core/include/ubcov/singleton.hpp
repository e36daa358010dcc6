#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "ubcov/data.hpp"
#include "ubcov/estimate.hpp"
#include "ubcov/threshold.hpp"

namespace ubcov {

enum class ThresholdMode { soft, hard };

/// sign(s) (|s| - lambda)_+ entrywise; the diagonal is kept when
/// preserve_diagonal (only meaningful for square input).
Eigen::MatrixXd soft_threshold_dense(const Eigen::MatrixXd& m, double lambda,
                                     bool preserve_diagonal);
DenseSymMatrix soft_threshold_dense(const DenseSymMatrix& m, double lambda,
                                    bool preserve_diagonal);

/// s 1{|s| > lambda} entrywise.
Eigen::MatrixXd hard_threshold_dense(const Eigen::MatrixXd& m, double lambda,
                                     bool preserve_diagonal);

Eigen::MatrixXd threshold_dense(const Eigen::MatrixXd& m, double lambda, ThresholdMode mode,
                                bool preserve_diagonal);

/// S* = [(S_kk'), S1; S1^T, S2] with communities in the leading total(p)
/// columns and the d singletons last.
struct AugmentedSplit {
    BlockStats stats;
    Eigen::MatrixXd s1;  ///< total(p) x d
    Eigen::MatrixXd s2;  ///< d x d
};

AugmentedSplit split_augmented(const DenseSymMatrix& s, const PartitionVector& p, std::size_t d,
                               SampleSize size);

struct AugmentedOptions {
    /// Unset: chosen by the resampling rule over the singleton entries.
    std::optional<double> lambda_singleton;
    ThresholdMode mode = ThresholdMode::soft;
    /// Clip eigenvalues of the assembled estimate at 1e-8 * max eigenvalue.
    bool clip_psd = false;
    bool centered = true;
    std::size_t splits = 50;
    std::size_t grid_size = 20;
    std::uint64_t seed = 0;
};

/// Sigma* estimate: uniform-block part from the leading block, thresholded
/// D1 and D2 (diagonal of D2 kept).
struct AugmentedCov {
    ThetaEstimate theta;
    Eigen::MatrixXd d1;
    Eigen::MatrixXd d2;
    std::size_t d = 0;
    double lambda_singleton = 0.0;
    std::optional<LambdaSelection> selection;
    double min_eigenvalue = 0.0;
    /// Eigenvalue-clipped assembly, only when AugmentedOptions::clip_psd.
    std::optional<Eigen::MatrixXd> clipped;

    const UniformBlockCoords& ub() const noexcept { return theta.coords; }
    std::size_t dim() const noexcept { return theta.coords.dim() + d; }
    /// (p + d) x (p + d) matrix [N(A, B, p), D1; D1^T, D2].
    Eigen::MatrixXd assemble() const;
};

AugmentedCov estimate_augmented(const DataMatrix& x, const PartitionVector& p, std::size_t d,
                                const AugmentedOptions& options);

/// Resampling choice of the singleton level: risk is the squared Frobenius
/// distance between thresholded singleton blocks {0, S1; S1^T, S2} from the
/// n1 part and the raw ones from the n2 part.
LambdaSelection select_singleton_lambda(const DataMatrix& x, const PartitionVector& p,
                                        std::size_t d, const AugmentedOptions& options);

/// Universal dense thresholding of the whole sample covariance (off-diagonal
/// entries only) with the same resampling rule. Baseline estimator.
struct DenseThresholdResult {
    Eigen::MatrixXd estimate;
    LambdaSelection selection;
};

DenseThresholdResult universal_threshold(const DataMatrix& x, ThresholdMode mode,
                                         std::size_t splits, std::size_t grid_size,
                                         std::uint64_t seed, bool centered);

/// Clip eigenvalues below floor_ratio * max eigenvalue.
Eigen::MatrixXd clip_eigenvalues(const Eigen::MatrixXd& m, double floor_ratio);

}  // namespace ubcov
