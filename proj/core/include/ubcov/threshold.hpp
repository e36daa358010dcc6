#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ubcov/data.hpp"
#include "ubcov/estimate.hpp"
#include "ubcov/uniform_block.hpp"

namespace ubcov {

/// How the thresholding level is obtained.
enum class LambdaRule {
    fixed,     ///< use `lambda` as given
    rate,      ///< lambda = c_constant * sqrt(log K / n)
    resample,  ///< minimize the split-sample risk over a grid
};

struct ThresholdConfig {
    LambdaRule rule = LambdaRule::resample;
    double lambda = 0.0;
    double c_constant = 1.0;
    std::size_t splits = 50;
    std::size_t grid_size = 20;
    /// Explicit grid; overrides grid_size when non-empty.
    std::vector<double> grid;
    std::uint64_t seed = 0;
    /// Leave a_kk untouched (keeps A positive when the raw estimate is).
    bool exempt_diagonal = false;
    bool centered = true;

    static ThresholdConfig fixed(double lambda);
    static ThresholdConfig rate(double c_constant);
    static ThresholdConfig resampled(std::uint64_t seed);

    /// Throws std::invalid_argument on a negative lambda, non-positive C,
    /// zero splits, or grid_size < 2.
    void validate() const;
};

/// a_kk 1{|a_kk| > lambda}, b_kk' 1{|b_kk'| > lambda}. lambda = 0 returns the input.
UniformBlockCoords hard_threshold_theta(const UniformBlockCoords& theta, double lambda,
                                        bool exempt_diagonal = false);
UniformBlockCoords hard_threshold_theta(const ThetaEstimate& theta, double lambda,
                                        bool exempt_diagonal = false);

/// Nonzero entries among the q free parameters.
std::size_t surviving_count(const UniformBlockCoords& theta);

/// C * sqrt(log K / n).
double rate_lambda(double c_constant, std::size_t communities, std::size_t n);

/// grid_size log-spaced levels from (min nonzero |theta|) / 2 to max |theta|.
std::vector<double> lambda_grid(const UniformBlockCoords& theta, std::size_t grid_size);

struct SplitSizes {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

/// n2 = ceil(n / log n), n1 = n - n2. Throws std::invalid_argument when either
/// part would hold fewer than two observations.
SplitSizes split_sizes(std::size_t n);

struct LambdaSelection {
    double lambda = 0.0;
    std::vector<double> grid;
    std::vector<double> risk;
};

/// Resampling choice of lambda: for each of cfg.splits random splits, the
/// risk at level t is the squared Frobenius distance (in closed form)
/// between the thresholded estimate from the n1 part and the raw estimate
/// from the n2 part. Risks are averaged over splits; the argmin wins and
/// ties go to the larger level.
LambdaSelection select_lambda(const DataMatrix& x, const PartitionVector& p,
                              const ThresholdConfig& cfg);

struct LargeKResult {
    UniformBlockCoords raw;
    UniformBlockCoords coords;
    double lambda = 0.0;
    std::optional<LambdaSelection> selection;
    std::size_t surviving = 0;
    /// Share of off-diagonal b_kk' (k < k') set to zero.
    double offdiag_sparsity = 0.0;
    /// Some a_kk was thresholded to zero (the estimate is then singular).
    bool diagonal_zeroed = false;
    PdReport pd;
};

/// sample covariance -> block stats -> theta -> lambda -> hard threshold.
LargeKResult estimate_large_k(const DataMatrix& x, const PartitionVector& p,
                              const ThresholdConfig& cfg);

}  // namespace ubcov
