#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "ubcov/dense.hpp"

namespace ubcov {

/// n observations (rows) of p features. Requires n >= 2, p >= 2 and finite
/// entries; the variance formulas divide by the degrees of freedom, so a
/// single observation is rejected here rather than downstream.
class DataMatrix {
public:
    explicit DataMatrix(Eigen::MatrixXd rows);

    std::size_t n() const noexcept { return static_cast<std::size_t>(x_.rows()); }
    std::size_t p() const noexcept { return static_cast<std::size_t>(x_.cols()); }
    const Eigen::MatrixXd& rows() const noexcept { return x_; }

    /// Copy of the selected observations (in the given order).
    DataMatrix select_rows(std::span<const std::size_t> rows) const;
    /// Copy of the leading `count` columns.
    DataMatrix leading_columns(std::size_t count) const;

private:
    Eigen::MatrixXd x_;
};

/// Sample size together with the Wishart degrees of freedom of the sample
/// covariance: n - 1 after mean-centering, n when the mean is known to be 0.
struct SampleSize {
    std::size_t n = 0;
    std::size_t dof = 0;

    static SampleSize centered(std::size_t n);
    static SampleSize known_mean(std::size_t n);

    bool operator==(const SampleSize&) const = default;
};

struct SampleCovariance {
    DenseSymMatrix matrix;
    SampleSize size;
};

/// centered = false: S = X^T X / n (mean known to be zero).
/// centered = true:  S = (X - Xbar)^T (X - Xbar) / (n - 1).
SampleCovariance sample_covariance(const DataMatrix& x, bool centered);

/// Column-centered copy of the data (column means subtracted).
Eigen::MatrixXd center_columns(const Eigen::MatrixXd& x);

/// Sample correlation matrix; diagonal is exactly 1. Throws
/// std::invalid_argument naming the first zero-variance column.
SampleCovariance sample_correlation(const DataMatrix& x);

}  // namespace ubcov
