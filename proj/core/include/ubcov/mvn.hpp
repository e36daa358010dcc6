#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "ubcov/data.hpp"
#include "ubcov/dense.hpp"
#include "ubcov/uniform_block.hpp"

namespace ubcov {

/// Draws N(0, Sigma) samples as X = Z L^T with L the lower Cholesky factor.
/// The factorization is done once; draws are pure functions of (n, seed).
class MvnSampler {
public:
    /// Throws NotPositiveDefiniteError if the Cholesky factorization fails or
    /// a pivot falls below 1e-14 times the largest diagonal entry.
    explicit MvnSampler(const DenseSymMatrix& sigma);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(lower_.rows()); }
    const Eigen::MatrixXd& cholesky_factor() const noexcept { return lower_; }

    DataMatrix draw(std::size_t n, std::uint64_t seed) const;

private:
    Eigen::MatrixXd lower_;
};

/// n x p matrix of i.i.d. standard normals, filled row by row.
Eigen::MatrixXd standard_normal_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

DataMatrix sample_mvn(std::size_t n, const DenseSymMatrix& sigma, std::uint64_t seed);
DataMatrix sample_mvn(std::size_t n, const UniformBlockCoords& sigma, std::uint64_t seed);

/// sigma_scale * G^T G with G a p x p standard normal matrix: a Wishart
/// matrix with p degrees of freedom and scale sigma_scale * I (mean
/// sigma_scale * p * I).
DenseSymMatrix wishart_perturbation(std::size_t p, double sigma_scale, std::uint64_t seed);

}  // namespace ubcov
