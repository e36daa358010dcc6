#include "ubcov/mvn.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "ubcov/error.hpp"
#include "ubcov/rng.hpp"

namespace ubcov {

MvnSampler::MvnSampler(const DenseSymMatrix& sigma) {
    const Eigen::LLT<Eigen::MatrixXd> llt(sigma.matrix());
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefiniteError("sample_mvn: covariance is not positive definite", 0.0);
    }
    lower_ = llt.matrixL();
    const Eigen::VectorXd pivots = lower_.diagonal().cwiseAbs2();
    const double scale = sigma.matrix().diagonal().cwiseAbs().maxCoeff();
    if (pivots.minCoeff() < 1e-14 * scale) {
        throw NotPositiveDefiniteError(
            "sample_mvn: covariance is numerically singular (Cholesky pivot " +
                std::to_string(pivots.minCoeff()) + ")",
            pivots.minCoeff());
    }
}

DataMatrix MvnSampler::draw(std::size_t n, std::uint64_t seed) const {
    Eigen::MatrixXd z = standard_normal_matrix(n, dim(), seed);
    return DataMatrix(z * lower_.transpose());
}

Eigen::MatrixXd standard_normal_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    CounterRng rng(seed);
    Eigen::MatrixXd z(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        for (Eigen::Index j = 0; j < z.cols(); ++j) {
            z(i, j) = rng.normal();
        }
    }
    return z;
}

DataMatrix sample_mvn(std::size_t n, const DenseSymMatrix& sigma, std::uint64_t seed) {
    return MvnSampler(sigma).draw(n, seed);
}

DataMatrix sample_mvn(std::size_t n, const UniformBlockCoords& sigma, std::uint64_t seed) {
    return MvnSampler(expand(sigma)).draw(n, seed);
}

DenseSymMatrix wishart_perturbation(std::size_t p, double sigma_scale, std::uint64_t seed) {
    if (!(sigma_scale >= 0.0)) {
        throw std::invalid_argument("wishart_perturbation: scale must be nonnegative");
    }
    const auto dim = static_cast<Eigen::Index>(p);
    if (sigma_scale == 0.0) {
        return DenseSymMatrix(Eigen::MatrixXd::Zero(dim, dim));
    }
    const Eigen::MatrixXd g = standard_normal_matrix(p, p, seed);
    return DenseSymMatrix(sigma_scale * (g.transpose() * g));
}

}  // namespace ubcov
