#include "ubcov/data.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ubcov/error.hpp"

namespace ubcov {

DataMatrix::DataMatrix(Eigen::MatrixXd rows) : x_(std::move(rows)) {
    if (x_.rows() < 2) {
        throw DimensionError("data needs at least 2 observations, got " +
                             std::to_string(x_.rows()));
    }
    if (x_.cols() < 2) {
        throw DimensionError("data needs at least 2 features, got " + std::to_string(x_.cols()));
    }
    if (!x_.allFinite()) {
        for (Eigen::Index i = 0; i < x_.rows(); ++i) {
            for (Eigen::Index j = 0; j < x_.cols(); ++j) {
                if (!std::isfinite(x_(i, j))) {
                    throw std::invalid_argument("non-finite value at row " + std::to_string(i + 1) +
                                                ", column " + std::to_string(j + 1));
                }
            }
        }
    }
}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> rows) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x_.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = x_.row(static_cast<Eigen::Index>(rows[i]));
    }
    return DataMatrix(std::move(out));
}

DataMatrix DataMatrix::leading_columns(std::size_t count) const {
    if (count > p()) {
        throw DimensionError("leading_columns: requested more columns than available");
    }
    return DataMatrix(x_.leftCols(static_cast<Eigen::Index>(count)));
}

SampleSize SampleSize::centered(std::size_t n) { return {n, n - 1}; }
SampleSize SampleSize::known_mean(std::size_t n) { return {n, n}; }

Eigen::MatrixXd center_columns(const Eigen::MatrixXd& x) {
    const Eigen::RowVectorXd mean = x.colwise().mean();
    return x.rowwise() - mean;
}

SampleCovariance sample_covariance(const DataMatrix& x, bool centered) {
    if (centered) {
        const Eigen::MatrixXd xc = center_columns(x.rows());
        Eigen::MatrixXd s = xc.transpose() * xc;
        s /= static_cast<double>(x.n() - 1);
        return {DenseSymMatrix(s), SampleSize::centered(x.n())};
    }
    Eigen::MatrixXd s = x.rows().transpose() * x.rows();
    s /= static_cast<double>(x.n());
    return {DenseSymMatrix(s), SampleSize::known_mean(x.n())};
}

SampleCovariance sample_correlation(const DataMatrix& x) {
    SampleCovariance cov = sample_covariance(x, true);
    const Eigen::MatrixXd& s = cov.matrix.matrix();
    Eigen::VectorXd inv_sd(s.rows());
    for (Eigen::Index j = 0; j < s.rows(); ++j) {
        if (!(s(j, j) > 0.0)) {
            throw std::invalid_argument("zero-variance column " + std::to_string(j + 1) +
                                        "; correlation is undefined");
        }
        inv_sd(j) = 1.0 / std::sqrt(s(j, j));
    }
    Eigen::MatrixXd r = inv_sd.asDiagonal() * s * inv_sd.asDiagonal();
    r.diagonal().setOnes();
    return {DenseSymMatrix(r), cov.size};
}

}  // namespace ubcov
