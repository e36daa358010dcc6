#include "ubcov/dense.hpp"

#include <Eigen/Eigenvalues>

#include "ubcov/error.hpp"

namespace ubcov {

DenseSymMatrix::DenseSymMatrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DimensionError("DenseSymMatrix requires a non-empty square matrix");
    }
    m_ = 0.5 * (m + m.transpose());
}

DenseSymMatrix DenseSymMatrix::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return DenseSymMatrix(Eigen::MatrixXd::Identity(n, n));
}

Eigen::VectorXd DenseSymMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

}  // namespace ubcov
