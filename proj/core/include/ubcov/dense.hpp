#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace ubcov {

/// Explicit symmetric matrix. The constructor stores (M + M^T) / 2 so the
/// stored entries are exactly symmetric; for an input that is already
/// symmetric this is a bitwise copy.
class DenseSymMatrix {
public:
    explicit DenseSymMatrix(const Eigen::MatrixXd& m);

    static DenseSymMatrix identity(std::size_t dim);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }

    /// Ascending eigenvalues from a dense symmetric eigensolve.
    Eigen::VectorXd eigenvalues() const;

private:
    Eigen::MatrixXd m_;
};

}  // namespace ubcov
